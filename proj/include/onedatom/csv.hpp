#pragma once

// Deterministic CSV output: 17 significant digits, '.' separator, '\n'.

#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace onedatom {

inline std::string format_number(double v)
{
    char buf[40];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
    return std::string(buf, static_cast<std::size_t>(n));
}

class CsvWriter {
public:
    CsvWriter(std::ostream& os, std::initializer_list<std::string_view> header) : os_(os)
    {
        bool first = true;
        for (auto h : header) {
            if (!first)
                os_ << ',';
            os_ << h;
            first = false;
        }
        os_ << '\n';
        columns_ = header.size();
    }

    void row(const std::vector<double>& values)
    {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i)
                os_ << ',';
            os_ << format_number(values[i]);
        }
        os_ << '\n';
    }

    std::size_t columns() const noexcept { return columns_; }

private:
    std::ostream& os_;
    std::size_t columns_ = 0;
};

} // namespace onedatom
