#pragma once

// Grid specifications "a:b:n" (linear, inclusive) and "log:a:b:n"
// (10^a .. 10^b, log-spaced).

#include "errors.hpp"

#include <charconv>
#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <stdexcept>
#include <vector>

namespace onedatom {

struct GridSpec {
    bool logarithmic = false;
    double start = 0.0;
    double stop = 0.0;
    std::size_t count = 0;

    std::vector<double> values() const
    {
        std::vector<double> v(count);
        for (std::size_t i = 0; i < count; ++i) {
            const double u = count == 1 ? 0.0
                                        : static_cast<double>(i) / static_cast<double>(count - 1);
            // pin the endpoints so they are exact
            const double e = i + 1 == count && count > 1 ? stop : start + (stop - start) * u;
            v[i] = logarithmic ? std::pow(10.0, e) : e;
        }
        return v;
    }
};

namespace detail {

inline double parse_double(std::string_view s, std::string_view what)
{
    try {
        std::size_t used = 0;
        const std::string str(s);
        const double v = std::stod(str, &used);
        if (used != str.size() || !std::isfinite(v))
            throw std::invalid_argument("trailing");
        return v;
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::InvalidArgument,
                    "bad number '" + std::string(s) + "' in " + std::string(what));
    }
}

} // namespace detail

inline GridSpec parse_grid(std::string_view text)
{
    std::vector<std::string_view> parts;
    std::size_t pos = 0;
    while (true) {
        const auto colon = text.find(':', pos);
        parts.push_back(text.substr(pos, colon - pos));
        if (colon == std::string_view::npos)
            break;
        pos = colon + 1;
    }
    GridSpec g;
    if (parts.size() == 4 && parts[0] == "log") {
        g.logarithmic = true;
        parts.erase(parts.begin());
    }
    if (parts.size() != 3)
        throw Error(ErrorKind::InvalidArgument,
                    "grid must be 'a:b:n' or 'log:a:b:n', got '" + std::string(text) + "'");
    g.start = detail::parse_double(parts[0], "grid");
    g.stop = detail::parse_double(parts[1], "grid");
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), n);
    if (ec != std::errc{} || ptr != parts[2].data() + parts[2].size() || n == 0)
        throw Error(ErrorKind::InvalidArgument,
                    "grid point count must be a positive integer, got '" + std::string(parts[2]) +
                        "'");
    if (n == 1 && g.start != g.stop)
        throw Error(ErrorKind::InvalidArgument, "a one-point grid needs a == b");
    g.count = n;
    return g;
}

inline std::vector<double> grid_values(std::string_view text) { return parse_grid(text).values(); }

} // namespace onedatom
