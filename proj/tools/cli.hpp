#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace onedatom::cli {

inline constexpr const char* version = "0.1.0";

/// Runs one command line (without the program name). CSV goes to `out`
/// unless --out is given; diagnostics go to `err`.
/// Returns 0 on success, 2 on argument errors, 3 on domain errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace onedatom::cli
