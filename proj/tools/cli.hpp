#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace d2d::cli {

/// Exit codes: 0 all checks pass, 2 an inequality was violated, 1 usage or runtime error.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitViolation = 2;

/// Default seed when --seed is absent: D2D_SEED if set, else 0.
std::uint64_t default_seed();

/// Parses flat key=value text ('#' comments, blank lines ignored).
/// Throws std::invalid_argument naming the line on malformed input.
std::map<std::string, std::string> parse_flat_config(const std::string& text);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Entry point shared by the d2d binary and the tests. `args` excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace d2d::cli
