#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ouocc/estimation.hpp"

namespace ouocc {

/// Malformed input; line() is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Real number or one of inf, +inf, -inf, infinity (any case). NaN and
/// trailing characters are rejected with std::invalid_argument.
double parse_extended_real(std::string_view text);

/// Shortest-exact "%.17g" rendering; infinities print as inf / -inf.
std::string format_real(double x);

/**
 * Observation CSV: header `t_end,a,b,g`, one observation per row, `a`/`b`
 * may be -inf/inf. Blank lines are skipped. Throws ParseError with the
 * offending line number.
 */
ObservationSet read_observations(std::istream& in);
void write_observations(std::ostream& out, const ObservationSet& observations);

/// Writes content to a sibling temporary file and renames it over path.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace ouocc
