#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "oup/kappa.hpp"
#include "oup/series.hpp"

namespace oup::cli {

/// Reads a series from CSV: one column (values, spacing `tau`) or two
/// columns (t, value; spacing inferred). An optional header line is
/// skipped, as are blank lines and lines starting with '#'.
/// Throws ParseError (with the line number) or IrregularSpacing.
TimeSeriesSample parse_csv(std::istream& in, double tau = 1.0, MeanPolicy policy = {});
TimeSeriesSample ingest_csv(const std::filesystem::path& path, double tau = 1.0, MeanPolicy policy = {});

/// Relative tolerance on the spacing of two-column input.
inline constexpr double kSpacingTolerance = 1e-9;

/// Shortest decimal text that reads back to the same double.
std::string format_number(double value);

/// Parses a whole string as a double; throws ParseError otherwise.
double parse_number(std::string_view text);

/// "a", "a+bi", "a-bi", "bi" with optional spaces.
Complex parse_complex(std::string_view text);

/// Comma-separated list of numbers or complex numbers.
std::vector<double> parse_number_list(std::string_view text);
std::vector<Complex> parse_complex_list(std::string_view text);

/// Runs `write` on the file at `path`, or on `fallback` when path is "-".
void write_to(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& write);

}  // namespace oup::cli
