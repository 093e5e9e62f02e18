#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace sgrlab {

/// Nine significant digits, "." decimal separator regardless of locale,
/// "-inf" / "inf" / "nan" for non-finite values.
std::string format_number(double v);

/// Same as format_number, "n/a" for an empty optional.
std::string format_number(const std::optional<double>& v);

/// Writes one comma-separated line. Fields containing a comma, quote or
/// newline are quoted.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace sgrlab
