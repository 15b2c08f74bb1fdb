#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace gcflab {

/// Shortest decimal string that reads back to the same double (at most 17
/// significant digits). Non-finite values print as nan, inf, -inf.
std::string format_real(double x);

/// RFC 4180 field quoting: fields containing a comma, quote or line break are
/// wrapped in quotes with inner quotes doubled.
std::string csv_field(std::string_view s);

/// Writes one CSV record terminated by '\n'.
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace gcflab
