#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace weather {

// Minimal RFC-4180-style quoting: fields containing comma, quote or newline
// get quoted, embedded quotes doubled. Fields never span lines.
std::string csv_escape(std::string_view field);

// Splits one line into fields, honoring quoting. Throws CsvError on an
// unterminated quote.
std::vector<std::string> csv_split(const std::string& line);

}  // namespace weather
