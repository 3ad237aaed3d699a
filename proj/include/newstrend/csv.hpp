#pragma once

#include <string>
#include <vector>

namespace newstrend {

// RFC 4180 parsing: comma separator, double-quote quoting, "" escapes inside
// quoted fields, quoted fields may span newlines. Accepts LF or CRLF line
// endings and strips a UTF-8 BOM if present.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

std::vector<std::vector<std::string>> read_csv_file(const std::string& path);

// Quotes a field when it contains a comma, quote, or newline.
std::string csv_escape(const std::string& field);

}  // namespace newstrend
