#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace liftscore::csv {

using Row = std::vector<std::string>;

struct Record {
  std::size_t line_no = 0;  // 1-based physical line where the record starts
  Row fields;
};

/// RFC 4180 reader: comma separated, double-quote escaping, CRLF or LF.
/// A leading UTF-8 byte-order mark is skipped.
std::vector<Record> parse(std::string_view text);

/// Quotes a field when it contains a comma, quote, or line break.
std::string escape(std::string_view field);
std::string join(const Row& fields);

}  // namespace liftscore::csv
