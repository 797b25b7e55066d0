#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fakerev::csv {

struct Row {
  std::size_t line = 0;  // 1-based line on which the record starts
  std::vector<std::string> fields;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Throws DataError on an unterminated quote.
std::vector<Row> read(std::istream& in);

/// Quotes a field only when it needs it.
std::string escape(std::string_view field);

void write_row(std::ostream& out, std::span<const std::string> fields);

}  // namespace fakerev::csv
