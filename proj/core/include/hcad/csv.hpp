#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hcad::csv {

// Reads one RFC 4180 record from the stream. Quoted cells may contain
// commas, doubled quotes and embedded newlines. Returns false at EOF.
// lines_consumed is incremented once per physical line read, so callers can
// report 1-based line numbers in errors.
bool read_record(std::istream& in, std::vector<std::string>& cells,
                 std::size_t& lines_consumed);

// Quotes a cell if it contains a comma, quote or newline.
std::string escape(const std::string& cell);

// Writes one record terminated by '\n'.
void write_record(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace hcad::csv
