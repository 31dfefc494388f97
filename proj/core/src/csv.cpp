#include "hcad/csv.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>

namespace hcad::csv {

bool read_record(std::istream& in, std::vector<std::string>& cells,
                 std::size_t& lines_consumed) {
  cells.clear();
  int c = in.get();
  if (c == std::istream::traits_type::eof()) return false;

  ++lines_consumed;
  std::string cell;
  bool quoted = false;
  while (true) {
    if (c == std::istream::traits_type::eof()) {
      if (quoted) throw std::runtime_error("csv: unterminated quoted cell");
      break;
    }
    const char ch = static_cast<char>(c);
    if (quoted) {
      if (ch == '"') {
        const int peek = in.peek();
        if (peek == '"') {
          cell.push_back('"');
          in.get();
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++lines_consumed;
        cell.push_back(ch);
      }
    } else if (ch == '"' && cell.empty()) {
      quoted = true;
    } else if (ch == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\n') {
      break;
    } else if (ch == '\r') {
      // swallow \r\n; a bare \r is kept as data
      if (in.peek() == '\n') {
        in.get();
        break;
      }
      cell.push_back(ch);
    } else {
      cell.push_back(ch);
    }
    c = in.get();
  }
  cells.push_back(std::move(cell));
  return true;
}

std::string escape(const std::string& cell) {
  const bool needs_quotes =
      cell.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs_quotes) return cell;
  std::string out = "\"";
  for (const char ch : cell) {
    if (ch == '"') out += "\"\"";
    else out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

void write_record(std::ostream& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out.put(',');
    out << escape(cells[i]);
  }
  out.put('\n');
}

}  // namespace hcad::csv
