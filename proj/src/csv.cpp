#include "collab/csv.hpp"

#include <istream>
#include <ostream>

namespace collab::csv {

bool Reader::next(Record& rec) {
  std::string line;
  while (std::getline(in_, line)) {
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    rec.line = line_;
    parse_line(line, line_, rec.fields);
    return true;
  }
  return false;
}

void parse_line(std::string_view line, std::size_t line_number, std::vector<std::string>& fields) {
  fields.clear();
  std::string field;
  std::size_t i = 0;
  const std::size_t n = line.size();
  while (true) {
    field.clear();
    if (i < n && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < n) {
        if (line[i] == '"') {
          if (i + 1 < n && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
          } else {
            ++i;
            closed = true;
            break;
          }
        } else {
          field.push_back(line[i]);
          ++i;
        }
      }
      if (!closed) throw FormatError(line_number, "unterminated quoted field");
      if (i < n && line[i] != ',') {
        throw FormatError(line_number, "unexpected character after closing quote");
      }
    } else {
      while (i < n && line[i] != ',') {
        if (line[i] == '"') throw FormatError(line_number, "bare double-quote in unquoted field");
        field.push_back(line[i]);
        ++i;
      }
    }
    fields.push_back(field);
    if (i >= n) break;
    ++i;  // skip the comma; a trailing comma yields a final empty field
    if (i == n) {
      fields.emplace_back();
      break;
    }
  }
}

bool needs_quoting(std::string_view field) {
  return field.find_first_of(",\"\r\n") != std::string_view::npos;
}

void append_field(std::string& out, std::string_view field) {
  if (!needs_quoting(field)) {
    out.append(field);
    return;
  }
  out.push_back('"');
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

void write_row(std::ostream& out, std::span<const std::string_view> fields) {
  std::string row;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) row.push_back(',');
    append_field(row, fields[i]);
  }
  row.push_back('\n');
  out.write(row.data(), static_cast<std::streamsize>(row.size()));
}

}  // namespace collab::csv
