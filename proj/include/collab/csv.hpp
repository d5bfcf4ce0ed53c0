#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace collab::csv {

// Minimal RFC-4180 comma-separated values support: double-quoted fields,
// doubled-quote escaping, CRLF tolerant. One record per physical line;
// newlines inside quoted fields are not supported so record counts stay
// aligned with line numbers.

class FormatError : public std::runtime_error {
 public:
  FormatError(std::size_t line, const std::string& message)
      : std::runtime_error(message), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct Record {
  std::size_t line = 0;  // 1-based physical line number
  std::vector<std::string> fields;
};

class Reader {
 public:
  explicit Reader(std::istream& in) : in_(in) {}

  /// Fills `rec` from the next non-empty line; returns false at end of
  /// input. Malformed quoting throws FormatError with the offending line
  /// already consumed, so the caller may keep reading.
  bool next(Record& rec);

 private:
  std::istream& in_;
  std::size_t line_ = 0;
};

/// Splits one line into fields. Throws FormatError on malformed quoting.
void parse_line(std::string_view line, std::size_t line_number, std::vector<std::string>& fields);

/// True when the field must be quoted to survive a round trip.
bool needs_quoting(std::string_view field);

/// Appends the field to `out`, quoted and escaped as needed.
void append_field(std::string& out, std::string_view field);

/// Writes one record terminated by '\n'.
void write_row(std::ostream& out, std::span<const std::string_view> fields);

}  // namespace collab::csv
