#include "qfs/cli/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace qfs::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  for (const auto& h : header) field(h);
  end_row();
}

void CsvWriter::write_raw(std::string_view s) {
  if (current_ > 0) out_ << ',';
  out_ << s;
  ++current_;
}

CsvWriter& CsvWriter::field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    write_raw(s);
    return *this;
  }
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  q += '"';
  write_raw(q);
  return *this;
}

CsvWriter& CsvWriter::field(double v) {
  write_raw(format_double(v));
  return *this;
}

CsvWriter& CsvWriter::field(std::int64_t v) {
  write_raw(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::field(std::uint64_t v) {
  write_raw(std::to_string(v));
  return *this;
}

CsvWriter& CsvWriter::empty() {
  write_raw("");
  return *this;
}

void CsvWriter::end_row() {
  if (current_ != columns_) {
    throw std::logic_error("CSV row has " + std::to_string(current_) + " fields, header has " +
                           std::to_string(columns_));
  }
  out_ << '\n';
  current_ = 0;
}

}  // namespace qfs::cli
