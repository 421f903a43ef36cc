#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qfs::cli {

/// %.17g, with "nan"/"inf"/"-inf" for non-finite values.
std::string format_double(double v);

/// Minimal RFC-4180 writer; fields containing separators or quotes are quoted.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& field(std::string_view s);
  CsvWriter& field(const char* s) { return field(std::string_view(s)); }
  CsvWriter& field(double v);
  CsvWriter& field(std::int64_t v);
  CsvWriter& field(std::uint64_t v);
  CsvWriter& field(int v) { return field(static_cast<std::int64_t>(v)); }
  CsvWriter& field(bool v) { return field(std::int64_t{v ? 1 : 0}); }
  CsvWriter& empty();
  /// Ends the row; throws if the field count differs from the header.
  void end_row();

 private:
  void write_raw(std::string_view s);

  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

}  // namespace qfs::cli
