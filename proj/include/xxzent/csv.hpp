#pragma once

// Minimal CSV writer: header row, comma separator, LF line endings, doubles
// with 17 significant digits so values round-trip exactly.

#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace xxzent::csv {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

using Cell = std::variant<double, long long, std::string>;

inline std::string quote(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

class Writer {
 public:
  Writer(const std::string& path, std::vector<std::string> header)
      : out_(path, std::ios::binary), columns_(header.size()) {
    if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
    write_cells(header);
  }

  void row(std::initializer_list<Cell> cells) {
    if (cells.size() != columns_) throw std::logic_error("csv row has wrong number of columns");
    std::vector<std::string> text;
    text.reserve(cells.size());
    for (const auto& c : cells) {
      if (const auto* d = std::get_if<double>(&c)) text.push_back(format_double(*d));
      else if (const auto* i = std::get_if<long long>(&c)) text.push_back(std::to_string(*i));
      else text.push_back(std::get<std::string>(c));
    }
    write_cells(text);
  }

 private:
  void write_cells(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << quote(cells[i]);
    }
    out_ << '\n';
  }

  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace xxzent::csv
