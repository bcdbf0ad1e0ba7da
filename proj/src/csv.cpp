#include "coalition/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace coalition::csv {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0 as well
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::string> split(std::string_view line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    auto field = line.substr(start, pos == std::string_view::npos ? pos : pos - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
      field.remove_suffix(1);
    out.emplace_back(field);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(std::string_view field) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not a number: '" + std::string(field) + "'");
  return v;
}

long long parse_int(std::string_view field) {
  long long v = 0;
  const auto* end = field.data() + field.size();
  const auto res = std::from_chars(field.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end)
    throw std::invalid_argument("not an integer: '" + std::string(field) + "'");
  return v;
}

Writer::Writer(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void Writer::sep() {
  if (in_row_ == columns_) throw std::logic_error("csv row has too many fields");
  if (in_row_++ > 0) out_ << ',';
}

Writer& Writer::operator<<(double v) {
  sep();
  out_ << format_double(v);
  return *this;
}

Writer& Writer::operator<<(int v) {
  sep();
  out_ << v;
  return *this;
}

Writer& Writer::operator<<(long long v) {
  sep();
  out_ << v;
  return *this;
}

Writer& Writer::operator<<(std::string_view v) {
  sep();
  out_ << v;
  return *this;
}

void Writer::end_row() {
  if (in_row_ != columns_) throw std::logic_error("csv row has too few fields");
  out_ << '\n';
  in_row_ = 0;
}

}  // namespace coalition::csv
