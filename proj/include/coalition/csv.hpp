#pragma once

// Minimal CSV plumbing with a pinned number format: every double is written
// in its shortest round-trip representation, so identical inputs give
// byte-identical files on every platform with a conforming std::to_chars.

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace coalition::csv {

std::string format_double(double v);

std::vector<std::string> split(std::string_view line, char sep = ',');

// Strict parse: the whole field must be consumed. Throws std::invalid_argument.
double parse_double(std::string_view field);
long long parse_int(std::string_view field);

class Writer {
 public:
  Writer(std::ostream& out, const std::vector<std::string>& header);

  Writer& operator<<(double v);
  Writer& operator<<(int v);
  Writer& operator<<(long long v);
  Writer& operator<<(std::string_view v);
  void end_row();

 private:
  void sep();
  std::ostream& out_;
  std::size_t columns_;
  std::size_t in_row_ = 0;
};

}  // namespace coalition::csv
