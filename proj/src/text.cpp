#include "qcs/text.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

namespace qcs {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("parse_double: bad number '" + s + "'");
  return v;
}

long parse_long(const std::string& s) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("parse_long: bad integer '" + s + "'");
  return v;
}

unsigned long long parse_u64(const std::string& s) {
  unsigned long long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last)
    throw std::invalid_argument("parse_u64: bad integer '" + s + "'");
  return v;
}

}  // namespace qcs
