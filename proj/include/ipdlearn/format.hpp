#ifndef IPDLEARN_FORMAT_HPP
#define IPDLEARN_FORMAT_HPP

#include <cstdio>
#include <string>

namespace ipdlearn {

// Decimal with 12 significant digits, used for every number written to disk.
inline std::string FormatReal(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace ipdlearn

#endif  // IPDLEARN_FORMAT_HPP
