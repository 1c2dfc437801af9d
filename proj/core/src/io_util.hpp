#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "varmath/errors.hpp"

namespace varmath::detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("read failure on '" + path + "'");
  }
  return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << content;
  out.flush();
  if (!out) {
    throw IoError("write failure on '" + path + "'");
  }
}

}  // namespace varmath::detail
