#include <fstream>
#include <sstream>

#include "ramanwt/serialize.hpp"

namespace ramanwt {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::IoError, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) raise(Errc::IoError, "read failed: " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::IoError, "cannot open for writing: " + path);
  out.write(data.data(), std::streamsize(data.size()));
  out.flush();
  if (!out) raise(Errc::IoError, "write failed: " + path);
}

}  // namespace ramanwt
