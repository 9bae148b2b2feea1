#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "ramanwt/error.hpp"

namespace ramanwt {

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& data);

// Little-endian binary writer. Floating point values are stored as raw IEEE
// bytes so round-trips are bit-exact.
class BinWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(char(v)); }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void u64(std::uint64_t v) { raw(&v, 8); }
  void i32(std::int32_t v) { raw(&v, 4); }
  void i64(std::int64_t v) { raw(&v, 8); }
  void f32(float v) { raw(&v, 4); }
  void f64(double v) { raw(&v, 8); }

  void str(const std::string& s) {
    u64(s.size());
    buf_.append(s);
  }

  void bytes(const void* p, std::size_t n) { raw(p, n); }

  template <class T>
  void vec(const std::vector<T>& v) {
    static_assert(std::is_trivially_copyable_v<T>);
    u64(v.size());
    if (!v.empty()) raw(v.data(), v.size() * sizeof(T));
  }

  const std::string& data() const { return buf_; }
  void to_file(const std::string& path) const { write_file(path, buf_); }

 private:
  void raw(const void* p, std::size_t n) {
    buf_.append(reinterpret_cast<const char*>(p), n);
  }
  std::string buf_;
};

class BinReader {
 public:
  explicit BinReader(const std::string& data) : data_(data) {}

  std::uint8_t u8() { return std::uint8_t(take(1)[0]); }
  std::uint32_t u32() { return get<std::uint32_t>(); }
  std::uint64_t u64() { return get<std::uint64_t>(); }
  std::int32_t i32() { return get<std::int32_t>(); }
  std::int64_t i64() { return get<std::int64_t>(); }
  float f32() { return get<float>(); }
  double f64() { return get<double>(); }

  std::string str() {
    const auto n = u64();
    const char* p = take(n);
    return std::string(p, n);
  }

  void bytes(void* p, std::size_t n) { std::memcpy(p, take(n), n); }

  template <class T>
  std::vector<T> vec() {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto n = u64();
    std::vector<T> out(n);
    if (n) std::memcpy(out.data(), take(n * sizeof(T)), n * sizeof(T));
    return out;
  }

  bool at_end() const { return off_ == data_.size(); }

 private:
  template <class T>
  T get() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const char* take(std::size_t n) {
    if (off_ + n > data_.size()) raise(Errc::IoError, "binary stream truncated");
    const char* p = data_.data() + off_;
    off_ += n;
    return p;
  }
  const std::string& data_;
  std::size_t off_ = 0;
};

}  // namespace ramanwt
