#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dynevo::io {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written in host order and assume little-endian");

/// Raised for any malformed, truncated or version-mismatched byte sequence.
class DecodeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ByteWriter {
 public:
  void raw(std::span<const std::uint8_t> bytes) { buf_.insert(buf_.end(), bytes.begin(), bytes.end()); }
  void tag(std::string_view s) {
    raw({reinterpret_cast<const std::uint8_t*>(s.data()), s.size()});
  }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) { put(v); }
  void u64(std::uint64_t v) { put(v); }
  void f64(double v) { put(v); }
  void str(std::string_view s) {
    u32(static_cast<std::uint32_t>(s.size()));
    tag(s);
  }
  void blob(std::span<const std::uint8_t> bytes) {
    u64(bytes.size());
    raw(bytes);
  }

  const std::vector<std::uint8_t>& bytes() const& { return buf_; }
  std::vector<std::uint8_t> take() && { return std::move(buf_); }

 private:
  template <typename T>
  void put(T v) {
    std::uint8_t tmp[sizeof(T)];
    std::memcpy(tmp, &v, sizeof(T));
    buf_.insert(buf_.end(), tmp, tmp + sizeof(T));
  }

  std::vector<std::uint8_t> buf_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  /// Consumes `s.size()` bytes and fails unless they equal `s`.
  void expect_tag(std::string_view s, std::string_view what) {
    auto got = take(s.size(), what);
    if (std::memcmp(got.data(), s.data(), s.size()) != 0)
      throw DecodeError(std::string(what) + ": bad magic");
  }
  std::uint8_t u8(std::string_view what) { return get<std::uint8_t>(what); }
  std::uint32_t u32(std::string_view what) { return get<std::uint32_t>(what); }
  std::uint64_t u64(std::string_view what) { return get<std::uint64_t>(what); }
  double f64(std::string_view what) { return get<double>(what); }
  std::string str(std::string_view what) {
    const auto n = u32(what);
    auto s = take(n, what);
    return {reinterpret_cast<const char*>(s.data()), s.size()};
  }
  std::span<const std::uint8_t> blob(std::string_view what) {
    const auto n = u64(what);
    return take(n, what);
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> take(std::size_t n, std::string_view what) {
    if (n > remaining()) throw DecodeError(std::string(what) + ": truncated input");
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }
  template <typename T>
  T get(std::string_view what) {
    auto s = take(sizeof(T), what);
    T v;
    std::memcpy(&v, s.data(), sizeof(T));
    return v;
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

/// CRC-32 (zlib polynomial) over `bytes`.
std::uint32_t crc32(std::span<const std::uint8_t> bytes);

}  // namespace dynevo::io
