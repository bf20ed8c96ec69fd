#pragma once

// Headerless little-endian record files. A keys-only file is a packed array
// of keys; a key-value file interleaves key then value for every record.

#include <bit>
#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace onesweep::cli {

/// I/O failure (open/read/write), reported with the path and cause.
class FileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Well-read file whose contents do not fit the requested layout.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::byte> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::byte> bytes);

namespace detail {

template <class T>
void store_le(std::byte* dst, T value) {
  std::memcpy(dst, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(dst[i], dst[sizeof(T) - 1 - i]);
}

template <class T>
T load_le(const std::byte* src) {
  std::byte tmp[sizeof(T)];
  std::memcpy(tmp, src, sizeof(T));
  if constexpr (std::endian::native == std::endian::big)
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(tmp[i], tmp[sizeof(T) - 1 - i]);
  T value;
  std::memcpy(&value, tmp, sizeof(T));
  return value;
}

}  // namespace detail

template <class K, class V>
struct Records {
  std::vector<K> keys;
  std::vector<V> values;  // empty for keys-only files
};

template <class K, class V>
std::vector<std::byte> encode_records(std::span<const K> keys,
                                      std::span<const V> values) {
  const bool with_values = !values.empty();
  const std::size_t width = sizeof(K) + (with_values ? sizeof(V) : 0);
  std::vector<std::byte> bytes(keys.size() * width);
  for (std::size_t i = 0; i < keys.size(); ++i) {
    std::byte* rec = bytes.data() + i * width;
    detail::store_le(rec, keys[i]);
    if (with_values) detail::store_le(rec + sizeof(K), values[i]);
  }
  return bytes;
}

template <class K, class V>
Records<K, V> decode_records(std::span<const std::byte> bytes,
                             bool with_values, const std::string& what) {
  const std::size_t width = sizeof(K) + (with_values ? sizeof(V) : 0);
  if (bytes.size() % width != 0)
    throw DataError(what + ": size " + std::to_string(bytes.size()) +
                    " bytes is not a multiple of the " +
                    std::to_string(width) + "-byte record width");
  const std::size_t n = bytes.size() / width;
  Records<K, V> out;
  out.keys.resize(n);
  if (with_values) out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::byte* rec = bytes.data() + i * width;
    out.keys[i] = detail::load_le<K>(rec);
    if (with_values) out.values[i] = detail::load_le<V>(rec + sizeof(K));
  }
  return out;
}

template <class K, class V>
Records<K, V> read_records(const std::string& path, bool with_values) {
  const auto bytes = read_file(path);
  return decode_records<K, V>(bytes, with_values, path);
}

template <class K, class V>
void write_records(const std::string& path, std::span<const K> keys,
                   std::span<const V> values) {
  write_file(path, encode_records<K, V>(keys, values));
}

}  // namespace onesweep::cli
