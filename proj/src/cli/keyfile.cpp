#include "cli/keyfile.hpp"

#include <cerrno>
#include <fstream>
#include <system_error>

namespace onesweep::cli {

namespace {

std::string cause() { return std::generic_category().message(errno); }

}  // namespace

std::vector<std::byte> read_file(const std::string& path) {
  errno = 0;
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) throw FileError("cannot open " + path + ": " + cause());
  const auto size = static_cast<std::size_t>(in.tellg());
  std::vector<std::byte> bytes(size);
  in.seekg(0);
  if (size > 0 &&
      !in.read(reinterpret_cast<char*>(bytes.data()),
               static_cast<std::streamsize>(size)))
    throw FileError("cannot read " + path + ": " + cause());
  return bytes;
}

void write_file(const std::string& path, std::span<const std::byte> bytes) {
  errno = 0;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FileError("cannot open " + path + " for writing: " + cause());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw FileError("cannot write " + path + ": " + cause());
}

}  // namespace onesweep::cli
