#include "polar/container.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>

#include "polar/errors.hpp"

namespace polar {

static_assert(std::endian::native == std::endian::little, "container I/O assumes a little-endian host");

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in, const char* what) {
  T value{};
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(T))) throw FormatError(fmt::format("truncated {}", what));
  return value;
}

}  // namespace

void write_container(std::ostream& out, const Container& c) {
  out.write(c.magic.data(), 4);
  put<std::uint32_t>(out, c.version);
  put<std::uint64_t>(out, c.metadata.size());
  out.write(c.metadata.data(), static_cast<std::streamsize>(c.metadata.size()));
  out.write(reinterpret_cast<const char*>(c.payload.data()),
            static_cast<std::streamsize>(c.payload.size() * sizeof(float)));
}

Container read_container(std::istream& in, const std::array<char, 4>& expected_magic) {
  Container c;
  if (!in.read(c.magic.data(), 4)) throw FormatError("truncated header");
  if (c.magic != expected_magic) throw FormatError("bad magic");
  c.version = get<std::uint32_t>(in, "version");
  if (c.version != kContainerVersion) throw FormatError(fmt::format("unsupported version {}", c.version));
  const auto meta_len = get<std::uint64_t>(in, "metadata length");
  c.metadata.resize(meta_len);
  if (meta_len > 0 && !in.read(c.metadata.data(), static_cast<std::streamsize>(meta_len)))
    throw FormatError("truncated metadata");

  std::ostringstream rest;
  rest << in.rdbuf();
  const std::string bytes = rest.str();
  if (bytes.size() % sizeof(float) != 0) throw FormatError("truncated payload");
  c.payload.resize(bytes.size() / sizeof(float));
  if (!bytes.empty()) std::memcpy(c.payload.data(), bytes.data(), bytes.size());
  return c;
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(fmt::format("cannot open '{}' for writing", tmp));
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) throw Error(fmt::format("failed writing '{}'", tmp));
  }
  fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(fmt::format("cannot open '{}'", path));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace polar
