#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace polar {

// Binary layout shared by activation, probe and steering files:
//   magic[4] | version u32 LE | meta_len u64 LE | meta (UTF-8 JSON) | f32 LE payload
struct Container {
  std::array<char, 4> magic{};
  std::uint32_t version = 1;
  std::string metadata;
  std::vector<float> payload;
};

inline constexpr std::uint32_t kContainerVersion = 1;

void write_container(std::ostream& out, const Container& c);

// Throws FormatError: "bad magic", "unsupported version", "truncated ...".
Container read_container(std::istream& in, const std::array<char, 4>& expected_magic);

// Writes to "<path>.tmp" and renames over `path` once the stream is flushed.
void write_file_atomic(const std::string& path, const std::string& bytes);

std::string read_file(const std::string& path);

}  // namespace polar
