#include "polar/acts.hpp"

#include <cmath>
#include <cstring>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/container.hpp"
#include "polar/errors.hpp"

namespace polar {

namespace {
constexpr std::array<char, 4> kMagic{kActsMagic[0], kActsMagic[1], kActsMagic[2], kActsMagic[3]};
}

std::map<std::string, int> ActsFile::index() const {
  std::map<std::string, int> out;
  for (int i = 0; i < static_cast<int>(records.size()); ++i) out.emplace(records[i].sample_id, i);
  return out;
}

std::string encode_acts(const ActsFile& file) {
  nlohmann::ordered_json meta;
  meta["model"] = file.metadata.model;
  meta["layer"] = file.metadata.layer;
  meta["d"] = file.metadata.d;
  meta["dtype"] = "f32le";
  for (const auto& [k, v] : file.metadata.extra) meta[k] = v;

  Container c;
  c.magic = kMagic;
  auto samples = nlohmann::ordered_json::array();
  std::uint64_t offset = 0;
  for (const auto& r : file.records) {
    if (r.cols != file.metadata.d)
      throw DimensionError(fmt::format("record '{}' has width {}, header says d={}", r.sample_id, r.cols,
                                       file.metadata.d));
    if (r.values.size() != static_cast<std::size_t>(r.rows) * r.cols)
      throw DimensionError(fmt::format("record '{}' holds {} values for a {}x{} matrix", r.sample_id,
                                       r.values.size(), r.rows, r.cols));
    for (float v : r.values)
      if (!std::isfinite(v)) throw ValidationError(fmt::format("record '{}' contains a non-finite value", r.sample_id));
    nlohmann::ordered_json s;
    s["sample_id"] = r.sample_id;
    s["n"] = r.rows;
    s["byte_offset"] = offset;
    samples.push_back(std::move(s));
    offset += r.values.size() * sizeof(float);
    c.payload.insert(c.payload.end(), r.values.begin(), r.values.end());
  }
  meta["samples"] = std::move(samples);
  c.metadata = meta.dump();

  std::ostringstream out;
  write_container(out, c);
  return out.str();
}

ActsFile decode_acts(const std::string& bytes) {
  std::istringstream in(bytes);
  Container c = read_container(in, kMagic);
  ActsFile file;
  try {
    const auto meta = nlohmann::json::parse(c.metadata);
    file.metadata.model = meta.at("model").get<std::string>();
    file.metadata.layer = meta.at("layer").get<int>();
    file.metadata.d = meta.at("d").get<int>();
    if (meta.at("dtype").get<std::string>() != "f32le") throw FormatError("unsupported dtype");
    for (const auto& [k, v] : meta.items()) {
      if (k == "model" || k == "layer" || k == "d" || k == "dtype" || k == "samples") continue;
      file.metadata.extra[k] = v.is_string() ? v.get<std::string>() : v.dump();
    }
    const std::size_t payload_bytes = c.payload.size() * sizeof(float);
    for (const auto& s : meta.at("samples")) {
      ActivationRecord r;
      r.sample_id = s.at("sample_id").get<std::string>();
      r.layer = file.metadata.layer;
      r.rows = s.at("n").get<int>();
      r.cols = file.metadata.d;
      const auto offset = s.at("byte_offset").get<std::uint64_t>();
      const std::size_t count = static_cast<std::size_t>(r.rows) * r.cols;
      if (offset % sizeof(float) != 0 || offset + count * sizeof(float) > payload_bytes)
        throw FormatError(fmt::format("truncated payload for sample '{}'", r.sample_id));
      const auto first = c.payload.begin() + static_cast<std::ptrdiff_t>(offset / sizeof(float));
      r.values.assign(first, first + static_cast<std::ptrdiff_t>(count));
      file.records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(fmt::format("invalid activation metadata: {}", ex.what()));
  }
  return file;
}

void write_acts(const std::string& path, const ActsFile& file) { write_file_atomic(path, encode_acts(file)); }

ActsFile read_acts(const std::string& path) { return decode_acts(read_file(path)); }

}  // namespace polar
