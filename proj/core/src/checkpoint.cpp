#include "polar/checkpoint.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/container.hpp"
#include "polar/errors.hpp"

namespace polar {

namespace {

constexpr std::array<char, 4> kMagic = {kProbeMagic[0], kProbeMagic[1], kProbeMagic[2], kProbeMagic[3]};

void append_row_major(std::vector<float>& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) out.push_back(static_cast<float>(m(i, j)));
}

}  // namespace

std::string encode_probe(const PolarProbe& probe, const ProbeFileInfo& info) {
  if (probe.prototypes.rows() != probe.map.rows())
    throw DimensionError("prototype rows differ from the probe rank");
  if (static_cast<int>(probe.relation_types.size()) != probe.num_prototypes())
    throw DimensionError("relation type names do not match prototype columns");
  nlohmann::ordered_json meta;
  meta["kind"] = "probe";
  meta["k"] = probe.rank();
  meta["d"] = probe.dim();
  meta["t"] = probe.num_prototypes();
  meta["domain"] = info.domain;
  meta["layer"] = info.layer;
  meta["relation_types"] = probe.relation_types;
  try {
    meta["config"] = nlohmann::ordered_json::parse(info.config_json);
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("probe config is not valid JSON");
  }
  Container c;
  c.magic = kMagic;
  c.metadata = meta.dump();
  c.payload.reserve(probe.map.size() + probe.prototypes.size());
  append_row_major(c.payload, probe.map);
  append_row_major(c.payload, probe.prototypes);
  std::ostringstream out;
  write_container(out, c);
  return out.str();
}

PolarProbe decode_probe(const std::string& bytes, ProbeFileInfo* info) {
  std::istringstream in(bytes);
  const Container c = read_container(in, kMagic);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(c.metadata);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("probe metadata: {}", e.what()));
  }
  if (meta.value("kind", std::string{}) != "probe")
    throw FormatError(fmt::format("expected kind \"probe\", found \"{}\"", meta.value("kind", std::string{})));
  int k = 0, d = 0, t = 0;
  PolarProbe probe;
  try {
    k = meta.at("k").get<int>();
    d = meta.at("d").get<int>();
    t = meta.at("t").get<int>();
    probe.relation_types = meta.at("relation_types").get<std::vector<std::string>>();
    if (info) {
      info->domain = meta.value("domain", std::string{});
      info->layer = meta.value("layer", 0);
      info->config_json = meta.contains("config") ? meta["config"].dump() : "{}";
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("probe metadata: {}", e.what()));
  }
  if (k <= 0 || d <= 0 || t < 0 || static_cast<int>(probe.relation_types.size()) != t)
    throw FormatError("probe metadata has inconsistent shapes");
  const std::size_t expected = static_cast<std::size_t>(k) * d + static_cast<std::size_t>(k) * t;
  if (c.payload.size() != expected)
    throw FormatError(fmt::format("probe payload has {} values, expected {}", c.payload.size(), expected));
  probe.map.resize(k, d);
  probe.prototypes.resize(k, t);
  std::size_t pos = 0;
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) probe.map(i, j) = c.payload[pos++];
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < t; ++j) probe.prototypes(i, j) = c.payload[pos++];
  if (!probe.map.allFinite() || !probe.prototypes.allFinite()) throw ValidationError("probe contains non-finite values");
  return probe;
}

void save_probe(const std::string& path, const PolarProbe& probe, const ProbeFileInfo& info) {
  write_file_atomic(path, encode_probe(probe, info));
}

PolarProbe load_probe(const std::string& path, ProbeFileInfo* info) { return decode_probe(read_file(path), info); }

}  // namespace polar
