#pragma once

#include <string>

#include "polar/probe.hpp"

namespace polar {

inline constexpr char kProbeMagic[4] = {'P', 'L', 'R', 'B'};

struct ProbeFileInfo {
  std::string domain;
  int layer = 0;
  std::string config_json = "{}";  // training configuration, verbatim
};

// JSON header {kind:"probe", k, d, t, domain, layer, relation_types, config}
// followed by B (k x d) then the prototypes (k x t), both row-major f32 LE.
void save_probe(const std::string& path, const PolarProbe& probe, const ProbeFileInfo& info);
PolarProbe load_probe(const std::string& path, ProbeFileInfo* info = nullptr);

std::string encode_probe(const PolarProbe& probe, const ProbeFileInfo& info);
PolarProbe decode_probe(const std::string& bytes, ProbeFileInfo* info = nullptr);

}  // namespace polar
