#include "polar/steering.hpp"

#include <algorithm>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/container.hpp"
#include "polar/errors.hpp"
#include "polar/linalg.hpp"

namespace polar {

namespace {

constexpr std::array<char, 4> kMagic = {'P', 'L', 'R', 'B'};

}  // namespace

SteeringVector steering_vector(const PolarProbe& probe, const std::string& relation, int sign,
                               std::vector<double> alpha_grid, int layer) {
  if (sign != 1 && sign != -1) throw ValidationError("steering sign must be +1 or -1");
  const auto it = std::find(probe.relation_types.begin(), probe.relation_types.end(), relation);
  if (it == probe.relation_types.end())
    throw ValidationError(fmt::format("relation '{}' has no prototype in this probe", relation));
  const auto col = static_cast<Eigen::Index>(it - probe.relation_types.begin());
  Eigen::VectorXd v = pseudoinverse(probe.map) * probe.prototypes.col(col);
  const double norm = v.norm();
  if (!(norm > 1e-12)) throw Error(fmt::format("steering direction for '{}' vanishes", relation));
  SteeringVector out;
  out.relation = relation;
  out.sign = sign;
  out.direction = v / norm;
  out.alpha_grid = std::move(alpha_grid);
  out.layer = layer;
  return out;
}

std::string encode_steering(const SteeringVector& v) {
  nlohmann::ordered_json meta;
  meta["kind"] = "steering";
  meta["relation"] = v.relation;
  meta["sign"] = v.sign;
  meta["alpha_grid"] = v.alpha_grid;
  meta["layer"] = v.layer;
  meta["d"] = v.direction.size();
  Container c;
  c.magic = kMagic;
  c.metadata = meta.dump();
  c.payload.reserve(v.direction.size());
  for (Eigen::Index i = 0; i < v.direction.size(); ++i) c.payload.push_back(static_cast<float>(v.direction(i)));
  std::ostringstream out;
  write_container(out, c);
  return out.str();
}

SteeringVector decode_steering(const std::string& bytes) {
  std::istringstream in(bytes);
  const Container c = read_container(in, kMagic);
  SteeringVector v;
  int d = 0;
  try {
    const auto meta = nlohmann::json::parse(c.metadata);
    if (meta.value("kind", std::string{}) != "steering") throw FormatError("expected kind \"steering\"");
    v.relation = meta.at("relation").get<std::string>();
    v.sign = meta.at("sign").get<int>();
    v.alpha_grid = meta.value("alpha_grid", std::vector<double>{});
    v.layer = meta.value("layer", 0);
    d = meta.at("d").get<int>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(fmt::format("steering metadata: {}", e.what()));
  }
  if (d < 0 || static_cast<std::size_t>(d) != c.payload.size())
    throw FormatError(fmt::format("steering payload has {} values, expected {}", c.payload.size(), d));
  v.direction.resize(d);
  for (int i = 0; i < d; ++i) v.direction(i) = c.payload[i];
  return v;
}

void save_steering(const std::string& path, const SteeringVector& v) { write_file_atomic(path, encode_steering(v)); }

SteeringVector load_steering(const std::string& path) { return decode_steering(read_file(path)); }

}  // namespace polar
