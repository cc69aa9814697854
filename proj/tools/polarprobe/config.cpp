#include "config.hpp"

#include <cmath>
#include <filesystem>

#include <fmt/format.h>

#include "polar/container.hpp"
#include "polar/errors.hpp"

namespace polarprobe {

using polar::ValidationError;

const nlohmann::json* ConfigNode::get(const std::string& key) const {
  if (!node_ || !node_->is_object()) return nullptr;
  auto it = node_->find(key);
  return it == node_->end() || it->is_null() ? nullptr : &*it;
}

bool ConfigNode::has(const std::string& key) const { return get(key) != nullptr; }

ConfigNode ConfigNode::child(const std::string& key) const {
  const nlohmann::json* j = get(key);
  if (j && !j->is_object()) throw ValidationError(fmt::format("{}: expected a section", field(key)));
  return {j, field(key)};
}

double ConfigNode::number(const std::string& key, double fallback) const {
  const nlohmann::json* j = get(key);
  if (!j) return fallback;
  if (!j->is_number()) throw ValidationError(fmt::format("{}: expected a number", field(key)));
  return j->get<double>();
}

int ConfigNode::integer(const std::string& key, int fallback) const {
  const nlohmann::json* j = get(key);
  if (!j) return fallback;
  if (!j->is_number_integer()) throw ValidationError(fmt::format("{}: expected an integer", field(key)));
  return j->get<int>();
}

bool ConfigNode::boolean(const std::string& key, bool fallback) const {
  const nlohmann::json* j = get(key);
  if (!j) return fallback;
  if (!j->is_boolean()) throw ValidationError(fmt::format("{}: expected true or false", field(key)));
  return j->get<bool>();
}

std::string ConfigNode::string(const std::string& key, const std::string& fallback) const {
  return optional_string(key).value_or(fallback);
}

std::optional<std::string> ConfigNode::optional_string(const std::string& key) const {
  const nlohmann::json* j = get(key);
  if (!j) return std::nullopt;
  if (!j->is_string()) throw ValidationError(fmt::format("{}: expected a string", field(key)));
  return j->get<std::string>();
}

namespace {

// A scalar is accepted where a list is expected.
template <typename T, typename Check>
std::vector<T> list_of(const nlohmann::json* j, const std::string& path, Check check, const char* what) {
  std::vector<T> out;
  if (!j) return out;
  auto one = [&](const nlohmann::json& v, const std::string& p) {
    if (!check(v)) throw ValidationError(fmt::format("{}: expected {}", p, what));
    out.push_back(v.get<T>());
  };
  if (j->is_array()) {
    for (std::size_t i = 0; i < j->size(); ++i) one((*j)[i], fmt::format("{}[{}]", path, i));
  } else {
    one(*j, path);
  }
  return out;
}

}  // namespace

std::vector<double> ConfigNode::numbers(const std::string& key) const {
  return list_of<double>(get(key), field(key), [](const nlohmann::json& v) { return v.is_number(); }, "a number");
}

std::vector<int> ConfigNode::integers(const std::string& key) const {
  return list_of<int>(get(key), field(key), [](const nlohmann::json& v) { return v.is_number_integer(); },
                      "an integer");
}

std::vector<std::string> ConfigNode::strings(const std::string& key) const {
  return list_of<std::string>(get(key), field(key), [](const nlohmann::json& v) { return v.is_string(); },
                              "a string");
}

namespace {

polar::SplitSize split_size(const ConfigNode& node, const polar::SplitSize& fallback) {
  polar::SplitSize s;
  s.graphs = node.integer("graphs", fallback.graphs);
  s.descriptions = node.integer("descriptions", fallback.descriptions);
  if (s.graphs < 0) throw ValidationError(fmt::format("{}: must be non-negative", node.field("graphs")));
  if (s.descriptions <= 0) throw ValidationError(fmt::format("{}: must be positive", node.field("descriptions")));
  return s;
}

template <typename F>
auto with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path, e.what()));
  }
}

}  // namespace

RunConfig load_config(const std::optional<std::string>& path, const std::optional<std::uint64_t>& seed_override) {
  RunConfig cfg;
  cfg.raw = nlohmann::json::object();
  if (path) {
    if (!std::filesystem::exists(*path)) throw ValidationError(fmt::format("config file not found: {}", *path));
    const std::string text = polar::read_file(*path);
    try {
      cfg.raw = nlohmann::json::parse(text, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(fmt::format("{}: not valid JSON ({})", *path, e.what()));
    }
    if (!cfg.raw.is_object()) throw ValidationError(fmt::format("{}: top level must be an object", *path));
  }
  const ConfigNode root = cfg.root();

  if (seed_override) {
    cfg.seed = *seed_override;
  } else if (root.has("seed")) {
    const auto& s = cfg.raw["seed"];
    if (!s.is_number_unsigned()) throw ValidationError("seed: expected a non-negative integer");
    cfg.seed = s.get<std::uint64_t>();
  } else {
    throw ValidationError("seed: required (set it in the config or pass --seed)");
  }

  const auto domain = with_path("domain", [&] { return polar::parse_domain(root.string("domain", "ordinality")); });
  const ConfigNode ds = root.child("dataset");
  cfg.dataset = polar::DatasetSpec::defaults(domain);
  cfg.dataset.seed = cfg.seed;
  cfg.dataset.n_entities = ds.integer("n_entities", cfg.dataset.n_entities);
  cfg.dataset.n_lines = ds.integer("n_lines", cfg.dataset.n_lines);
  if (cfg.dataset.n_entities < 3) throw ValidationError("dataset.n_entities: must be at least 3");
  if (cfg.dataset.n_lines < 1) throw ValidationError("dataset.n_lines: must be positive");
  cfg.dataset.train = split_size(ds.child("train"), cfg.dataset.train);
  cfg.dataset.validation = split_size(ds.child("validation"), cfg.dataset.validation);
  cfg.dataset.test = split_size(ds.child("test"), cfg.dataset.test);
  const ConfigNode ood = ds.child("ood");
  cfg.dataset.ood.entities = ood.boolean("entities", false);
  cfg.dataset.ood.relations = ood.boolean("relations", false);
  cfg.dataset.ood.no_prompt = ood.boolean("no_prompt", false);
  cfg.vocabulary = ds.optional_string("vocabulary");

  const ConfigNode em = root.child("embed");
  cfg.embed.kind = em.string("kind", cfg.embed.kind);
  if (cfg.embed.kind != "planted" && cfg.embed.kind != "random")
    throw ValidationError("embed.kind: expected \"planted\" or \"random\"");
  cfg.embed.mixing = em.string("mixing", cfg.embed.mixing);
  if (cfg.embed.mixing != "random" && cfg.embed.mixing != "identity")
    throw ValidationError("embed.mixing: expected \"random\" or \"identity\"");
  cfg.embed.d = em.integer("d", cfg.embed.d);
  cfg.embed.noise = em.number("noise", cfg.embed.noise);
  cfg.embed.layer = em.integer("layer", cfg.embed.layer);
  if (cfg.embed.d <= 0) throw ValidationError("embed.d: must be positive");
  if (!(cfg.embed.noise >= 0) || !std::isfinite(cfg.embed.noise))
    throw ValidationError("embed.noise: must be a non-negative number");

  const ConfigNode tr = root.child("train");
  polar::TrainConfig& t = cfg.train;
  t.seed = cfg.seed;
  t.lambda = tr.number("lambda", t.lambda);
  t.learning_rate = tr.number("learning_rate", t.learning_rate);
  t.epochs = tr.integer("epochs", t.epochs);
  t.rank = tr.integer("rank", t.rank);
  t.batch_graphs = tr.integer("batch_graphs", t.batch_graphs);
  t.soft.epsilon = tr.number("soft_rank_epsilon", t.soft.epsilon);
  t.soft.max_iters = tr.integer("sinkhorn_iters", t.soft.max_iters);
  t.soft.tolerance = tr.number("sinkhorn_tolerance", t.soft.tolerance);
  t.soft.anneal = tr.number("sinkhorn_anneal", t.soft.anneal);
  t.beta1 = tr.number("beta1", t.beta1);
  t.beta2 = tr.number("beta2", t.beta2);
  t.adam_epsilon = tr.number("adam_epsilon", t.adam_epsilon);
  t.validate = tr.boolean("validate", t.validate);
  t.type_set = with_path("train.type_index_set", [&] {
    return polar::parse_type_index_set(tr.string("type_index_set", std::string(polar::to_string(t.type_set))));
  });
  try {
    polar::check_config(t);
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("train.{}", e.what()));
  }

  cfg.eval_split = with_path("eval.split", [&] { return polar::parse_split(root.child("eval").string("split", "test")); });
  return cfg;
}

nlohmann::ordered_json train_config_json(const polar::TrainConfig& c) {
  nlohmann::ordered_json j;
  j["lambda"] = c.lambda;
  j["learning_rate"] = c.learning_rate;
  j["epochs"] = c.epochs;
  j["rank"] = c.rank;
  j["batch_graphs"] = c.batch_graphs;
  j["soft_rank_epsilon"] = c.soft.epsilon;
  j["sinkhorn_iters"] = c.soft.max_iters;
  j["sinkhorn_tolerance"] = c.soft.tolerance;
  j["sinkhorn_anneal"] = c.soft.anneal;
  j["beta1"] = c.beta1;
  j["beta2"] = c.beta2;
  j["adam_epsilon"] = c.adam_epsilon;
  j["seed"] = c.seed;
  j["type_index_set"] = polar::to_string(c.type_set);
  return j;
}

}  // namespace polarprobe
