#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "polar/acts.hpp"
#include "polar/alignment.hpp"
#include "polar/baselines.hpp"
#include "polar/checkpoint.hpp"
#include "polar/container.hpp"
#include "polar/embedders.hpp"
#include "polar/errors.hpp"
#include "polar/eval.hpp"
#include "polar/pca.hpp"
#include "polar/qa_correlation.hpp"
#include "polar/render.hpp"
#include "polar/steering.hpp"
#include "polar/train.hpp"

namespace polarprobe {

namespace fs = std::filesystem;
using polar::ValidationError;

namespace {

std::string resolve(const std::optional<std::string>& flag, const RunConfig& cfg, const char* key,
                    const Paths& p, const char* file_name) {
  if (flag) return *flag;
  if (auto v = cfg.root().child("paths").optional_string(key)) return *v;
  return (fs::path(p.out) / file_name).string();
}

std::string out_file(const Paths& p, const std::string& name) {
  fs::create_directories(p.out);
  return (fs::path(p.out) / name).string();
}

void require_file(const std::string& path, const char* what) {
  if (!fs::exists(path)) throw ValidationError(fmt::format("{} file not found: {}", what, path));
}

polar::Dataset load_dataset(const RunConfig& cfg, const Paths& p) {
  const std::string path = dataset_path(cfg, p);
  require_file(path, "dataset");
  std::ifstream in(path);
  return polar::read_dataset_jsonl(in);
}

polar::ActsFile load_acts(const RunConfig& cfg, const Paths& p) {
  const std::string path = acts_path(cfg, p);
  require_file(path, "activations");
  return polar::read_acts(path);
}

polar::PolarProbe load_probe(const RunConfig& cfg, const Paths& p, polar::ProbeFileInfo* info = nullptr) {
  const std::string path = probe_path(cfg, p);
  require_file(path, "probe");
  return polar::load_probe(path, info);
}

polar::DomainSchema load_schema(const RunConfig& cfg, polar::DomainKind domain) {
  if (auto path = cfg.root().child("paths").optional_string("schema")) {
    require_file(*path, "schema");
    polar::DomainSchema s = polar::schema_from_json(polar::read_file(*path));
    if (s.domain != domain)
      throw ValidationError(fmt::format("paths.schema: schema is for {}, dataset is {}", polar::to_string(s.domain),
                                        polar::to_string(domain)));
    polar::check_schema(s);
    return s;
  }
  return polar::builtin_schema(domain);
}

std::string ood_label(const polar::OodFlags& f) {
  std::vector<std::string> parts;
  if (f.entities) parts.emplace_back("entities");
  if (f.relations) parts.emplace_back("relations");
  if (f.no_prompt) parts.emplace_back("no_prompt");
  if (parts.empty()) return "none";
  std::string out;
  for (const auto& s : parts) out += (out.empty() ? "" : "+") + s;
  return out;
}

polar::OodFlags split_ood(const polar::Dataset& ds, polar::Split split) {
  for (const auto& s : ds.samples)
    if (s.split == split) return s.ood;
  return {};
}

void log(const std::string& msg) { fmt::print(stderr, "polarprobe: {}\n", msg); }

}  // namespace

std::string dataset_path(const RunConfig& cfg, const Paths& p) {
  return resolve(p.dataset, cfg, "dataset", p, "dataset.jsonl");
}
std::string acts_path(const RunConfig& cfg, const Paths& p) { return resolve(p.acts, cfg, "acts", p, "acts.acts"); }
std::string probe_path(const RunConfig& cfg, const Paths& p) {
  return resolve(p.probe, cfg, "probe", p, "probe.plrb");
}

void cmd_gen(const RunConfig& cfg, const Paths& p) {
  const polar::DomainSchema schema = load_schema(cfg, cfg.dataset.domain);
  std::optional<polar::Vocabulary> vocab;
  if (cfg.vocabulary) {
    require_file(*cfg.vocabulary, "vocabulary");
    vocab = polar::Vocabulary::load(*cfg.vocabulary);
  }
  const polar::Dataset ds = polar::build_dataset(cfg.dataset, schema, vocab ? &*vocab : nullptr);
  std::ostringstream out;
  polar::write_dataset_jsonl(ds, out);
  const std::string path = out_file(p, "dataset.jsonl");
  polar::write_file_atomic(path, out.str());
  log(fmt::format("wrote {} graphs / {} samples to {}", ds.graphs.size(), ds.samples.size(), path));
}

void cmd_embed(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const EmbedSettings& e = cfg.embed;
  polar::ActsFile acts;
  acts.metadata.model = e.kind == "planted" ? "planted" : "random-gaussian";
  acts.metadata.layer = e.layer;
  acts.metadata.d = e.d;
  acts.metadata.extra["seed"] = std::to_string(cfg.seed);
  polar::Rng rng = polar::make_rng(cfg.seed, {0xe3b});
  if (e.kind == "planted") {
    if (!polar::is_grid_domain(ds.domain))
      throw ValidationError(fmt::format("embed.kind: planted embeddings need a grid domain, dataset is {}",
                                        polar::to_string(ds.domain)));
    const int k = polar::grid_dimension(ds.domain);
    if (e.d < k) throw ValidationError(fmt::format("embed.d: must be at least {}", k));
    const polar::PlantedLayout layout = e.mixing == "identity" ? polar::make_identity_layout(e.d, k, e.noise)
                                                               : polar::make_planted_layout(e.d, k, e.noise, rng);
    acts.metadata.extra["noise"] = fmt::format("{}", e.noise);
    acts.metadata.extra["mixing"] = e.mixing;
    for (const auto& s : ds.samples)
      acts.records.push_back(polar::plant_embeddings(ds.graphs[s.graph_index].graph, layout, rng, s.sample_id,
                                                     e.layer));
  } else {
    for (const auto& s : ds.samples)
      acts.records.push_back(polar::random_embeddings(ds.graphs[s.graph_index].graph, e.d, rng, s.sample_id,
                                                      e.layer));
  }
  const std::string path = out_file(p, "acts.acts");
  polar::write_acts(path, acts);
  log(fmt::format("wrote {} records (d={}) to {}", acts.records.size(), e.d, path));
}

void cmd_train(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const polar::ActsFile acts = load_acts(cfg, p);
  const polar::DomainSchema schema = load_schema(cfg, ds.domain);
  const auto types = polar::directional_types(schema);
  const auto tr = polar::make_examples(ds, polar::Split::kTrain, acts, schema, types);
  const auto va = polar::make_examples(ds, polar::Split::kValidation, acts, schema, types);
  if (!tr.missing.empty()) log(fmt::format("{} training samples have no activations", tr.missing.size()));
  polar::Rng rng = polar::make_rng(cfg.seed, {0x9b0});
  auto init = polar::PolarProbe::random(cfg.train.rank, acts.metadata.d, types, rng);
  const polar::TrainResult res = polar::train(std::move(init), tr.examples, va.examples, cfg.train);

  polar::ProbeFileInfo info;
  info.domain = std::string(polar::to_string(ds.domain));
  info.layer = acts.metadata.layer;
  info.config_json = train_config_json(cfg.train).dump();
  polar::save_probe(out_file(p, "probe.plrb"), res.probe, info);
  polar::write_file_atomic(out_file(p, "history.csv"), polar::history_csv(res.history));
  if (!res.history.empty()) {
    const auto& last = res.history.back();
    log(fmt::format("trained {} steps; final L_s {:.4f} L_a {:.4f} val existence {:.4f} type {:.4f}", res.steps,
                    last.train_structural, last.train_angular, last.val_existence_rho, last.val_type_rho));
  }
}

void cmd_eval(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const polar::ActsFile acts = load_acts(cfg, p);
  polar::ProbeFileInfo info;
  const polar::PolarProbe probe = load_probe(cfg, p, &info);
  const polar::DomainSchema schema = load_schema(cfg, ds.domain);
  const auto ex = polar::make_examples(ds, cfg.eval_split, acts, schema, probe.relation_types);
  polar::EvalReport rep = polar::eval_probe(probe, ex.examples, cfg.train.type_set);
  rep.missing = static_cast<int>(ex.missing.size());
  rep.conditions["condition"] = "probe";
  rep.conditions["split"] = std::string(polar::to_string(cfg.eval_split));
  rep.conditions["domain"] = std::string(polar::to_string(ds.domain));
  rep.conditions["layer"] = std::to_string(acts.metadata.layer);
  rep.conditions["rank"] = std::to_string(probe.rank());
  rep.conditions["ood"] = ood_label(split_ood(ds, cfg.eval_split));
  polar::write_file_atomic(out_file(p, "eval.jsonl"), polar::report_to_jsonl(rep));
  polar::write_file_atomic(out_file(p, "eval.csv"), polar::report_csv_header() + polar::report_to_csv_rows(rep));
  log(fmt::format("{} graphs: existence rho {:.4f} (se {:.4f}), type rho {:.4f} (se {:.4f}), missing {}",
                  rep.graphs.size(), rep.existence.mean, rep.existence.se, rep.type.mean, rep.type.se, rep.missing));
}

void cmd_align(const RunConfig& cfg, const Paths& p) {
  const auto paths = cfg.root().child("paths").strings("probes");
  if (paths.empty()) throw ValidationError("paths.probes: list at least one probe file");
  std::vector<polar::PolarProbe> probes;
  for (const auto& path : paths) {
    require_file(path, "probe");
    probes.push_back(polar::load_probe(path));
  }
  const Eigen::MatrixXd m = polar::alignment_matrix(probes);
  std::string csv = "probe";
  for (const auto& path : paths) csv += "," + fs::path(path).stem().string();
  csv += "\n";
  for (std::size_t i = 0; i < paths.size(); ++i) {
    csv += fs::path(paths[i]).stem().string();
    for (std::size_t j = 0; j < paths.size(); ++j) csv += fmt::format(",{:.6f}", m(i, j));
    csv += "\n";
  }
  polar::write_file_atomic(out_file(p, "alignment.csv"), csv);
}

void cmd_steer(const RunConfig& cfg, const Paths& p) {
  polar::ProbeFileInfo info;
  const polar::PolarProbe probe = load_probe(cfg, p, &info);
  const ConfigNode st = cfg.root().child("steer");
  auto relations = st.strings("relations");
  if (relations.empty()) relations = probe.relation_types;
  auto signs = st.integers("signs");
  if (signs.empty()) signs = {1, -1};
  auto alphas = st.numbers("alpha_grid");
  if (alphas.empty()) alphas = {0.0, 1.0, 2.0, 4.0, 8.0};
  for (const auto& rel : relations) {
    for (int sign : signs) {
      const auto v = polar::steering_vector(probe, rel, sign, alphas, info.layer);
      std::string stem = rel;
      std::replace(stem.begin(), stem.end(), ' ', '_');
      polar::save_steering(out_file(p, fmt::format("steer_{}_{}.plrb", stem, sign > 0 ? "pos" : "neg")), v);
    }
  }
}

void cmd_qa(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const polar::DomainSchema schema = load_schema(cfg, ds.domain);
  const ConfigNode qa = cfg.root().child("qa");
  const int per_graph = qa.integer("descriptions_per_graph", 1);
  if (per_graph <= 0) throw ValidationError("qa.descriptions_per_graph: must be positive");

  struct Item {
    std::string qa_id;
    const polar::DatasetSample* sample;
    polar::Edge edge;
  };
  std::vector<Item> items;
  std::string jsonl;
  const auto by_graph = ds.samples_by_graph();
  for (int gi : ds.graph_indices(cfg.eval_split)) {
    const auto& dg = ds.graphs[gi];
    const int take = std::min<int>(per_graph, static_cast<int>(by_graph[gi].size()));
    for (int d = 0; d < take; ++d) {
      const polar::DatasetSample& s = ds.samples[by_graph[gi][d]];
      polar::DescribedSample described;
      described.graph_id = dg.graph_id;
      described.full_text = s.description;
      described.probed_tokens = s.probed_tokens;
      int q = 0;
      for (const polar::Edge& e : dg.graph.edges) {
        if (!schema.relation(dg.graph.relation_types[e.rel]).directional) continue;
        for (auto target : {polar::QaTarget::kSource, polar::QaTarget::kDestination}) {
          polar::QaSample sample;
          try {
            sample = polar::render_qa(dg.graph, e, target, schema, described, s.ood.relations);
          } catch (const polar::RenderError&) {
            continue;  // ambiguous question
          }
          nlohmann::ordered_json j;
          j["qa_id"] = fmt::format("{}/q{:02}", s.sample_id, q++);
          j["sample_id"] = s.sample_id;
          j["graph_id"] = dg.graph_id;
          j["relation"] = dg.graph.relation_types[e.rel];
          j["edge"] = {dg.graph.entities[e.src], dg.graph.entities[e.dst]};
          j["target"] = target == polar::QaTarget::kSource ? "source" : "destination";
          j["question"] = sample.question;
          j["full_text"] = sample.full_text;
          j["correct_token"] = sample.correct_token;
          j["probed_tokens"] = s.probed_tokens;
          jsonl += j.dump() + "\n";
          items.push_back({j["qa_id"].get<std::string>(), &s, e});
        }
      }
    }
  }
  polar::write_file_atomic(out_file(p, "qa.jsonl"), jsonl);
  log(fmt::format("wrote {} QA items", items.size()));

  const auto logits_path = p.logits ? p.logits : cfg.root().child("paths").optional_string("logits");
  if (!logits_path) return;
  require_file(*logits_path, "logits");
  std::map<std::string, double> logits;
  {
    std::ifstream in(*logits_path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      try {
        const auto j = nlohmann::json::parse(line);
        logits[j.at("qa_id").get<std::string>()] = j.at("logit").get<double>();
      } catch (const nlohmann::json::exception& e) {
        throw polar::FormatError(fmt::format("{}:{}: {}", *logits_path, line_no, e.what()));
      }
    }
  }
  const polar::ActsFile acts = load_acts(cfg, p);
  const polar::PolarProbe probe = load_probe(cfg, p);
  const auto index = acts.index();
  std::vector<polar::QaObservation> type_obs, exist_obs;
  for (const Item& it : items) {
    auto l = logits.find(it.qa_id);
    auto a = index.find(it.sample->sample_id);
    if (l == logits.end() || a == index.end()) continue;
    const auto& graph = ds.graphs[it.sample->graph_index].graph;
    const auto targets = polar::make_targets(graph, schema, probe.relation_types);
    const auto out = polar::forward(probe, acts.records[a->second]);
    const std::string& rel = graph.relation_types[it.edge.rel];
    const int column = static_cast<int>(
        std::find(probe.relation_types.begin(), probe.relation_types.end(), rel) - probe.relation_types.begin());
    const auto err = polar::qa_probe_errors(out, targets, it.edge, column);
    type_obs.push_back({it.sample->graph_id, err.type, l->second});
    exist_obs.push_back({it.sample->graph_id, err.existence, l->second});
  }
  const int perms = qa.integer("permutations", polar::kQaPermutations);
  nlohmann::ordered_json report;
  for (auto [name, obs] : {std::pair{"type", &type_obs}, std::pair{"existence", &exist_obs}}) {
    const auto c = polar::qa_correlation(*obs, perms, cfg.seed);
    report[name] = {{"rho", c.rho ? nlohmann::ordered_json(*c.rho) : nlohmann::ordered_json(nullptr)},
                    {"p_value", c.p_value},
                    {"n", c.n},
                    {"permutations", c.permutations}};
  }
  polar::write_file_atomic(out_file(p, "qa_correlation.json"), report.dump(2) + "\n");
}

void cmd_pca(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const polar::ActsFile acts = load_acts(cfg, p);
  const polar::PolarProbe probe = load_probe(cfg, p);
  const auto ids = ds.graph_indices(cfg.eval_split);
  if (ids.empty()) throw ValidationError("eval.split: split has no graphs");
  const auto wanted = cfg.root().child("pca").optional_string("graph_id");
  int gi = ids.front();
  if (wanted) {
    auto it = std::find_if(ds.graphs.begin(), ds.graphs.end(), [&](const auto& g) { return g.graph_id == *wanted; });
    if (it == ds.graphs.end()) throw ValidationError(fmt::format("pca.graph_id: unknown graph '{}'", *wanted));
    gi = static_cast<int>(it - ds.graphs.begin());
  }
  const auto index = acts.index();
  std::vector<Eigen::MatrixXd> hs;
  std::vector<std::string> sample_ids;
  const auto by_graph = ds.samples_by_graph();
  for (int si : by_graph[gi]) {
    auto a = index.find(ds.samples[si].sample_id);
    if (a == index.end()) continue;
    hs.push_back(polar::to_matrix(acts.records[a->second]));
    sample_ids.push_back(ds.samples[si].sample_id);
  }
  const auto& graph = ds.graphs[gi].graph;
  const auto proj = polar::pca_projection(probe, graph, hs, sample_ids);
  polar::write_file_atomic(out_file(p, "pca_points.csv"), polar::pca_points_csv(proj, graph));
  polar::write_file_atomic(out_file(p, "pca_centroids.csv"), polar::pca_centroids_csv(proj, graph));
  polar::write_file_atomic(out_file(p, "pca_edges.csv"), polar::pca_edges_csv(proj, graph));
}

void cmd_baselines(const RunConfig& cfg, const Paths& p) {
  const polar::Dataset ds = load_dataset(cfg, p);
  const polar::ActsFile acts = load_acts(cfg, p);
  const polar::DomainSchema schema = load_schema(cfg, ds.domain);
  const auto reps = polar::run_baselines(ds, acts, schema, cfg.train);
  std::string jsonl, csv = polar::report_csv_header();
  for (const auto* r : {&reps.random_activations, &reps.identity_probe, &reps.shuffled_labels}) {
    polar::EvalReport copy = *r;
    copy.conditions["layer"] = std::to_string(acts.metadata.layer);
    copy.conditions["rank"] = std::to_string(cfg.train.rank);
    copy.conditions["ood"] = ood_label(split_ood(ds, polar::Split::kTest));
    jsonl += polar::report_to_jsonl(copy);
    csv += polar::report_to_csv_rows(copy);
    log(fmt::format("{}: existence rho {:.4f}, type rho {:.4f}", copy.conditions["condition"], copy.existence.mean,
                    copy.type.mean));
  }
  polar::write_file_atomic(out_file(p, "baselines.jsonl"), jsonl);
  polar::write_file_atomic(out_file(p, "baselines.csv"), csv);
}

void cmd_schema(const RunConfig& cfg, const Paths& p) {
  const polar::DomainSchema s = load_schema(cfg, cfg.dataset.domain);
  polar::write_file_atomic(out_file(p, fmt::format("{}.json", polar::to_string(s.domain))),
                           polar::schema_to_json(s));
}

int cmd_pipeline(const RunConfig& cfg, const Paths& p, int jobs) {
  const ConfigNode pl = cfg.root().child("pipeline");
  auto ranks = pl.integers("rank");
  auto sizes = pl.integers("n_entities");
  auto noises = pl.numbers("noise");
  if (ranks.empty()) ranks = {cfg.train.rank};
  if (sizes.empty()) sizes = {cfg.dataset.n_entities};
  if (noises.empty()) noises = {cfg.embed.noise};

  struct Run {
    int rank;
    int n;
    double noise;
    std::string dir;
    std::optional<polar::EvalReport> report;
    std::string error;
  };
  std::vector<Run> runs;
  for (int n : sizes)
    for (double noise : noises)
      for (int r : ranks) {
        if (r <= 0) throw ValidationError("pipeline.rank: entries must be positive");
        if (n < 3) throw ValidationError("pipeline.n_entities: entries must be at least 3");
        if (!(noise >= 0)) throw ValidationError("pipeline.noise: entries must be non-negative");
        runs.push_back({r, n, noise, (fs::path(p.out) / fmt::format("run-{:03}", runs.size())).string(), {}, {}});
      }

  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < runs.size(); i = next++) {
      Run& run = runs[i];
      RunConfig rc = cfg;
      rc.train.rank = run.rank;
      rc.dataset.n_entities = run.n;
      rc.embed.noise = run.noise;
      Paths rp;
      rp.out = run.dir;
      try {
        cmd_gen(rc, rp);
        cmd_embed(rc, rp);
        cmd_train(rc, rp);
        cmd_eval(rc, rp);
        std::ifstream in(fs::path(run.dir) / "eval.jsonl");
        std::string line, last;
        while (std::getline(in, line))
          if (!line.empty()) last = line;
        const auto j = nlohmann::json::parse(last);
        polar::EvalReport rep;
        rep.existence = {j["existence_rho"]["mean"].get<double>(), j["existence_rho"]["se"].get<double>(),
                         j["existence_rho"]["n"].get<int>()};
        rep.type = {j["type_rho"]["mean"].get<double>(), j["type_rho"]["se"].get<double>(),
                    j["type_rho"]["n"].get<int>()};
        run.report = rep;
      } catch (const std::exception& e) {
        run.error = e.what();
        std::lock_guard lock(log_mutex);
        log(fmt::format("{} failed: {}", run.dir, e.what()));
      }
    }
  };
  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(runs.size())));
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  std::string csv = "run,rank,n_entities,noise,existence_rho,existence_se,type_rho,type_se,error\n";
  int failed = 0;
  for (const Run& run : runs) {
    const std::string name = fs::path(run.dir).filename().string();
    if (run.report) {
      csv += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},\n", name, run.rank, run.n, run.noise,
                         run.report->existence.mean, run.report->existence.se, run.report->type.mean,
                         run.report->type.se);
    } else {
      ++failed;
      std::string msg = run.error;
      std::replace(msg.begin(), msg.end(), ',', ';');
      std::replace(msg.begin(), msg.end(), '\n', ' ');
      csv += fmt::format("{},{},{},{},,,,,{}\n", name, run.rank, run.n, run.noise, msg);
    }
  }
  polar::write_file_atomic(out_file(p, "pipeline.csv"), csv);
  return failed;
}

}  // namespace polarprobe
