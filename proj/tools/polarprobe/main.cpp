// polarprobe: dataset generation, synthetic activations, probe training,
// evaluation and analysis exports.
//
// Exit codes: 0 ok, 1 invalid input or config, 2 runtime failure.

#include <cstdio>
#include <functional>
#include <map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "commands.hpp"
#include "polar/errors.hpp"

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polar probes over relational graphs"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  polarprobe::Paths paths;
  int jobs = 1;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--seed", seed, "Overrides the config seed");
  app.add_option("--out", paths.out, "Output directory")->capture_default_str();
  app.add_option("--jobs", jobs, "Worker threads for pipeline fan-out")->check(CLI::PositiveNumber);
  app.add_option("--dataset", paths.dataset, "Dataset JSONL (default <out>/dataset.jsonl)");
  app.add_option("--acts", paths.acts, "Activations file (default <out>/acts.acts)");
  app.add_option("--probe", paths.probe, "Probe checkpoint (default <out>/probe.plrb)");
  app.add_option("--logits", paths.logits, "Correct-answer logits JSONL for qa");

  using Command = std::function<void(const polarprobe::RunConfig&)>;
  const std::vector<std::tuple<const char*, const char*, Command>> commands = {
      {"gen", "Generate the dataset JSONL", [&](const auto& c) { polarprobe::cmd_gen(c, paths); }},
      {"embed", "Write planted or random activations", [&](const auto& c) { polarprobe::cmd_embed(c, paths); }},
      {"train", "Train a probe; writes probe.plrb and history.csv",
       [&](const auto& c) { polarprobe::cmd_train(c, paths); }},
      {"eval", "Evaluate a probe; writes eval.jsonl and eval.csv",
       [&](const auto& c) { polarprobe::cmd_eval(c, paths); }},
      {"align", "Subspace alignment matrix over paths.probes",
       [&](const auto& c) { polarprobe::cmd_align(c, paths); }},
      {"steer", "Export steering vectors", [&](const auto& c) { polarprobe::cmd_steer(c, paths); }},
      {"qa", "Write QA items; with --logits also the error/logit correlation",
       [&](const auto& c) { polarprobe::cmd_qa(c, paths); }},
      {"pca", "Probe-space PCA of one graph", [&](const auto& c) { polarprobe::cmd_pca(c, paths); }},
      {"baselines", "Chance and ablation controls", [&](const auto& c) { polarprobe::cmd_baselines(c, paths); }},
      {"schema", "Dump the domain schema JSON", [&](const auto& c) { polarprobe::cmd_schema(c, paths); }},
  };
  std::map<CLI::App*, const Command*> dispatch;
  for (const auto& [name, help, fn] : commands) dispatch[app.add_subcommand(name, help)] = &fn;
  CLI::App* pipeline = app.add_subcommand("pipeline", "gen -> embed -> train -> eval over pipeline.* lists");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    const polarprobe::RunConfig cfg = polarprobe::load_config(config_path, seed);
    if (pipeline->parsed()) {
      const int failed = polarprobe::cmd_pipeline(cfg, paths, jobs);
      if (failed > 0) {
        fmt::print(stderr, "polarprobe: {} pipeline run(s) failed\n", failed);
        return kExitRuntime;
      }
      return 0;
    }
    for (const auto& [sub, fn] : dispatch)
      if (sub->parsed()) (*fn)(cfg);
  } catch (const polar::ValidationError& e) {
    fmt::print(stderr, "polarprobe: invalid input: {}\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    fmt::print(stderr, "polarprobe: error: {}\n", e.what());
    return kExitRuntime;
  }
  return 0;
}
