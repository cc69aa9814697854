#pragma once

#include <optional>
#include <string>

#include "config.hpp"

namespace polarprobe {

struct Paths {
  std::string out = ".";
  std::optional<std::string> dataset;
  std::optional<std::string> acts;
  std::optional<std::string> probe;
  std::optional<std::string> logits;
};

// Input paths: flag, then config "paths" section, then the default file name
// inside the output directory (so gen/embed/train/eval chain on one --out).
std::string dataset_path(const RunConfig& cfg, const Paths& p);
std::string acts_path(const RunConfig& cfg, const Paths& p);
std::string probe_path(const RunConfig& cfg, const Paths& p);

void cmd_gen(const RunConfig& cfg, const Paths& p);
void cmd_embed(const RunConfig& cfg, const Paths& p);
void cmd_train(const RunConfig& cfg, const Paths& p);
void cmd_eval(const RunConfig& cfg, const Paths& p);
void cmd_align(const RunConfig& cfg, const Paths& p);
void cmd_steer(const RunConfig& cfg, const Paths& p);
void cmd_qa(const RunConfig& cfg, const Paths& p);
void cmd_pca(const RunConfig& cfg, const Paths& p);
void cmd_baselines(const RunConfig& cfg, const Paths& p);
void cmd_schema(const RunConfig& cfg, const Paths& p);

// Fans gen -> embed -> train -> eval out over pipeline.{rank,n_entities,noise}
// lists. Returns the number of failed runs.
int cmd_pipeline(const RunConfig& cfg, const Paths& p, int jobs);

}  // namespace polarprobe
