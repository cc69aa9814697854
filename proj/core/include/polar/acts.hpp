#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace polar {

// n_entities x d activations for one described sample, rows in canonical
// entity order, row-major.
struct ActivationRecord {
  std::string sample_id;
  int layer = 0;
  int rows = 0;
  int cols = 0;
  std::vector<float> values;

  float operator()(int i, int j) const { return values[static_cast<std::size_t>(i) * cols + j]; }
};

struct ActsMetadata {
  std::string model;
  int layer = 0;
  int d = 0;
  // Extra string fields carried through verbatim (e.g. "position").
  std::map<std::string, std::string> extra;
};

struct ActsFile {
  ActsMetadata metadata;
  std::vector<ActivationRecord> records;

  // sample_id -> record index
  std::map<std::string, int> index() const;
};

inline constexpr char kActsMagic[4] = {'P', 'L', 'R', 'P'};

// Throws DimensionError when a record's width differs from metadata.d and
// ValidationError on non-finite values.
std::string encode_acts(const ActsFile& file);
ActsFile decode_acts(const std::string& bytes);

void write_acts(const std::string& path, const ActsFile& file);
ActsFile read_acts(const std::string& path);

}  // namespace polar
