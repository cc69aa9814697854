#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "polar/acts.hpp"
#include "polar/checkpoint.hpp"
#include "polar/container.hpp"
#include "polar/errors.hpp"

using namespace polar;

namespace {

ActsFile small_acts() {
  ActsFile f;
  f.metadata.model = "unit";
  f.metadata.layer = 3;
  f.metadata.d = 4;
  f.metadata.extra["position"] = "post";
  for (int s = 0; s < 2; ++s) {
    ActivationRecord r;
    r.sample_id = "g/" + std::to_string(s);
    r.layer = 3;
    r.rows = 3;
    r.cols = 4;
    for (int i = 0; i < 12; ++i) r.values.push_back(0.25f * static_cast<float>(i - s));
    f.records.push_back(r);
  }
  return f;
}

}  // namespace

TEST_CASE("container header layout is little-endian magic|version|len|meta|payload") {
  Container c;
  c.magic = {'P', 'L', 'R', 'P'};
  c.metadata = "{}";
  c.payload = {1.0f};
  std::ostringstream out;
  write_container(out, c);
  const std::string b = out.str();
  REQUIRE(b.size() == 4 + 4 + 8 + 2 + 4);
  CHECK(b.substr(0, 4) == "PLRP");
  CHECK(static_cast<unsigned char>(b[4]) == 1);
  CHECK(static_cast<unsigned char>(b[8]) == 2);
  CHECK(b.substr(16, 2) == "{}");
  // 1.0f = 0x3f800000 little-endian.
  CHECK(static_cast<unsigned char>(b[18]) == 0x00);
  CHECK(static_cast<unsigned char>(b[21]) == 0x3f);
}

TEST_CASE("activation files round-trip exactly") {
  const ActsFile f = small_acts();
  const ActsFile back = decode_acts(encode_acts(f));
  CHECK(back.metadata.model == "unit");
  CHECK(back.metadata.layer == 3);
  CHECK(back.metadata.d == 4);
  CHECK(back.metadata.extra.at("position") == "post");
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[1].sample_id == "g/1");
  CHECK(back.records[1].values == f.records[1].values);
  CHECK(back.index().at("g/1") == 1);
}

TEST_CASE("malformed activation files are rejected") {
  const std::string good = encode_acts(small_acts());
  std::string bad = good;
  bad[0] = 'X';
  CHECK_THROWS_WITH_AS(decode_acts(bad), doctest::Contains("bad magic"), FormatError);
  bad = good;
  bad[4] = 9;
  CHECK_THROWS_WITH_AS(decode_acts(bad), doctest::Contains("unsupported version"), FormatError);
  CHECK_THROWS_WITH_AS(decode_acts(good.substr(0, good.size() - 3)), doctest::Contains("truncated"), FormatError);

  ActsFile wide = small_acts();
  wide.records[0].cols = 5;
  wide.records[0].values.resize(15);
  CHECK_THROWS_AS(encode_acts(wide), DimensionError);
  ActsFile nan = small_acts();
  nan.records[1].values[2] = std::numeric_limits<float>::quiet_NaN();
  CHECK_THROWS_AS(encode_acts(nan), ValidationError);
}

TEST_CASE("probe checkpoints round-trip at f32 precision") {
  Rng rng = make_rng(1);
  const PolarProbe p = PolarProbe::random(3, 7, {"right of", "on top of"}, rng);
  ProbeFileInfo info;
  info.domain = "spatial";
  info.layer = 12;
  info.config_json = R"({"lambda":5.0})";
  ProbeFileInfo back_info;
  const PolarProbe q = decode_probe(encode_probe(p, info), &back_info);
  CHECK(q.relation_types == p.relation_types);
  CHECK(back_info.domain == "spatial");
  CHECK(back_info.layer == 12);
  CHECK(back_info.config_json == R"({"lambda":5.0})");
  CHECK((q.map - p.map.cast<float>().cast<double>()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((q.prototypes - p.prototypes.cast<float>().cast<double>()).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_WITH_AS(decode_acts(encode_probe(p, info)), doctest::Contains("bad magic"), FormatError);
}

TEST_CASE("atomic writes leave no temp file and replace the target") {
  const auto dir = std::filesystem::temp_directory_path() / "polar_container_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "x.bin").string();
  write_file_atomic(path, "first");
  write_file_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  std::filesystem::remove_all(dir);
  CHECK_THROWS(read_file(path));
}
