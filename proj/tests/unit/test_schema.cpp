#include <doctest.h>

#include <set>

#include "polar/container.hpp"
#include "polar/errors.hpp"
#include "polar/schema.hpp"

using namespace polar;

namespace {

const DomainKind kAll[] = {DomainKind::kOrdinality, DomainKind::kSpatial, DomainKind::kThematic, DomainKind::kFamily,
                           DomainKind::kMetro};

}  // namespace

TEST_CASE("built-in schemas satisfy their own invariants") {
  for (DomainKind k : kAll) {
    const DomainSchema s = builtin_schema(k);
    CHECK_NOTHROW(check_schema(s));
    CHECK(s.entity_pool.size() == DomainSchema::kPoolSize);
    CHECK(s.entity_pool_ood.size() == DomainSchema::kPoolSize);
    std::set<std::string> id(s.entity_pool.begin(), s.entity_pool.end());
    for (const auto& name : s.entity_pool_ood) CHECK_FALSE(id.count(name));
  }
}

TEST_CASE("shipped schema files equal the compiled table") {
  for (DomainKind k : kAll) {
    const std::string path = std::string(POLAR_SCHEMA_DIR) + "/" + std::string(to_string(k)) + ".json";
    CAPTURE(path);
    const DomainSchema from_file = schema_from_json(read_file(path));
    CHECK(from_file == builtin_schema(k));
    CHECK(schema_from_json(schema_to_json(from_file)) == from_file);
  }
}

TEST_CASE("family parents are gendered and sibling is non-directional") {
  const DomainSchema s = builtin_schema(DomainKind::kFamily);
  CHECK(s.relation("mom of").src_gender == Gender::kFemale);
  CHECK(s.relation("dad of").src_gender == Gender::kMale);
  CHECK_FALSE(s.relation("sibling of").directional);
  CHECK(directional_types(s) == std::vector<std::string>{"mom of", "dad of"});
  const Gender male = Gender::kMale;
  CHECK(s.relation("mom of").id_forms.pick(true, &male) == "son of");
  CHECK(*s.gender_of("James") == Gender::kMale);
  CHECK(*s.gender_of("Victoria") == Gender::kFemale);
  CHECK(s.gender_of("nobody") == nullptr);
}

TEST_CASE("list joining and template filling") {
  CHECK(join_list({"a"}) == "a");
  CHECK(join_list({"a", "b"}) == "a and b");
  CHECK(join_list({"a", "b", "c"}) == "a, b, and c");
  CHECK(fill_template("{src} is {rel} {dst}.", {{"src", "x"}, {"rel", "greater than"}, {"dst", "y"}}) ==
        "x is greater than y.");
}

TEST_CASE("broken schemas are rejected") {
  DomainSchema s = builtin_schema(DomainKind::kOrdinality);
  s.entity_pool_ood[0] = s.entity_pool[0];
  CHECK_THROWS_AS(check_schema(s), ValidationError);
  s = builtin_schema(DomainKind::kOrdinality);
  s.entity_pool.pop_back();
  CHECK_THROWS_AS(check_schema(s), ValidationError);
  CHECK_THROWS(schema_from_json("{not json"));
}
