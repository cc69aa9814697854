#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polar/graph.hpp"

namespace polar {

enum class Gender { kMale, kFemale };

std::string_view to_string(Gender g);

// Surface realisation of one relation type. `forward` renders an edge
// (src, dst) with src as the sentence subject; `inverse` renders the same edge
// with dst as the subject. Gendered overrides, when present, are selected by
// the gender of the sentence subject.
struct SurfaceForms {
  std::string forward;
  std::string inverse;
  std::map<Gender, std::string> forward_by_gender;
  std::map<Gender, std::string> inverse_by_gender;

  const std::string& pick(bool flipped, const Gender* subject) const;

  friend bool operator==(const SurfaceForms&, const SurfaceForms&) = default;
};

struct RelationSpec {
  std::string name;
  bool directional = true;
  // Gender the edge source must have (family parent types).
  std::optional<Gender> src_gender;
  SurfaceForms id_forms;
  SurfaceForms ood_forms;

  friend bool operator==(const RelationSpec&, const RelationSpec&) = default;
};

// Vocabulary, relation surface forms and prompt text for one domain.
//
// Template placeholders:
//   sentence_template     {src} {rel} {dst} {type}
//   prompt_template       {entities} {lines}
//   post_prompt_template  {entities}
//   qa_template           {rel} {anchor} {type}
struct DomainSchema {
  DomainKind domain = DomainKind::kOrdinality;
  std::vector<std::string> entity_pool;
  std::vector<std::string> entity_pool_ood;
  std::map<std::string, Gender> entity_genders;
  std::vector<RelationSpec> relations;
  std::string sentence_template;
  std::string prompt_template;
  std::string post_prompt_template;
  std::string qa_template;

  static constexpr int kPoolSize = 13;

  const RelationSpec& relation(std::string_view name) const;
  int relation_index(std::string_view name) const;
  const Gender* gender_of(std::string_view entity) const;

  friend bool operator==(const DomainSchema&, const DomainSchema&) = default;
};

// Table of entity pools, relations and prompts compiled into the library.
DomainSchema builtin_schema(DomainKind kind);

// Names of the directional relation types, in schema order; these are the
// probe's prototype columns.
std::vector<std::string> directional_types(const DomainSchema& schema);

// Throws ValidationError listing every broken invariant (pool sizes, pool
// overlap, missing surface forms, unknown genders).
void check_schema(const DomainSchema& schema);

std::string schema_to_json(const DomainSchema& schema);
DomainSchema schema_from_json(std::string_view json);

// "a", "a and b", "a, b, and c".
std::string join_list(const std::vector<std::string>& items);

// Replaces every "{key}" occurrence with the mapped value; unknown keys are
// left untouched.
std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values);

}  // namespace polar
