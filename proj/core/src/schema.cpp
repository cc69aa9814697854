#include "polar/schema.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>
#include <json.hpp>

#include "polar/errors.hpp"

namespace polar {

namespace {

using ojson = nlohmann::ordered_json;

SurfaceForms forms(std::string fwd, std::string inv) { return SurfaceForms{std::move(fwd), std::move(inv), {}, {}}; }

RelationSpec relation(std::string name, SurfaceForms id, SurfaceForms ood, bool directional = true) {
  return RelationSpec{std::move(name), directional, std::nullopt, std::move(id), std::move(ood)};
}

DomainSchema ordinality() {
  DomainSchema s;
  s.domain = DomainKind::kOrdinality;
  s.entity_pool = {"d", "f", "c", "y", "u", "z", "o", "g", "r", "e", "j", "l", "n"};
  s.entity_pool_ood = {"w", "b", "h", "x", "i", "m", "v", "t", "s", "k", "q", "a", "p"};
  s.relations = {relation("greater than", forms("greater than", "less than"), forms("larger than", "fewer than"))};
  s.sentence_template = "{src} is {rel} {dst}.";
  s.prompt_template =
      "**Mathematical Variables**\n"
      "You will receive a description of set of mathematical constants, each associated with an unknown real "
      "number.\n"
      "**Vocabulary**\n"
      "The constants are named according to {entities}.\n"
      "**Relations**\n"
      "The following relations are used to describe the relative position of a constant with respect to another "
      "one on the real axis: \n"
      "(greater than, less than)\n"
      "**Goal**\n"
      "Infer the position of each constant on the real axis so that **all** constraints are satisfied.\n"
      "**Scene description:**";
  s.post_prompt_template = "Who are {entities}?";
  s.qa_template = "Which variable is immediately {rel} {anchor}?";
  return s;
}

DomainSchema spatial() {
  DomainSchema s;
  s.domain = DomainKind::kSpatial;
  s.entity_pool = {"bag", "ball", "clock", "lamp", "ring", "key", "train", "plane", "boat", "bus", "bike", "shirt",
                   "coin"};
  s.entity_pool_ood = {"car", "cat", "dog", "tree", "house", "chair", "table", "book", "door", "bed", "phone", "cup",
                       "shoe"};
  s.relations = {
      relation("right of", forms("to the right of", "to the left of"), forms("rightward of", "leftward of")),
      relation("on top of", forms("on top of", "below"), forms("over", "underneath")),
  };
  s.sentence_template = "The {src} is {rel} the {dst}.";
  s.prompt_template =
      "**Geometrical Layout**\n"
      "You will receive a description of an abstract scene laid out on a regular square grid.\n"
      "**Vocabulary**\n"
      "The scene contains objects, named: {entities}\n"
      "**Relations**\n"
      "The following spatial relations are used to describe the relative position of the objects on the grid: \n"
      "(above, below, left of, right of)\n"
      "**Goal**\n"
      "Infer the grid coordinates of every object so that **all** spatial constraints are satisfied.\n"
      "**Scene description:**";
  s.post_prompt_template = "Who are {entities}?";
  s.qa_template = "Which object is immediately {rel} the {anchor}?";
  return s;
}

DomainSchema thematic() {
  DomainSchema s;
  s.domain = DomainKind::kThematic;
  s.entity_pool = {"tourist", "farmer", "mechanic", "scientist", "teacher", "manager", "pilot",
                   "waiter",  "firefighter", "student", "doctor", "engineer", "actor"};
  s.entity_pool_ood = {"driver", "baker", "dancer", "neighbor", "singer", "librarian", "lawyer",
                       "officer", "artist", "writer", "chef", "nurse", "coach"};
  s.relations = {
      relation("follows", forms("follows", "is followed by"), forms("pursues", "is pursued by")),
      relation("helps", forms("helps", "is helped by"), forms("assists", "is assisted by")),
  };
  s.sentence_template = "The {src} {rel} the {dst}.";
  s.prompt_template =
      "**Social Interactions**\n"
      "You will receive a description of an interaction between several people.\n"
      "**Vocabulary**\n"
      "The people potentially participating in the interaction are: {entities}\n"
      "**Relations**\n"
      "The interaction type between two people can be: \n"
      "(follow - be followed by , help - be helped by)\n"
      "**Goal**\n"
      "Infer the interactions among participants so that **all** constraints are satisfied.\n"
      "**Scene description:**";
  s.post_prompt_template = "Who are {entities}?";
  s.qa_template = "Who {rel} the {anchor}?";
  return s;
}

DomainSchema family() {
  DomainSchema s;
  s.domain = DomainKind::kFamily;
  s.entity_pool = {"James", "Henry", "Peter", "Ben", "Michael", "Joseph", "Isabel",
                   "Alice", "Amelia", "Charlotte", "Isabella", "Grace", "Anna"};
  s.entity_pool_ood = {"Victoria", "Emily", "Emma", "Mary", "Sarah", "Lucy", "Leo",
                       "William", "Paul", "John", "Bob", "Mark", "Daniel"};
  for (int i = 0; i < DomainSchema::kPoolSize; ++i) {
    s.entity_genders[s.entity_pool[i]] = i < 6 ? Gender::kMale : Gender::kFemale;
    s.entity_genders[s.entity_pool_ood[i]] = i < 6 ? Gender::kFemale : Gender::kMale;
  }

  const std::map<Gender, std::string> child_id{{Gender::kMale, "son of"}, {Gender::kFemale, "daughter of"}};
  const std::map<Gender, std::string> sibling_id{{Gender::kMale, "brother of"}, {Gender::kFemale, "sister of"}};

  RelationSpec mom = relation("mom of", SurfaceForms{"mom of", "child of", {}, child_id},
                              forms("mother of", "offspring of"));
  mom.src_gender = Gender::kFemale;
  RelationSpec dad = relation("dad of", SurfaceForms{"dad of", "child of", {}, child_id},
                              forms("father of", "offspring of"));
  dad.src_gender = Gender::kMale;
  RelationSpec sibling = relation("sibling of", SurfaceForms{"sibling of", "sibling of", sibling_id, sibling_id},
                                  forms("sibling of", "sibling of"), /*directional=*/false);
  s.relations = {mom, dad, sibling};
  s.sentence_template = "{src} is the {rel} {dst}.";
  s.prompt_template =
      "**Family Tree**\n"
      "You will receive a description of a family tree.\n"
      "**Vocabulary**\n"
      "The family tree contains people, named: {entities}\n"
      "**Relations**\n"
      "The following family relations are used to describe link between two people in the family: \n"
      "(dad of, mom of, son of, daughter of, brother of and sister of)\n"
      "**Goal**\n"
      "Infer the family relations among all members in the family so that **all** constraints are satisfied.\n"
      "**Scene description:**";
  s.post_prompt_template = "Who are {entities}?";
  s.qa_template = "Who is the {rel} {anchor}?";
  return s;
}

DomainSchema metro() {
  DomainSchema s;
  s.domain = DomainKind::kMetro;
  s.entity_pool = {"market", "studio", "pub", "park", "Opera", "court", "college",
                   "lake", "airport", "church", "restaurant", "hospital", "mall"};
  s.entity_pool_ood = {"bar", "hill", "square", "pool", "gallery", "school", "river",
                       "shop", "tower", "station", "forum", "bridge", "library"};
  for (const char* line : {"line A", "line B", "line C"}) {
    s.relations.push_back(
        relation(line, forms("one stop after", "one stop before"), forms("one stop ahead of", "one stop back from")));
  }
  s.sentence_template = "The {src} is {rel} the {dst} on {type}.";
  s.prompt_template =
      "**Metro Map**\n"
      "You will receive a description of a city's metro map.\n"
      "**Vocabulary**\n"
      "The metro can have lines {lines} which connect the following sites in the city {entities}.\n"
      "**Relations**\n"
      "The following relations are used to describe where each site is located on a given direction of the metro "
      "line: (one stop before, one stop after)\n"
      "**Goal**\n"
      "Infer the position of each site on its corresponding metro line so that **all** constraints are "
      "satisfied.\n"
      "**Scene description:**";
  s.post_prompt_template = "Who are {entities}?";
  s.qa_template = "Which site is {rel} the {anchor} on {type}?";
  return s;
}

ojson forms_to_json(const SurfaceForms& f) {
  ojson j;
  j["forward"] = f.forward;
  j["inverse"] = f.inverse;
  if (!f.forward_by_gender.empty() || !f.inverse_by_gender.empty()) {
    auto by_gender = [](const std::map<Gender, std::string>& m) {
      ojson o = ojson::object();
      for (const auto& [g, s] : m) o[std::string(to_string(g))] = s;
      return o;
    };
    j["forward_by_gender"] = by_gender(f.forward_by_gender);
    j["inverse_by_gender"] = by_gender(f.inverse_by_gender);
  }
  return j;
}

Gender parse_gender(const std::string& s) {
  if (s == "male") return Gender::kMale;
  if (s == "female") return Gender::kFemale;
  throw FormatError(fmt::format("unknown gender '{}'", s));
}

SurfaceForms forms_from_json(const nlohmann::json& j) {
  SurfaceForms f;
  f.forward = j.at("forward").get<std::string>();
  f.inverse = j.at("inverse").get<std::string>();
  auto read = [&](const char* key, std::map<Gender, std::string>& out) {
    if (!j.contains(key)) return;
    for (const auto& [g, s] : j.at(key).items()) out[parse_gender(g)] = s.get<std::string>();
  };
  read("forward_by_gender", f.forward_by_gender);
  read("inverse_by_gender", f.inverse_by_gender);
  return f;
}

}  // namespace

std::string_view to_string(Gender g) { return g == Gender::kMale ? "male" : "female"; }

const std::string& SurfaceForms::pick(bool flipped, const Gender* subject) const {
  const auto& by_gender = flipped ? inverse_by_gender : forward_by_gender;
  if (subject != nullptr) {
    if (auto it = by_gender.find(*subject); it != by_gender.end()) return it->second;
  }
  return flipped ? inverse : forward;
}

const RelationSpec& DomainSchema::relation(std::string_view name) const {
  return relations.at(static_cast<std::size_t>(relation_index(name)));
}

int DomainSchema::relation_index(std::string_view name) const {
  for (std::size_t i = 0; i < relations.size(); ++i)
    if (relations[i].name == name) return static_cast<int>(i);
  throw ValidationError(fmt::format("relation '{}' is not defined for domain {}", name, to_string(domain)));
}

const Gender* DomainSchema::gender_of(std::string_view entity) const {
  auto it = entity_genders.find(std::string(entity));
  return it == entity_genders.end() ? nullptr : &it->second;
}

DomainSchema builtin_schema(DomainKind kind) {
  switch (kind) {
    case DomainKind::kOrdinality:
      return ordinality();
    case DomainKind::kSpatial:
      return spatial();
    case DomainKind::kThematic:
      return thematic();
    case DomainKind::kFamily:
      return family();
    case DomainKind::kMetro:
      return metro();
  }
  throw ValidationError("unknown domain");
}

std::vector<std::string> directional_types(const DomainSchema& schema) {
  std::vector<std::string> out;
  for (const auto& r : schema.relations)
    if (r.directional) out.push_back(r.name);
  return out;
}

void check_schema(const DomainSchema& s) {
  std::vector<std::string> problems;
  auto check_pool = [&](const std::vector<std::string>& pool, const char* label) {
    if (static_cast<int>(pool.size()) != DomainSchema::kPoolSize)
      problems.push_back(fmt::format("{} has {} names, expected {}", label, pool.size(), DomainSchema::kPoolSize));
    std::set<std::string> unique(pool.begin(), pool.end());
    if (unique.size() != pool.size()) problems.push_back(fmt::format("{} contains duplicate names", label));
  };
  check_pool(s.entity_pool, "entity_pool");
  check_pool(s.entity_pool_ood, "entity_pool_ood");
  for (const auto& name : s.entity_pool) {
    if (std::find(s.entity_pool_ood.begin(), s.entity_pool_ood.end(), name) != s.entity_pool_ood.end())
      problems.push_back(fmt::format("'{}' appears in both entity pools", name));
  }
  for (const auto& r : s.relations) {
    for (const SurfaceForms* f : {&r.id_forms, &r.ood_forms}) {
      if (f->forward.empty() || (r.directional && f->inverse.empty()))
        problems.push_back(fmt::format("relation '{}' is missing a surface form", r.name));
    }
  }
  if (s.domain == DomainKind::kFamily) {
    for (const auto* pool : {&s.entity_pool, &s.entity_pool_ood})
      for (const auto& name : *pool)
        if (s.gender_of(name) == nullptr) problems.push_back(fmt::format("no gender for '{}'", name));
  }
  if (s.sentence_template.find("{src}") == std::string::npos ||
      s.sentence_template.find("{dst}") == std::string::npos ||
      s.sentence_template.find("{rel}") == std::string::npos)
    problems.push_back("sentence_template must contain {src}, {rel} and {dst}");
  if (s.post_prompt_template.find("{entities}") == std::string::npos)
    problems.push_back("post_prompt_template must contain {entities}");

  if (!problems.empty()) {
    std::string msg = fmt::format("invalid {} schema:", to_string(s.domain));
    for (const auto& p : problems) msg += "\n  - " + p;
    throw ValidationError(msg);
  }
}

std::string schema_to_json(const DomainSchema& s) {
  ojson j;
  j["domain"] = to_string(s.domain);
  j["entity_pool"] = s.entity_pool;
  j["entity_pool_ood"] = s.entity_pool_ood;
  if (!s.entity_genders.empty()) {
    ojson genders = ojson::object();
    // Keep pool order so the data files read naturally.
    for (const auto* pool : {&s.entity_pool, &s.entity_pool_ood})
      for (const auto& name : *pool)
        if (const Gender* g = s.gender_of(name)) genders[name] = to_string(*g);
    j["entity_genders"] = std::move(genders);
  }
  auto rels = ojson::array();
  for (const auto& r : s.relations) {
    ojson rj;
    rj["name"] = r.name;
    rj["directional"] = r.directional;
    if (r.src_gender) rj["src_gender"] = to_string(*r.src_gender);
    rj["id"] = forms_to_json(r.id_forms);
    rj["ood"] = forms_to_json(r.ood_forms);
    rels.push_back(std::move(rj));
  }
  j["relation_specs"] = std::move(rels);
  j["sentence_template"] = s.sentence_template;
  j["prompt_template"] = s.prompt_template;
  j["post_prompt_template"] = s.post_prompt_template;
  j["qa_template"] = s.qa_template;
  return j.dump(2) + "\n";
}

DomainSchema schema_from_json(std::string_view json) {
  try {
    const auto j = nlohmann::json::parse(json);
    DomainSchema s;
    s.domain = parse_domain(j.at("domain").get<std::string>());
    s.entity_pool = j.at("entity_pool").get<std::vector<std::string>>();
    s.entity_pool_ood = j.at("entity_pool_ood").get<std::vector<std::string>>();
    if (j.contains("entity_genders"))
      for (const auto& [name, g] : j.at("entity_genders").items()) s.entity_genders[name] = parse_gender(g);
    for (const auto& rj : j.at("relation_specs")) {
      RelationSpec r;
      r.name = rj.at("name").get<std::string>();
      r.directional = rj.value("directional", true);
      if (rj.contains("src_gender")) r.src_gender = parse_gender(rj.at("src_gender").get<std::string>());
      r.id_forms = forms_from_json(rj.at("id"));
      r.ood_forms = forms_from_json(rj.at("ood"));
      s.relations.push_back(std::move(r));
    }
    s.sentence_template = j.at("sentence_template").get<std::string>();
    s.prompt_template = j.value("prompt_template", std::string{});
    s.post_prompt_template = j.at("post_prompt_template").get<std::string>();
    s.qa_template = j.value("qa_template", std::string{});
    check_schema(s);
    return s;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(fmt::format("invalid schema JSON: {}", ex.what()));
  }
}

std::string join_list(const std::vector<std::string>& items) {
  if (items.empty()) return {};
  if (items.size() == 1) return items[0];
  if (items.size() == 2) return items[0] + " and " + items[1];
  std::string out;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) out += items[i] + ", ";
  return out + "and " + items.back();
}

std::string fill_template(std::string_view tmpl, const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size() + 32);
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      const auto close = tmpl.find('}', i);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out += tmpl[i++];
  }
  return out;
}

}  // namespace polar
