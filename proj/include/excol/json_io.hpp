#pragma once
//
// Sorted-key JSON for collections and reports. nlohmann::json keeps object
// keys ordered, so dump() output is byte-stable for equal values.
//

#include <optional>
#include <string>

#include <json.hpp>

#include "excol/cohomology.hpp"
#include "excol/error.hpp"
#include "excol/fan.hpp"
#include "excol/mutation.hpp"
#include "excol/verifier.hpp"

namespace excol {

using nlohmann::json;

inline json hvector_to_json(const HVector& h) { return h.dims; }

inline HVector hvector_from_json(const json& j) {
  HVector h;
  h.dims = j.get<std::vector<std::int64_t>>();
  return h;
}

inline json object_to_json(const SheafObject& o) {
  if (const auto* l = std::get_if<LineBundle>(&o))
    return {{"kind", "line"}, {"alpha", l->cls.alpha()}, {"beta", l->cls.beta()}, {"k", l->cls.k()}};
  const auto& p = std::get<PushforwardTwist>(o);
  return {{"kind", "push"}, {"alpha", p.m.alpha()}, {"beta", p.m.beta()}, {"k", p.k}};
}

inline SheafObject object_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto a = j.at("alpha").get<std::int64_t>();
  const auto b = j.at("beta").get<std::int64_t>();
  const auto k = j.at("k").get<std::int64_t>();
  if (kind == "line") return line(a, b, k);
  if (kind == "push") return push(a, b, k);
  throw InvalidSpec("unknown object kind '" + kind + "'");
}

inline json spec_to_json(const BundleSpec& spec) {
  return {{"base_dim", spec.s}, {"fiber_degrees", spec.fiber_degrees}};
}

inline BundleSpec spec_from_json(const json& j) {
  BundleSpec spec;
  spec.s = j.at("base_dim").get<int>();
  spec.fiber_degrees = j.at("fiber_degrees").get<IntVec>();
  spec.validate();
  return spec;
}

inline json log_to_json(const std::vector<LogEntry>& log) {
  json out = json::array();
  for (const auto& e : log) {
    json before = json::array();
    for (const auto& o : e.before) before.push_back(object_to_json(o));
    json entry = {{"rule", e.rule}, {"index", e.index}, {"before", before}};
    entry["evidence"] = e.evidence ? hvector_to_json(*e.evidence) : json(nullptr);
    out.push_back(std::move(entry));
  }
  return out;
}

inline std::vector<LogEntry> log_from_json(const json& j) {
  std::vector<LogEntry> log;
  for (const auto& e : j) {
    LogEntry entry;
    entry.rule = e.at("rule").get<std::string>();
    entry.index = e.at("index").get<std::size_t>();
    for (const auto& o : e.at("before")) entry.before.push_back(object_from_json(o));
    if (e.contains("evidence") && !e.at("evidence").is_null()) entry.evidence = hvector_from_json(e.at("evidence"));
    log.push_back(std::move(entry));
  }
  return log;
}

/// A collection together with the variety it lives on.
struct CollectionDocument {
  BundleSpec spec;
  CenterSpec center;
  Collection collection;
  std::string status = "complete";  // or "failed"
  std::optional<std::string> error;
};

inline json document_to_json(const CollectionDocument& d) {
  json objects = json::array();
  for (const auto& o : d.collection.objects) objects.push_back(object_to_json(o));
  json out = {{"spec", spec_to_json(d.spec)},
              {"center", d.center.ray_names},
              {"objects", objects},
              {"log", log_to_json(d.collection.log)},
              {"status", d.status}};
  if (d.error) out["error"] = *d.error;
  return out;
}

inline CollectionDocument document_from_json(const json& j) {
  CollectionDocument d;
  d.spec = spec_from_json(j.at("spec"));
  d.center.ray_names = j.at("center").get<std::vector<std::string>>();
  for (const auto& o : j.at("objects")) d.collection.objects.push_back(object_from_json(o));
  if (j.contains("log")) d.collection.log = log_from_json(j.at("log"));
  if (j.contains("status")) d.status = j.at("status").get<std::string>();
  if (j.contains("error")) d.error = j.at("error").get<std::string>();
  return d;
}

/// sha256 of the canonical object list.
inline std::string collection_hash(const Collection& col) {
  json objects = json::array();
  for (const auto& o : col.objects) objects.push_back(object_to_json(o));
  return detail::sha256_hex(objects.dump());
}

inline json report_to_json(const Report& r, const std::string& collection_hash_hex) {
  json violations = json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"category", v.category}, {"i", v.i}, {"j", v.j}, {"ext", hvector_to_json(v.ext)}});
  return {{"flags",
           {{"exceptional", r.exceptional},
            {"semiorthogonal", r.semiorthogonal},
            {"strong", r.strong},
            {"gram_unimodular", r.gram_unimodular},
            {"length", r.length_ok}}},
          {"all_passed", r.all_passed()},
          {"gram", r.gram},
          {"gram_determinant", r.gram_determinant.str()},
          {"length_expected", r.length_expected},
          {"length_actual", r.length_actual},
          {"violations", violations},
          {"collection_hash", collection_hash_hex}};
}

}  // namespace excol
