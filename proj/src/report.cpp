#include "twc/report.hpp"

#include "twc/prob.hpp"

namespace twc {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::NotFalsified: return "not_falsified";
  }
  return "unknown";
}

Verdict verdict_from_string(const std::string& s) {
  if (s == "holds") return Verdict::Holds;
  if (s == "fails") return Verdict::Fails;
  if (s == "not_falsified") return Verdict::NotFalsified;
  throw TwcError(ErrorCode::SchemaError, "unknown verdict: " + s);
}

nlohmann::json ConditionReport::to_json() const {
  nlohmann::json j;
  j["condition_id"] = condition_id;
  j["verdict"] = to_string(verdict);
  j["exact"] = exact;
  j["trials"] = trials;
  j["seed"] = seed;
  j["witness"] = witness;
  j["counterexample"] = counterexample;
  if (!note.empty()) j["note"] = note;
  return j;
}

ConditionReport ConditionReport::from_json(const nlohmann::json& j) {
  ConditionReport r;
  r.condition_id = j.at("condition_id").get<std::string>();
  r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
  r.exact = j.value("exact", true);
  r.trials = j.value("trials", 0L);
  r.seed = j.value("seed", std::uint64_t(0));
  r.witness = j.value("witness", nlohmann::json());
  r.counterexample = j.value("counterexample", nlohmann::json());
  r.note = j.value("note", std::string());
  return r;
}

ConditionReport make_holds(std::string id, nlohmann::json witness, bool exact) {
  ConditionReport r;
  r.condition_id = std::move(id);
  r.verdict = Verdict::Holds;
  r.exact = exact;
  r.witness = std::move(witness);
  return r;
}

ConditionReport make_fails(std::string id, nlohmann::json counterexample, bool exact) {
  ConditionReport r;
  r.condition_id = std::move(id);
  r.verdict = Verdict::Fails;
  r.exact = exact;
  r.counterexample = std::move(counterexample);
  return r;
}

ConditionReport make_not_falsified(std::string id, long trials, std::uint64_t seed) {
  ConditionReport r;
  r.condition_id = std::move(id);
  r.verdict = Verdict::NotFalsified;
  r.exact = false;
  r.trials = trials;
  r.seed = seed;
  return r;
}

}  // namespace twc
