#pragma once
// Structured verdicts for symmetry checkers. A Holds verdict carries a witness
// that re-validates the condition when replayed; a Fails verdict carries a
// counterexample whose replay violates the condition by more than tolerance;
// NotFalsified records a randomized search that found nothing (trials, seed).

#include <cstdint>
#include <string>

#include <json.hpp>

namespace twc {

enum class Verdict { Holds, Fails, NotFalsified };

const char* to_string(Verdict v);
Verdict verdict_from_string(const std::string& s);

struct ConditionReport {
  std::string condition_id;
  Verdict verdict = Verdict::NotFalsified;
  bool exact = true;   // false when the verdict relies on randomized sampling
  long trials = 0;     // sampling effort behind a non-exact verdict
  std::uint64_t seed = 0;
  nlohmann::json witness;         // structured, condition-specific
  nlohmann::json counterexample;  // structured, condition-specific
  std::string note;

  bool holds() const { return verdict == Verdict::Holds; }
  bool fails() const { return verdict == Verdict::Fails; }

  nlohmann::json to_json() const;
  static ConditionReport from_json(const nlohmann::json& j);
};

ConditionReport make_holds(std::string id, nlohmann::json witness, bool exact = true);
ConditionReport make_fails(std::string id, nlohmann::json counterexample, bool exact = true);
ConditionReport make_not_falsified(std::string id, long trials, std::uint64_t seed);

}  // namespace twc
