#pragma once
// Executable symmetry / tightness conditions for two-user channels:
// permutation-invariance checks (one-sided, two-sided, marginal), the
// conditional-entropy (CVA) condition, common-maximizer and
// mutual-information-invariance checks, and their combinations, plus an
// implication audit that cross-checks the checkers against each other.

#include <cstdint>
#include <vector>

#include "twc/blahut.hpp"
#include "twc/prob.hpp"
#include "twc/report.hpp"

namespace twc {

struct CheckOptions {
  long trials = 10000;          // randomized falsification budget
  std::uint64_t seed = 42;
  double tol = 1e-8;            // information-quantity tolerance, bits
  double mat_tol = 1e-9;        // entrywise matrix tolerance
  long perm_budget = 10000000;  // max permutations scanned per input pair
};

enum class InvarianceMode { Structural, Randomized, Auto };

// Quasi-symmetry: some column partition splits the kernel into blocks whose
// rows are permutations of each other with equal column sums. Exhaustive and
// exact for <= 8 output symbols; wider kernels are refused (AlphabetTooLarge).
ConditionReport check_quasi_symmetric(const Kernel& k, double tol = 1e-9);

// Whether all kernels are column permutations of kernels[0]; witness maps
// column j of kernels[0] to column perm[j] of kernels[i].
ConditionReport check_column_permutation_family(const std::vector<Kernel>& kernels,
                                                double tol = 1e-9);

// One-sided permutation symmetry of the joint matrix with respect to the
// side's input (side 1 transposes X1 symbols, side 2 transposes X2 symbols):
// for every transposition there must be output permutations (pi_y1, pi_y2)
// fixing the joint law. Witness: lexicographically smallest pair per
// transposition. Exhaustive; throws SearchBudgetExceeded past opts.perm_budget.
ConditionReport check_shannon_one_sided(const TwoWayChannel& ch, int side,
                                        const CheckOptions& opts = {});

// Conjunction of the one-sided checks on both sides.
ConditionReport check_shannon_two_sided(const TwoWayChannel& ch,
                                        const CheckOptions& opts = {});

// Marginal (relaxed) permutation symmetry: output permutations may be chosen
// independently for each marginal equation instead of jointly.
ConditionReport check_marginal_shannon(const TwoWayChannel& ch, int side,
                                       const CheckOptions& opts = {});

// Conditional-entropy condition. Part 1 (exact): H(Yj | x1, x2) independent of
// x1 for every fixed x2, j = 1,2. Part 2 (semi-decision): for sampled joint
// inputs P1, searches for an independent X1 distribution whose induced
// conditional output entropies dominate P1's; Fails if the concave search
// certifies none exists above -tol.
ConditionReport check_cva(const TwoWayChannel& ch, const CheckOptions& opts = {});

// Common capacity-achieving input across the state-sliced kernels of one
// direction. Holds iff some candidate (a per-state maximizer or their average)
// achieves every state's capacity within opts.tol; the total-variation spread
// of the per-state maximizers is reported in the witness.
ConditionReport check_common_maximizer(const TwoWayChannel& ch, Direction dir,
                                       const CheckOptions& opts = {});
// Same decision applied to an explicit kernel list (shared with the
// three-user checkers).
ConditionReport check_common_maximizer_kernels(const std::vector<Kernel>& kernels,
                                               const CheckOptions& opts,
                                               const std::string& condition_id);

// Invariance of I(P, K_state) over the state, for every input distribution P.
// Structural mode proves it via column permutations (Holds or NotFalsified);
// Randomized mode samples P and reports Fails / NotFalsified; Auto chains them.
ConditionReport check_invariance(const TwoWayChannel& ch, Direction dir,
                                 InvarianceMode mode, const CheckOptions& opts = {});

// Common maximizer in both directions with state-independent optimal value.
ConditionReport check_two_sided_common_maximizer(const TwoWayChannel& ch,
                                                 const CheckOptions& opts = {});

// Common maximizer toward user 2 combined with the reverse-direction entropy
// dominance condition: H(Y1 | x1, x2) independent of x1 (exact part) and
// H1(Y1|X1) <= H2(Y1|X1) under P2 = P* x P1_{X2} (randomized part).
ConditionReport check_entropy_dominance(const TwoWayChannel& ch,
                                        const CheckOptions& opts = {});

struct RunAllResult {
  std::vector<ConditionReport> reports;
  std::vector<std::string> implications_checked;

  const ConditionReport& get(const std::string& id) const;
};

// Runs every checker and audits the implications between them (a one-sided
// permutation symmetry must not coexist with a failed common maximizer or
// invariance, the marginal symmetry implies the entropy condition, and so on).
// A violated implication means a checker bug: throws InconsistentImplication.
RunAllResult run_all_conditions(const TwoWayChannel& ch, const CheckOptions& opts = {});

// Replays a report against the channel: Holds witnesses must re-validate the
// condition, Fails counterexamples must violate it by more than tolerance.
bool verify_report(const TwoWayChannel& ch, const ConditionReport& report,
                   const CheckOptions& opts = {});

}  // namespace twc
