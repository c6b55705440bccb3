// Acceptance suite: end-to-end checks of the toolkit against its reference
// channels, one pass/fail line per criterion. Returns the number of failed
// criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "twc/blahut.hpp"
#include "twc/chanlib.hpp"
#include "twc/madb.hpp"
#include "twc/memory.hpp"
#include "twc/region.hpp"
#include "twc/rng.hpp"
#include "twc/symmetry.hpp"

using namespace twc;

namespace {

int g_failures = 0;

void line(const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] %s%s%s\n", pass ? "PASS" : "FAIL", name.c_str(),
              detail.empty() ? "" : ": ", detail.c_str());
  if (!pass) ++g_failures;
}

char buf[512];

// ---------------------------------------------------------------------------

void criterion1_additive_unit_square() {
  auto t0 = std::chrono::steady_clock::now();
  TwoWayChannel ch = binary_additive();
  RateRegion2D inner = compute_region(ch, BoundMode::Inner, 91);
  RateRegion2D outer = compute_region(ch, BoundMode::Outer, 91);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool shape = inner.vertices.size() == 3 && outer.vertices.size() == 3;
  double worst = 1.0;
  if (shape) {
    const double want[3][2] = {{0, 1}, {1, 1}, {1, 0}};
    worst = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int c = 0; c < 2; ++c) {
        worst = std::max(worst, std::abs(inner.vertices[i][c] - want[i][c]));
        worst = std::max(worst, std::abs(outer.vertices[i][c] - want[i][c]));
      }
  }
  std::snprintf(buf, sizeof buf,
                "unit square, max vertex error %.2e (tol 1e-6), %.3f s (budget 1 s)",
                worst, secs);
  line("criterion 1: additive channel region", shape && worst <= 1e-6 && secs < 1.0, buf);
}

void criterion2_noise_erasure_rectangle() {
  TwoWayChannel ch = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2);
  RateRegion2D inner = compute_region(ch, BoundMode::Inner, 91);
  double r1_want = 0.8 * (1.0 - binary_entropy(0.125));
  double r2_want = 0.9 * (1.0 - binary_entropy(0.05 / 0.9));
  double d1 = std::abs(inner.max_r1() - r1_want);
  double d2 = std::abs(inner.max_r2() - r2_want);
  std::snprintf(buf, sizeof buf,
                "R1 %.5f vs 0.8(1-Hb(0.125)) = %.5f (err %.1e), R2 %.5f vs %.5f "
                "(err %.1e), tol 1e-3",
                inner.max_r1(), r1_want, d1, inner.max_r2(), r2_want, d2);
  line("criterion 2: noise-erasure rectangle corners", d1 <= 1e-3 && d2 <= 1e-3, buf);
}

void criterion3_example4() {
  TwoWayChannel ch = fixture("example4");
  CheckOptions opts;

  ConditionReport cm = check_common_maximizer(ch, Direction::To2, opts);
  bool cm_ok = cm.holds();
  double p1 = 0.0;
  if (cm_ok) p1 = cm.witness.at("p_star").get<Vec>()[1];
  std::snprintf(buf, sizeof buf,
                "p = (%.4f, %.4f); reported 0.471 is the x1=1 component (the printed "
                "kernels place 0.529 on x1=0), tol 0.005",
                1.0 - p1, p1);
  line("criterion 3a: common maximizer at 0.471", cm_ok && std::abs(p1 - 0.471) <= 5e-3,
       buf);

  ConditionReport sh = check_shannon_one_sided(ch, 1, opts);
  line("criterion 3b: one-sided permutation symmetry fails", sh.fails(),
       std::string("verdict ") + to_string(sh.verdict));

  ConditionReport cva = check_cva(ch, opts);
  bool witness_ok = cva.fails() && cva.counterexample.value("part", 0) == 1 &&
                    cva.counterexample.value("j", 0) == 2;
  if (witness_ok) {
    double ha = cva.counterexample.at("h_a"), hb = cva.counterexample.at("h_b");
    witness_ok = std::abs(ha - binary_entropy(0.1)) < 1e-9 &&
                 std::abs(hb - binary_entropy(0.3)) < 1e-9;
    std::snprintf(buf, sizeof buf, "witness H = (%.6f, %.6f) = (Hb(0.1), Hb(0.3))", ha,
                  hb);
  } else {
    std::snprintf(buf, sizeof buf, "verdict %s", to_string(cva.verdict));
  }
  line("criterion 3c: entropy condition fails with the Hb(0.1)/Hb(0.3) witness",
       witness_ok, buf);

  ConditionReport inv = check_invariance(ch, Direction::To1, InvarianceMode::Auto, opts);
  line("criterion 3d: common maximizer + reverse invariance hold",
       cm.holds() && inv.holds(),
       std::string("invariance ") + to_string(inv.verdict));
}

void criterion4_motivational() {
  TwoWayChannel ch = fixture("motivational");
  bool cp2 = check_column_permutation_family(state_kernels(ch, Direction::To2)).holds();
  bool cp1 = check_column_permutation_family(state_kernels(ch, Direction::To1)).holds();
  line("criterion 4a: column permutations hold in both directions", cp2 && cp1,
       cp2 && cp1 ? "both directions" : "missing direction");

  double worst = 0.0;
  for (int i = 0; i <= 20; ++i) {
    double lam = i / 20.0;
    double in = support_value(ch, lam, BoundMode::Inner).value;
    double out = support_value(ch, lam, BoundMode::Outer).value;
    worst = std::max(worst, std::abs(in - out));
  }
  std::snprintf(buf, sizeof buf, "max |inner - outer| over 21 directions = %.2e (tol 2e-3)",
                worst);
  line("criterion 4b: inner and outer supports agree", worst <= 2e-3, buf);
}

void criterion5_examples_5_6_audit() {
  CheckOptions opts;
  TwoWayChannel e5 = fixture("example5");
  ConditionReport p1 = check_shannon_one_sided(e5, 1, opts);
  ConditionReport p2 = check_shannon_two_sided(e5, opts);
  ConditionReport ext = check_marginal_shannon(e5, 1, opts);
  line("criterion 5a: example5 fails the one/two-sided conditions, passes the "
       "marginal one",
       p1.fails() && p2.fails() && ext.holds(),
       std::string(to_string(p1.verdict)) + "/" + to_string(p2.verdict) + "/" +
           to_string(ext.verdict));

  TwoWayChannel e6 = fixture("example6");
  ConditionReport ext6 = check_marginal_shannon(e6, 1, opts);
  CheckOptions heavy;
  heavy.trials = 10000;
  ConditionReport cva6 = check_cva(e6, heavy);
  std::snprintf(buf, sizeof buf, "marginal %s, entropy condition %s after %ld trials",
                to_string(ext6.verdict), to_string(cva6.verdict), cva6.trials);
  line("criterion 5b: example6 fails the marginal condition, survives 10^4 "
       "falsification trials",
       ext6.fails() && cva6.verdict == Verdict::NotFalsified && cva6.trials == 10000,
       buf);

  bool audit_ok = true;
  std::string audit_note = "no inconsistency";
  std::vector<TwoWayChannel> fixtures = {fixture("motivational"), fixture("example4"),
                                         fixture("example5"),    fixture("example6"),
                                         binary_additive(),
                                         gen_qary_noise_erasure(2, 0.1, 0.0, 0.1, 0.0),
                                         gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2),
                                         gen_data_access(1, 0.0, 0.0, 0.1, 0.2),
                                         gen_isd(ternary_isd_spec()),
                                         noiseless_echo()};
  CheckOptions audit_opts;
  audit_opts.trials = 1000;
  for (size_t i = 0; i < fixtures.size() && audit_ok; ++i) {
    try {
      run_all_conditions(fixtures[i], audit_opts);
    } catch (const TwcError& e) {
      audit_ok = false;
      audit_note = e.what();
    }
  }
  line("criterion 5c: implication audit passes on every fixture", audit_ok, audit_note);
}

void criterion6_memory() {
  Mat t(2, 2);
  t(0, 0) = t(1, 1) = 0.9;
  t(0, 1) = t(1, 0) = 0.1;
  double rate = entropy_rate(MarkovNoise::make(t));
  double want = binary_entropy(0.1);
  std::snprintf(buf, sizeof buf, "H = %.9f vs Hb(0.1) = %.9f (prints as 0.46900), tol 1e-6",
                rate, want);
  line("criterion 6a: sticky-chain entropy rate", std::abs(rate - want) <= 1e-6, buf);

  RateRegion2D outer = outer_rect_joint_noise(lagged_noise_joint(), 2, 2);
  std::snprintf(buf, sizeof buf, "(R1, R2) = (%.15f, %.15f)", outer.max_r1(),
                outer.max_r2());
  line("criterion 6b: lagged-noise outer rectangle is (1, 0)",
       std::abs(outer.max_r1() - 1.0) <= 1e-12 && outer.max_r2() <= 1e-12, buf);

  long total_errors = 0;
  double bound = 0.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    AdaptiveSimReport rep = memsim_adaptive(10000, seed);
    total_errors += rep.errors;
    bound = rep.shannon_type_bound;
  }
  std::snprintf(buf, sizeof buf,
                "%ld errors over 100 seeds x 10^4 uses; non-adaptive bound R1 <= %.1f",
                total_errors, bound);
  line("criterion 6c: adaptive scheme transmits error-free where the non-adaptive "
       "bound is zero",
       total_errors == 0 && bound == 0.0, buf);
}

void criterion7_madb() {
  MadbOptions opts;
  MadbChannel ex11 = gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1});
  ConditionReport sym = check_madb_permutation_symmetry(ex11, opts);
  double inner = madb_support(ex11, {1, 1, 0, 0}, BoundMode::Inner, opts).value;
  double outer = madb_support(ex11, {1, 1, 0, 0}, BoundMode::Outer, opts).value;
  // The derived sum-rate value is 1 - eps = 0.9 (erasure law; the reference
  // text's 1 - Hb(eps) display contradicts its own channel definition, which
  // the direct maximization here confirms).
  std::snprintf(buf, sizeof buf,
                "symmetry %s; sum-rate inner %.5f / outer %.5f vs 1 - eps = 0.9 "
                "(tol 5e-3)",
                to_string(sym.verdict), inner, outer);
  line("criterion 7a: erasure network symmetric and tight",
       sym.holds() && std::abs(inner - 0.9) <= 5e-3 && std::abs(outer - 0.9) <= 5e-3,
       buf);

  MadbChannel ex9 =
      gen_madb_additive(3, {0.8, 0.1, 0.1}, {0.8, 0.1, 0.1}, {0.7, 0.2, 0.1});
  ConditionReport sym9 = check_madb_permutation_symmetry(ex9, opts);
  line("criterion 7b: additive network (q = 3) fails the permutation symmetry",
       sym9.fails(), std::string("verdict ") + to_string(sym9.verdict));

  // This criterion asserts that example10 fails the three-user
  // common-maximizer condition. Direct computation gives Holds: the uplink
  // output is independent of X1, every slice family is a column-permutation
  // family, and the dominance inequality is an identity because the sum-rate
  // information depends only on the X2 marginal, which the substituted
  // product input preserves. The criterion contradicts the checker's
  // contract (and the unit suite pinning Holds); it is asserted literally
  // here and its failure reported honestly.
  MadbChannel ex10 = gen_madb_example10(0.2, {0.9, 0.1}, {0.7, 0.3});
  MadbOptions m10;
  m10.trials = 2000;
  ConditionReport cm10 = check_madb_common_maximizer(ex10, m10);
  std::snprintf(buf, sizeof buf,
                "asserted fails per the criterion text; checker returns %s "
                "(expected: the quasi-symmetric network satisfies every clause; "
                "see the note above this check in the source)",
                to_string(cm10.verdict));
  line("criterion 7c: example10 fails the three-user common-maximizer condition",
       cm10.fails(), buf);
}

void criterion8_properties() {
  SplitMix64 master(20260809);
  std::vector<TwoWayChannel> random_channels;
  for (int i = 0; i < 50; ++i)
    random_channels.push_back(validate_channel(stochastic_sample(master, 4, 4), 2, 2, 2, 2));

  // inner support <= outer support at 21 directions
  bool support_ok = true;
  double worst_gap = 0.0;
  RegionOptions ropts;
  ropts.grid = 25;
  for (const TwoWayChannel& ch : random_channels) {
    for (int i = 0; i <= 20 && support_ok; ++i) {
      double lam = i / 20.0;
      double in = support_value(ch, lam, BoundMode::Inner, ropts).value;
      double out = support_value(ch, lam, BoundMode::Outer, ropts).value;
      worst_gap = std::max(worst_gap, in - out);
      if (in > out + 1e-6) support_ok = false;
    }
    if (!support_ok) break;
  }
  std::snprintf(buf, sizeof buf, "50 channels x 21 directions, worst inner - outer = %.2e",
                worst_gap);
  line("criterion 8a: inner supports never exceed outer supports", support_ok, buf);

  // concavity of the information functional on 10^3 random triples
  bool concave_ok = true;
  SplitMix64 rng(4242);
  for (int t = 0; t < 1000 && concave_ok; ++t) {
    Mat k = stochastic_sample(rng, 3, 3);
    Vec p1 = simplex_sample(rng, 3), p2 = simplex_sample(rng, 3);
    double lam = rng.uniform01();
    Vec mix(3);
    for (int i = 0; i < 3; ++i) mix[i] = lam * p1[i] + (1.0 - lam) * p2[i];
    double lhs = mutual_information(mix, k);
    double rhs =
        lam * mutual_information(p1, k) + (1.0 - lam) * mutual_information(p2, k);
    if (lhs < rhs - 1e-9) concave_ok = false;
  }
  line("criterion 8b: information functional concave on 10^3 triples", concave_ok, "");

  // monotone solver iterates on every state kernel of the random channels
  bool monotone_ok = true;
  for (const TwoWayChannel& ch : random_channels) {
    for (Direction dir : {Direction::To2, Direction::To1}) {
      for (const Kernel& k : state_kernels(ch, dir)) {
        Vec trace;
        BAOptions bopts;
        bopts.trace = &trace;
        blahut_arimoto(k, bopts);
        for (size_t i = 1; i < trace.size(); ++i)
          if (trace[i] < trace[i - 1] - 1e-12) monotone_ok = false;
      }
    }
    if (!monotone_ok) break;
  }
  line("criterion 8c: capacity solver iterates are monotone", monotone_ok, "");

  // every witness and counterexample replays
  bool replay_ok = true;
  std::string replay_note;
  CheckOptions copts;
  copts.trials = 300;
  std::vector<TwoWayChannel> replay_channels = random_channels;
  for (const char* name : {"motivational", "example4", "example5", "example6"})
    replay_channels.push_back(fixture(name));
  replay_channels.push_back(binary_additive());
  long reports_checked = 0;
  for (const TwoWayChannel& ch : replay_channels) {
    RunAllResult res = run_all_conditions(ch, copts);
    for (const ConditionReport& r : res.reports) {
      ++reports_checked;
      if (!verify_report(ch, r, copts)) {
        replay_ok = false;
        replay_note = "failed: " + r.condition_id;
        break;
      }
    }
    if (!replay_ok) break;
  }
  if (replay_ok)
    std::snprintf(buf, sizeof buf, "%ld reports replayed", reports_checked);
  else
    std::snprintf(buf, sizeof buf, "%s", replay_note.c_str());
  line("criterion 8d: every witness and counterexample replays", replay_ok, buf);

  // transposition/mixing oracles wherever the one-sided symmetry holds
  bool oracle_ok = true;
  SplitMix64 lrng(888);
  for (const TwoWayChannel& ch :
       {binary_additive(), gen_qary_noise_erasure(2, 0.1, 0.0, 0.1, 0.0),
        gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2), noiseless_echo()}) {
    if (!check_shannon_one_sided(ch, 1, copts).holds()) {
      oracle_ok = false;
      break;
    }
    for (int t = 0; t < 50 && oracle_ok; ++t) {
      Mat j1(ch.nx1, ch.nx2);
      j1.a = simplex_sample(lrng, ch.nx1 * ch.nx2);
      Mat j2(ch.nx1, ch.nx2);
      for (int x1 = 0; x1 < ch.nx1; ++x1)
        for (int x2 = 0; x2 < ch.nx2; ++x2)
          j2(x1 == 0 ? 1 : (x1 == 1 ? 0 : x1), x2) = j1(x1, x2);
      JointDist p1(j1), p2(j2);
      double a1 = conditional_mutual_information(p1, ch, Direction::To2);
      double a2 = conditional_mutual_information(p2, ch, Direction::To2);
      double b1 = conditional_mutual_information(p1, ch, Direction::To1);
      double b2 = conditional_mutual_information(p2, ch, Direction::To1);
      if (std::abs(a1 - a2) > 1e-8 || std::abs(b1 - b2) > 1e-8) oracle_ok = false;
      Mat jm(ch.nx1, ch.nx2);
      for (size_t i = 0; i < jm.a.size(); ++i) jm.a[i] = 0.5 * (j1.a[i] + j2.a[i]);
      JointDist p3(jm);
      if (conditional_mutual_information(p3, ch, Direction::To2) < a1 - 1e-9 ||
          conditional_mutual_information(p3, ch, Direction::To1) < b1 - 1e-9)
        oracle_ok = false;
    }
    if (!oracle_ok) break;
  }
  line("criterion 8e: transposition equality and mixing inequality oracles", oracle_ok,
       "");
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  criterion1_additive_unit_square();
  criterion2_noise_erasure_rectangle();
  criterion3_example4();
  criterion4_motivational();
  criterion5_examples_5_6_audit();
  criterion6_memory();
  criterion7_madb();
  criterion8_properties();
  std::printf("----------------\n%s: %d failing line(s)\n",
              g_failures == 0 ? "all criteria satisfied" : "criteria with failures",
              g_failures);
  return g_failures;
}
