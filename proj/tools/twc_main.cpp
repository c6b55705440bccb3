// twc: command-line front end for two-way channel capacity analysis.
// Subcommands: check, region, gen, madb (check|support|gen), memsim, repro.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "twc/json_io.hpp"
#include "twc/parallel.hpp"

using nlohmann::json;
using namespace twc;

namespace {

int exit_code_for(const TwcError& e) {
  switch (e.code()) {
    case ErrorCode::NonConvergence:
      return 3;
    case ErrorCode::SearchBudgetExceeded:
    case ErrorCode::AlphabetTooLarge:
      return 4;
    case ErrorCode::InconsistentImplication:
      return 1;
    default:
      return 2;
  }
}

void print_report_line(const ConditionReport& r) {
  std::printf("  %-28s %-13s", r.condition_id.c_str(), to_string(r.verdict));
  if (!r.exact && r.trials > 0) std::printf(" (trials=%ld, seed=%llu)", r.trials,
                                            (unsigned long long)r.seed);
  if (!r.note.empty()) std::printf("  %s", r.note.c_str());
  std::printf("\n");
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fputs(text.c_str(), stdout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw TwcError(ErrorCode::SchemaError, "cannot write " + path);
  out << text;
}

struct CheckArgs {
  std::string file;
  std::string conditions;
  long trials = 10000;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  bool as_json = false;
};

int run_check(const CheckArgs& a) {
  ChannelFile cf = load_channel_file(a.file);
  std::vector<std::string> wanted;
  if (!a.conditions.empty()) {
    std::stringstream ss(a.conditions);
    std::string tok;
    while (std::getline(ss, tok, ',')) wanted.push_back(tok);
  }
  auto selected = [&](const std::string& id) {
    return wanted.empty() || std::find(wanted.begin(), wanted.end(), id) != wanted.end();
  };

  std::vector<ConditionReport> reports;
  if (std::holds_alternative<TwoWayChannel>(cf)) {
    const auto& ch = std::get<TwoWayChannel>(cf);
    CheckOptions opts;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.tol = a.tol;
    RunAllResult res = run_all_conditions(ch, opts);
    for (auto& r : res.reports)
      if (selected(r.condition_id)) reports.push_back(std::move(r));
  } else if (std::holds_alternative<MadbChannel>(cf)) {
    const auto& ch = std::get<MadbChannel>(cf);
    MadbOptions opts;
    opts.trials = a.trials;
    opts.seed = a.seed;
    opts.tol = a.tol;
    for (auto&& r : {check_madb_permutation_symmetry(ch, opts),
                     check_madb_common_maximizer(ch, opts),
                     check_madb_product_achievability(ch, opts)})
      if (selected(r.condition_id)) reports.push_back(r);
  } else {
    throw TwcError(ErrorCode::SchemaError, "check expects a twc or madb channel file");
  }

  if (a.as_json) {
    json arr = json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    std::printf("%s\n", arr.dump(2).c_str());
  } else {
    std::printf("%s: %zu condition reports\n", a.file.c_str(), reports.size());
    for (const auto& r : reports) print_report_line(r);
  }
  return 0;
}

struct RegionArgs {
  std::string file;
  std::string bound = "inner";
  int grid = 50;
  int directions = 91;
  std::string out;
};

int run_region(const RegionArgs& a) {
  ChannelFile cf = load_channel_file(a.file);
  if (std::holds_alternative<MemoryChannelSpec>(cf)) {
    RateRegion2D r = capacity_rect_invertible(std::get<MemoryChannelSpec>(cf));
    write_text(a.out, region_to_csv(r));
    return 0;
  }
  if (!std::holds_alternative<TwoWayChannel>(cf))
    throw TwcError(ErrorCode::SchemaError, "region expects a twc or memory channel file");
  const auto& ch = std::get<TwoWayChannel>(cf);
  RegionOptions opts;
  opts.grid = a.grid;
  auto emit = [&](BoundMode mode, const std::string& path) {
    RateRegion2D r = compute_region(ch, mode, a.directions, opts);
    write_text(path, region_to_csv(r));
  };
  if (a.bound == "inner") {
    emit(BoundMode::Inner, a.out);
  } else if (a.bound == "outer") {
    emit(BoundMode::Outer, a.out);
  } else if (a.bound == "both") {
    if (a.out.empty() || a.out == "-") {
      std::printf("# inner\n");
      emit(BoundMode::Inner, "-");
      std::printf("# outer\n");
      emit(BoundMode::Outer, "-");
    } else {
      std::string stem = a.out;
      if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".csv")
        stem = stem.substr(0, stem.size() - 4);
      emit(BoundMode::Inner, stem + ".inner.csv");
      emit(BoundMode::Outer, stem + ".outer.csv");
    }
  } else {
    throw TwcError(ErrorCode::SchemaError, "--bound must be inner, outer, or both");
  }
  return 0;
}

MemoryChannelSpec additive_memory_spec(int q, double stay1, double stay2) {
  if (q != 2) throw TwcError(ErrorCode::ParameterOutOfRange, "memory-additive: q must be 2");
  MemoryChannelSpec spec;
  spec.nx1 = spec.nx2 = spec.ny1 = spec.ny2 = spec.nz1 = spec.nz2 = q;
  spec.f1.resize(q * q * q);
  spec.f2.resize(q * q * q);
  for (int x1 = 0; x1 < q; ++x1)
    for (int x2 = 0; x2 < q; ++x2)
      for (int z = 0; z < q; ++z) {
        spec.f1[(size_t(x1) * q + x2) * q + z] = (x1 + x2 + z) % q;
        spec.f2[(size_t(x1) * q + x2) * q + z] = (x1 + x2 + z) % q;
      }
  auto chain = [&](double stay) {
    Mat t(2, 2);
    t(0, 0) = stay;
    t(0, 1) = 1.0 - stay;
    t(1, 0) = 1.0 - stay;
    t(1, 1) = stay;
    return MarkovNoise::make(t);
  };
  spec.noise1 = chain(stay1);
  spec.noise2 = chain(stay2);
  return spec;
}

struct GenArgs {
  std::string family;
  int q = 2, m = 1;
  double a1 = 0.0, e1 = 0.0, a2 = 0.0, e2 = 0.0;
  double stay1 = 0.9, stay2 = 0.9;
  std::string name;
  std::string out;
};

int run_gen(const GenArgs& a) {
  json j;
  if (a.family == "qary-erasure") {
    j = channel_to_json(gen_qary_noise_erasure(a.q, a.a1, a.e1, a.a2, a.e2));
  } else if (a.family == "data-access") {
    j = channel_to_json(gen_data_access(a.m, a.a1, a.e1, a.a2, a.e2));
  } else if (a.family == "fixture") {
    j = channel_to_json(fixture(a.name));
  } else if (a.family == "isd-demo") {
    j = channel_to_json(gen_isd(ternary_isd_spec()));
  } else if (a.family == "memory-additive") {
    j = channel_to_json(additive_memory_spec(a.q, a.stay1, a.stay2));
  } else {
    throw TwcError(ErrorCode::SchemaError, "unknown family: " + a.family);
  }
  if (a.out.empty() || a.out == "-")
    std::printf("%s\n", j.dump(2).c_str());
  else
    save_channel_file(a.out, j);
  return 0;
}

Vec parse_pmf(const std::string& s, int q, const char* what) {
  if (s.empty()) return Vec();
  Vec v;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) v.push_back(std::stod(tok));
  if ((int)v.size() != q)
    throw TwcError(ErrorCode::SchemaError,
                   std::string(what) + " must have exactly " + std::to_string(q) +
                       " entries");
  return v;
}

struct MadbGenArgs {
  std::string family;
  int q = 2;
  double eps = 0.1;
  std::string pz1, pz2, pz3;
  std::string out;
};

int run_madb_gen(const MadbGenArgs& a) {
  Vec z1 = parse_pmf(a.pz1, a.q, "--pz1");
  Vec z2 = parse_pmf(a.pz2, a.q, "--pz2");
  if (z1.empty()) z1.assign(a.q, 1.0 / a.q);
  if (z2.empty()) z2.assign(a.q, 1.0 / a.q);
  json j;
  if (a.family == "additive") {
    Vec z3 = parse_pmf(a.pz3, a.q, "--pz3");
    if (z3.empty()) {
      z3.assign(a.q, 0.0);
      z3[0] = 0.9;
      for (int i = 1; i < a.q; ++i) z3[i] = 0.1 / (a.q - 1);
    }
    j = channel_to_json(gen_madb_additive(a.q, z1, z2, z3));
  } else if (a.family == "example10") {
    if (a.q != 2) throw TwcError(ErrorCode::ParameterOutOfRange, "example10 has q = 2");
    j = channel_to_json(gen_madb_example10(a.eps, z1, z2));
  } else if (a.family == "erasure") {
    if (a.q != 2) throw TwcError(ErrorCode::ParameterOutOfRange, "erasure has q = 2");
    j = channel_to_json(gen_madb_erasure(a.eps, z1, z2));
  } else {
    throw TwcError(ErrorCode::SchemaError, "unknown madb family: " + a.family);
  }
  if (a.out.empty() || a.out == "-")
    std::printf("%s\n", j.dump(2).c_str());
  else
    save_channel_file(a.out, j);
  return 0;
}

struct MadbSupportArgs {
  std::string file;
  std::vector<std::string> weights;
  std::string mode = "both";
  std::string out;
  long trials = 10000;
  std::uint64_t seed = 42;
};

int run_madb_support(const MadbSupportArgs& a) {
  ChannelFile cf = load_channel_file(a.file);
  if (!std::holds_alternative<MadbChannel>(cf))
    throw TwcError(ErrorCode::SchemaError, "madb support expects a madb channel file");
  const auto& ch = std::get<MadbChannel>(cf);
  std::vector<std::array<double, 4>> dirs;
  for (const std::string& s : a.weights) {
    std::stringstream ss(s);
    std::string tok;
    std::array<double, 4> w{};
    int i = 0;
    while (std::getline(ss, tok, ',') && i < 4) w[i++] = std::stod(tok);
    if (i != 4)
      throw TwcError(ErrorCode::SchemaError, "--weights needs w13,w23,w31,w32");
    dirs.push_back(w);
  }
  if (dirs.empty())
    dirs = {{1, 0, 0, 0}, {0, 1, 0, 0}, {1, 1, 0, 0}, {0, 0, 1, 0},
            {0, 0, 0, 1}, {0, 0, 1, 1}, {1, 1, 1, 1}};
  MadbOptions opts;
  opts.seed = a.seed;
  opts.trials = a.trials;
  std::string csv = "w13,w23,w31,w32,inner,outer\n";
  char buf[160];
  for (const auto& w : dirs) {
    double inner = 0.0, outer = 0.0;
    if (a.mode == "inner" || a.mode == "both")
      inner = madb_support(ch, w, BoundMode::Inner, opts).value;
    if (a.mode == "outer" || a.mode == "both")
      outer = madb_support(ch, w, BoundMode::Outer, opts).value;
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", w[0], w[1], w[2],
                  w[3], inner, outer);
    csv += buf;
  }
  write_text(a.out, csv);
  return 0;
}

struct MemsimArgs {
  long n = 10000;
  std::uint64_t seed = 42;
};

int run_memsim(const MemsimArgs& a) {
  AdaptiveSimReport rep = memsim_adaptive(a.n, a.seed);
  json j;
  j["n"] = rep.n;
  j["errors"] = rep.errors;
  j["rate"] = rep.rate;
  j["shannon_type_bound"] = rep.shannon_type_bound;
  std::printf("%s\n", j.dump(2).c_str());
  return 0;
}

// --- repro: re-run a named reference channel end to end -------------------

struct Expectation {
  std::string what;
  bool pass;
  std::string detail;
};

int finish_repro(const std::string& id, std::vector<Expectation>& exps) {
  int failed = 0;
  std::printf("repro %s\n", id.c_str());
  for (const auto& e : exps) {
    std::printf("  [%s] %s%s%s\n", e.pass ? "ok" : "FAIL", e.what.c_str(),
                e.detail.empty() ? "" : " -- ", e.detail.c_str());
    if (!e.pass) ++failed;
  }
  std::printf("%s: %zu/%zu expectations matched\n", id.c_str(), exps.size() - failed,
              exps.size());
  return failed == 0 ? 0 : 1;
}

void expect_verdict(std::vector<Expectation>& exps, const ConditionReport& r,
                    Verdict want) {
  exps.push_back({r.condition_id + " = " + to_string(want), r.verdict == want,
                  std::string("got ") + to_string(r.verdict)});
}

int run_repro(const std::string& id) {
  std::vector<Expectation> exps;
  CheckOptions opts;
  if (id == "motivational" || id == "example4") {
    TwoWayChannel ch = fixture(id);
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("shannon-x1"), Verdict::Fails);
    expect_verdict(exps, res.get("cva"), Verdict::Fails);
    expect_verdict(exps, res.get("column-permutation-to2"),
                   id == "motivational" ? Verdict::Holds : Verdict::Fails);
    expect_verdict(exps, res.get("column-permutation-to1"), Verdict::Holds);
    const ConditionReport& cm = res.get("common-maximizer-to2");
    expect_verdict(exps, cm, Verdict::Holds);
    expect_verdict(exps, res.get("invariance-to1"), Verdict::Holds);
    if (cm.holds()) {
      Vec p = cm.witness.at("p_star").get<Vec>();
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "common maximizer p = (%.4f, %.4f); the 0.471 component is x1=1",
                    p[0], p[1]);
      exps.push_back({"common maximizer has a 0.471 component",
                      std::abs(p[1] - 0.471) < 5e-3, buf});
    }
    bool thm1 = res.get("common-maximizer-to2").holds() &&
                res.get("invariance-to1").holds();
    exps.push_back({"common-maximizer + reverse invariance (tightness)", thm1,
                    thm1 ? "capacity region is exact" : ""});
    return finish_repro(id, exps);
  }
  if (id == "example1") {
    TwoWayChannel ch = gen_qary_noise_erasure(2, 0.05, 0.1, 0.1, 0.2);
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("column-permutation-to2"), Verdict::Holds);
    expect_verdict(exps, res.get("column-permutation-to1"), Verdict::Holds);
    expect_verdict(exps, res.get("quasi-symmetric-to2"), Verdict::Holds);
    expect_verdict(exps, res.get("shannon-x1"), Verdict::Holds);
    RateRegion2D closed = closed_form_qary_erasure(2, 0.05, 0.1, 0.1, 0.2);
    RegionOptions ropts;
    RateRegion2D inner = compute_region(ch, BoundMode::Inner, 51, ropts);
    double hd = region_hausdorff(closed, inner);
    char buf[96];
    std::snprintf(buf, sizeof buf, "corner (%.5f, %.5f), hausdorff vs sweep %.2e",
                  closed.max_r1(), closed.max_r2(), hd);
    exps.push_back({"closed-form rectangle matches numeric sweep", hd < 1e-3, buf});
    return finish_repro(id, exps);
  }
  if (id == "example2") {
    TwoWayChannel ch = gen_data_access(1, 0.0, 0.0, 0.1, 0.2);
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("column-permutation-to2"), Verdict::Holds);
    expect_verdict(exps, res.get("column-permutation-to1"), Verdict::Holds);
    double want = 0.8 * (1.0 - binary_entropy(0.1 / 0.8));
    double got = support_value(ch, 1.0, BoundMode::Inner).value;
    char buf[96];
    std::snprintf(buf, sizeof buf, "R1 corner: want %.5f got %.5f", want, got);
    exps.push_back({"corner rate matches closed form", std::abs(want - got) < 1e-3, buf});
    return finish_repro(id, exps);
  }
  if (id == "example3") {
    TwoWayChannel ch = gen_isd(ternary_isd_spec());
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("common-maximizer-two-sided"), Verdict::Holds);
    double in = support_value(ch, 0.5, BoundMode::Inner).value;
    double out = support_value(ch, 0.5, BoundMode::Outer).value;
    char buf[96];
    std::snprintf(buf, sizeof buf, "inner %.6f outer %.6f", in, out);
    exps.push_back({"inner and outer supports agree", std::abs(in - out) < 2e-3, buf});
    return finish_repro(id, exps);
  }
  if (id == "example5") {
    TwoWayChannel ch = fixture("example5");
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("shannon-x1"), Verdict::Fails);
    expect_verdict(exps, res.get("shannon-x2"), Verdict::Fails);
    expect_verdict(exps, res.get("shannon-two-sided"), Verdict::Fails);
    expect_verdict(exps, res.get("marginal-shannon-x1"), Verdict::Holds);
    expect_verdict(exps, res.get("cva"), Verdict::NotFalsified);
    return finish_repro(id, exps);
  }
  if (id == "example6") {
    TwoWayChannel ch = fixture("example6");
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("marginal-shannon-x1"), Verdict::Fails);
    expect_verdict(exps, res.get("cva"), Verdict::NotFalsified);
    return finish_repro(id, exps);
  }
  if (id == "example8") {
    AdaptiveSimReport rep = memsim_adaptive(10000, 42);
    exps.push_back({"adaptive scheme decodes error-free", rep.errors == 0,
                    "errors = " + std::to_string(rep.errors)});
    exps.push_back({"non-adaptive benchmark rate is zero",
                    rep.shannon_type_bound == 0.0,
                    "bound = " + std::to_string(rep.shannon_type_bound)});
    RateRegion2D outer = outer_rect_joint_noise(lagged_noise_joint(), 2, 2);
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.12f, %.12f)", outer.max_r1(), outer.max_r2());
    exps.push_back({"joint-noise outer rectangle is (1, 0)",
                    std::abs(outer.max_r1() - 1.0) < 1e-12 && outer.max_r2() < 1e-12,
                    buf});
    return finish_repro(id, exps);
  }
  if (id == "example9") {
    MadbChannel ch = gen_madb_additive(3, {0.8, 0.1, 0.1}, {0.8, 0.1, 0.1},
                                       {0.7, 0.2, 0.1});
    MadbOptions mopts;
    mopts.trials = 500;
    expect_verdict(exps, check_madb_permutation_symmetry(ch, mopts), Verdict::Fails);
    expect_verdict(exps, check_madb_common_maximizer(ch, mopts), Verdict::Holds);
    expect_verdict(exps, check_madb_product_achievability(ch, mopts),
                   Verdict::NotFalsified);
    return finish_repro(id, exps);
  }
  if (id == "example10") {
    MadbChannel ch = gen_madb_example10(0.2, {0.9, 0.1}, {0.9, 0.1});
    MadbOptions mopts;
    mopts.trials = 500;
    expect_verdict(exps, check_madb_common_maximizer(ch, mopts), Verdict::Holds);
    expect_verdict(exps, check_madb_permutation_symmetry(ch, mopts), Verdict::Fails);
    expect_verdict(exps, check_madb_product_achievability(ch, mopts),
                   Verdict::NotFalsified);
    return finish_repro(id, exps);
  }
  if (id == "example11") {
    MadbChannel ch = gen_madb_erasure(0.1, {0.9, 0.1}, {0.9, 0.1});
    MadbOptions mopts;
    mopts.trials = 500;
    expect_verdict(exps, check_madb_permutation_symmetry(ch, mopts), Verdict::Holds);
    double in = madb_support(ch, {1, 1, 0, 0}, BoundMode::Inner, mopts).value;
    double out = madb_support(ch, {1, 1, 0, 0}, BoundMode::Outer, mopts).value;
    char buf[128];
    std::snprintf(buf, sizeof buf, "inner %.5f outer %.5f (expected 1 - eps = 0.9)", in,
                  out);
    exps.push_back({"sum-rate supports agree at 1 - eps",
                    std::abs(in - 0.9) < 5e-3 && std::abs(out - 0.9) < 5e-3, buf});
    return finish_repro(id, exps);
  }
  if (id == "remark1") {
    TwoWayChannel ch = binary_additive();
    RunAllResult res = run_all_conditions(ch, opts);
    expect_verdict(exps, res.get("shannon-two-sided"), Verdict::Holds);
    RateRegion2D inner = compute_region(ch, BoundMode::Inner, 51);
    char buf[96];
    std::snprintf(buf, sizeof buf, "corner (%.8f, %.8f)", inner.max_r1(), inner.max_r2());
    exps.push_back({"unit-square region",
                    std::abs(inner.max_r1() - 1.0) < 1e-6 &&
                        std::abs(inner.max_r2() - 1.0) < 1e-6,
                    buf});
    return finish_repro(id, exps);
  }
  throw TwcError(ErrorCode::SchemaError, "unknown repro id: " + id);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-way channel capacity toolkit"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "run symmetry/tightness condition checkers");
  check->add_option("file", check_args.file, "channel JSON file")->required();
  check->add_option("--conditions", check_args.conditions, "comma-separated condition ids");
  check->add_option("--trials", check_args.trials, "randomized falsification trials");
  check->add_option("--seed", check_args.seed, "master seed");
  check->add_option("--tol", check_args.tol, "information tolerance, bits");
  check->add_flag("--json", check_args.as_json, "emit JSON reports");

  RegionArgs region_args;
  auto* region = app.add_subcommand("region", "compute an achievable-rate region");
  region->add_option("file", region_args.file, "channel JSON file")->required();
  region->add_option("--bound", region_args.bound, "inner | outer | both")->required();
  region->add_option("--grid", region_args.grid, "grid points per simplex dimension");
  region->add_option("--directions", region_args.directions, "support directions");
  region->add_option("-o,--out", region_args.out, "output CSV path");

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "generate a channel file");
  gen->add_option("family", gen_args.family,
                  "qary-erasure | data-access | fixture | isd-demo | memory-additive")
      ->required();
  gen->add_option("--q", gen_args.q, "alphabet size");
  gen->add_option("--m", gen_args.m, "data-access bit width");
  gen->add_option("--a1", gen_args.a1, "noise weight toward user 1");
  gen->add_option("--e1", gen_args.e1, "erasure weight toward user 1");
  gen->add_option("--a2", gen_args.a2, "noise weight toward user 2");
  gen->add_option("--e2", gen_args.e2, "erasure weight toward user 2");
  gen->add_option("--stay1", gen_args.stay1, "memory-additive: chain 1 stay probability");
  gen->add_option("--stay2", gen_args.stay2, "memory-additive: chain 2 stay probability");
  gen->add_option("--name", gen_args.name, "fixture name");
  gen->add_option("-o,--out", gen_args.out, "output JSON path");

  auto* madb = app.add_subcommand("madb", "three-user network commands");
  madb->require_subcommand(1);
  CheckArgs mcheck_args;
  auto* mcheck = madb->add_subcommand("check", "run the three-user condition checkers");
  mcheck->add_option("file", mcheck_args.file, "madb channel JSON file")->required();
  mcheck->add_option("--trials", mcheck_args.trials, "randomized trials");
  mcheck->add_option("--seed", mcheck_args.seed, "master seed");
  mcheck->add_option("--tol", mcheck_args.tol, "information tolerance, bits");
  mcheck->add_flag("--json", mcheck_args.as_json, "emit JSON reports");

  MadbSupportArgs msup_args;
  auto* msup = madb->add_subcommand("support", "weighted-rate support values");
  msup->add_option("file", msup_args.file, "madb channel JSON file")->required();
  msup->add_option("--weights", msup_args.weights, "w13,w23,w31,w32 (repeatable)");
  msup->add_option("--mode", msup_args.mode, "inner | outer | both");
  msup->add_option("--seed", msup_args.seed, "master seed");
  msup->add_option("-o,--out", msup_args.out, "output CSV path");

  MadbGenArgs mgen_args;
  auto* mgen = madb->add_subcommand("gen", "generate a madb channel file");
  mgen->add_option("family", mgen_args.family, "additive | example10 | erasure")
      ->required();
  mgen->add_option("--q", mgen_args.q, "modulus");
  mgen->add_option("--eps", mgen_args.eps, "uplink parameter");
  mgen->add_option("--pz1", mgen_args.pz1, "downlink noise pmf, comma separated");
  mgen->add_option("--pz2", mgen_args.pz2, "downlink noise pmf, comma separated");
  mgen->add_option("--pz3", mgen_args.pz3, "uplink noise pmf (additive family)");
  mgen->add_option("-o,--out", mgen_args.out, "output JSON path");

  MemsimArgs memsim_args;
  auto* memsim = app.add_subcommand("memsim", "adaptive coding demonstrator");
  memsim->add_option("--n", memsim_args.n, "number of channel uses");
  memsim->add_option("--seed", memsim_args.seed, "noise/message seed");

  std::string repro_id;
  auto* repro = app.add_subcommand("repro", "re-run a reference channel end to end");
  repro->add_option("id", repro_id, "reference id, e.g. example4")->required();

  try {
    app.parse(argc, argv);
    if (check->parsed()) return run_check(check_args);
    if (region->parsed()) return run_region(region_args);
    if (gen->parsed()) return run_gen(gen_args);
    if (madb->parsed()) {
      if (mcheck->parsed()) return run_check(mcheck_args);
      if (msup->parsed()) return run_madb_support(msup_args);
      if (mgen->parsed()) return run_madb_gen(mgen_args);
    }
    if (memsim->parsed()) return run_memsim(memsim_args);
    if (repro->parsed()) return run_repro(repro_id);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const TwcError& e) {
    std::fprintf(stderr, "error [%s]: %s\n", error_code_name(e.code()), e.what());
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
