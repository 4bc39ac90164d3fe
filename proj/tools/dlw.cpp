// dlw: derive, evaluate and verify exact solutions of the (2+1)-dimensional
// dispersive long wave equations.
//
// Exit codes: 0 verified, 1 verification failure, 2 input error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlw/balance.hpp"
#include "dlw/residual.hpp"
#include "dlw/scenario.hpp"
#include "dlw/transform.hpp"

namespace {

constexpr int kVerified = 0;
constexpr int kFailed = 1;
constexpr int kInputError = 2;

struct RunFlags {
  std::optional<double> step;
  std::optional<double> threshold;
  std::optional<std::string> branch;
  std::optional<std::string> output;
  std::optional<unsigned> threads;
};

void apply_flags(dlw::Scenario& sc, const RunFlags& f) {
  if (f.step) {
    if (!(*f.step > 0.0)) throw dlw::ScenarioError("--step: must be positive");
    sc.stencil.step = *f.step;
  }
  if (f.threshold) {
    if (!(*f.threshold > 0.0)) throw dlw::ScenarioError("--threshold: must be positive");
    sc.maxResidual = *f.threshold;
  }
  if (f.branch) {
    sc.branch = *f.branch == "minus" ? dlw::Branch::Minus : dlw::Branch::Plus;
    sc.seed.branch = sc.branch;
  }
  if (f.output) sc.outputs.push_back(dlw::ExportSpec{dlw::ExportSpec::Format::Csv, *f.output});
  if (f.threads) sc.threads = *f.threads;
}

// Console summaries only; exports keep 17 significant digits.
std::string brief(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

void print_summary(const dlw::Scenario& sc, const dlw::RunOutcome& out) {
  const auto& r = out.report;
  std::printf("scenario %s (branch %s)\n", sc.name.c_str(), dlw::to_string(sc.branch).c_str());
  std::printf("  grid points %zu, evaluated %zu, skipped %zu\n", r.grid.size(), r.evaluated, r.skipped);
  for (int e = 0; e < 2; ++e) {
    const auto& st = r.equations[e];
    std::printf("  equation %d: maxAbs %s meanAbs %s at (%s, %s, %s)\n", e + 1,
                brief(st.maxAbs).c_str(), brief(st.meanAbs).c_str(),
                brief(st.worst.x).c_str(), brief(st.worst.y).c_str(),
                brief(st.worst.t).c_str());
  }
  std::printf("  threshold %s: %s\n", brief(sc.maxResidual).c_str(), out.passed ? "PASS" : "FAIL");
  if (r.skipped > 0) std::fprintf(stderr, "%s: %zu pole-adjacent points skipped\n", sc.name.c_str(), r.skipped);
}

int run_one(const dlw::Scenario& sc) {
  const dlw::RunOutcome out = dlw::run_scenario(sc);
  print_summary(sc, out);
  for (const auto& spec : sc.outputs) dlw::export_grid(sc, out, spec);
  return out.passed ? kVerified : kFailed;
}

int cmd_derive(const std::optional<std::string>& output) {
  try {
    const dlw::BalanceReport report = dlw::derive();
    std::cout << dlw::render_text(report);
    if (output) {
      std::ofstream f(*output, std::ios::binary | std::ios::trunc);
      if (!f) throw std::runtime_error(*output + ": cannot open for writing");
      f << dlw::render_json(report);
    }
    return kVerified;
  } catch (const dlw::DerivationFailure& e) {
    std::cout << "derivation FAILED: " << e.what() << '\n';
    for (const auto& c : e.checks()) std::cout << dlw::render_text(c);
    return kFailed;
  }
}

struct ReduceArgs {
  double a = 1.0;
  double d = 0.0;
  std::string branch = "plus";
  double step = 5e-3;
  double threshold = 1e-5;
  std::vector<double> z{-10.0, 10.0, 41.0};
  std::vector<double> t{0.0, 1.0, 5.0};
  std::optional<std::string> output;
};

dlw::Axis to_axis(const std::vector<double>& v, const char* name) {
  const dlw::Axis a{v[0], v[1], static_cast<int>(v[2])};
  if (a.count < 1 || static_cast<double>(a.count) != v[2] || !(a.lo <= a.hi)) {
    throw dlw::ScenarioError(std::string(name) + ": expected lo hi count with lo <= hi and integer count >= 1");
  }
  return a;
}

int cmd_reduce(const ReduceArgs& args) {
  const dlw::Branch branch = args.branch == "minus" ? dlw::Branch::Minus : dlw::Branch::Plus;
  const dlw::Axis z = to_axis(args.z, "--z");
  const dlw::Axis t = to_axis(args.t, "--t");
  const dlw::StencilConfig cfg{args.step};
  const dlw::ReducedSampler sampler = [&](double zz, double tt) {
    return dlw::reduce_1plus1(args.a, args.d, branch, zz, tt);
  };

  double invariance = 0.0;
  double res[2] = {0.0, 0.0};
  std::string csv = "z,t,u,h,res1,res2\n";
  for (int it = 0; it < t.count; ++it) {
    for (int iz = 0; iz < z.count; ++iz) {
      const double zz = z.at(iz), tt = t.at(it);
      const dlw::FieldPair base = sampler(zz, tt);
      for (double shift : {-1.0, 1.0, 2.5}) {
        const dlw::FieldPair moved =
            dlw::exact_uh_const(args.a, args.a, args.d, branch, dlw::Point{zz - shift, shift, tt});
        invariance = std::max({invariance, std::abs(moved.u - base.u), std::abs(moved.h - base.h)});
      }
      const dlw::ResidualPair r = dlw::fd_residual_1d(sampler, zz, tt, cfg);
      res[0] = std::max(res[0], std::abs(r.r1));
      res[1] = std::max(res[1], std::abs(r.r2));
      csv += dlw::format_number(zz) + ',' + dlw::format_number(tt) + ',' + dlw::format_number(base.u) + ',' +
             dlw::format_number(base.h) + ',' + dlw::format_number(r.r1) + ',' + dlw::format_number(r.r2) + '\n';
    }
  }
  const bool invariant_ok = invariance <= 1e-14;
  const bool residual_ok = res[0] <= args.threshold && res[1] <= args.threshold;
  std::printf("reduction a = c = %s, d = %s (branch %s)\n", brief(args.a).c_str(),
              brief(args.d).c_str(), args.branch.c_str());
  std::printf("  max deviation along x + y = z: %s (%s)\n", brief(invariance).c_str(),
              invariant_ok ? "PASS" : "FAIL");
  std::printf("  1+1 residuals: maxAbs %s, %s (threshold %s): %s\n", brief(res[0]).c_str(),
              brief(res[1]).c_str(), brief(args.threshold).c_str(),
              residual_ok ? "PASS" : "FAIL");
  if (args.output) {
    std::ofstream f(*args.output, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(*args.output + ": cannot open for writing");
    f << csv;
  }
  return invariant_ok && residual_ok ? kVerified : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solutions of the (2+1)-dimensional dispersive long wave equations"};
  app.require_subcommand(1);

  std::optional<std::string> derive_output;
  auto* derive = app.add_subcommand("derive", "Re-derive the transformation by homogeneous balance (exact)");
  derive->add_option("--output", derive_output, "Write the report as JSON to this path");

  std::string config;
  RunFlags flags;
  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("config", config, "Scenario file (JSON)")->required();
    sub->add_option("--step", flags.step, "Finite-difference step");
    sub->add_option("--threshold", flags.threshold, "Maximum allowed residual");
    sub->add_option("--branch", flags.branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
    sub->add_option("--output", flags.output, "Also write the grid CSV to this path");
    sub->add_option("--threads", flags.threads, "Worker threads for grid evaluation")->check(CLI::PositiveNumber);
  };
  auto* run = app.add_subcommand("run", "Evaluate a scenario on its grid and verify it");
  add_run_flags(run);
  auto* sweep = app.add_subcommand("sweep", "Run every entry of a scenario's sweep list");
  add_run_flags(sweep);

  ReduceArgs rargs;
  auto* reduce = app.add_subcommand("reduce", "Check the (1+1)-dimensional reduction for a = c");
  reduce->add_option("a", rargs.a, "Wave number a (= c)")->required();
  reduce->add_option("d", rargs.d, "Phase constant d")->required();
  reduce->add_option("--branch", rargs.branch, "plus or minus")->check(CLI::IsMember({"plus", "minus"}));
  reduce->add_option("--step", rargs.step, "Finite-difference step")->check(CLI::PositiveNumber);
  reduce->add_option("--threshold", rargs.threshold, "Maximum allowed residual")->check(CLI::PositiveNumber);
  reduce->add_option("--z", rargs.z, "z range: lo hi count")->expected(3);
  reduce->add_option("--t", rargs.t, "t range: lo hi count")->expected(3);
  reduce->add_option("--output", rargs.output, "Write z,t,u,h,res1,res2 CSV to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }

  try {
    if (*derive) return cmd_derive(derive_output);
    if (*reduce) return cmd_reduce(rargs);
    if (*run) {
      dlw::Scenario sc = dlw::load_scenario(config);
      apply_flags(sc, flags);
      return run_one(sc);
    }
    if (*sweep) {
      int worst = kVerified;
      for (dlw::Scenario sc : dlw::load_sweep(config)) {
        apply_flags(sc, flags);
        worst = std::max(worst, run_one(sc));
      }
      return worst;
    }
  } catch (const dlw::ScenarioError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const dlw::ExprParseError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kInputError;
  }
  return kInputError;
}
