// qpe: reproduce the measurement-complexity tables and figure datasets of
// Kitaev-style phase estimation, and run seeded validation simulations.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "qpe/simulator.hpp"
#include "qpe/tables.hpp"

namespace {

using namespace qpe;

int g_exit = 0;

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open output file " + out_path);
  f << text;
}

PiRational parse_angle_or_die(const std::string& s) {
  auto a = parse_pi_angle(s);
  if (!a) throw CLI::ValidationError("angle", "expected a rational multiple of pi, e.g. 7/16pi");
  return *a;
}

std::string describe_report(const ReproductionReport& rep) {
  std::string out = rep.table + ": " + std::to_string(rep.cells - rep.mismatches - rep.warnings) +
                    "/" + std::to_string(rep.cells) + " cells match";
  if (rep.warnings) out += ", " + std::to_string(rep.warnings) + " tolerated (lenient)";
  if (rep.mismatches) out += ", " + std::to_string(rep.mismatches) + " MISMATCH";
  out += "\n";
  for (const auto& d : rep.diffs)
    out += "  " + d.row + " @ " + d.col + ": computed " + d.computed + " vs paper " + d.golden +
           (d.lenient_class ? "  [lenient row]" : "") + "\n";
  for (const auto& b : rep.borderline) out += "  borderline margin < 1e-9: " + b + "\n";
  return out;
}

void cmd_table(int id, const std::string& fmt, const std::string& out_path, int bits, int jobs,
               bool strict, const std::string& golden_dir, const std::vector<std::string>& rows,
               bool no_compare) {
  PrecisionContext ctx(bits);
  std::vector<int> ids = id == 4 ? std::vector<int>{41, 42} : std::vector<int>{id};
  std::string rendered;
  for (int tid : ids) {
    Table t = generate_table(tid, ctx, jobs, rows);
    rendered += fmt == "md" ? table_to_markdown(t) : table_to_csv(t);
    if (!no_compare) {
      Table golden = load_golden_table(tid, golden_dir);
      auto rep = compare_tables(t, golden, strict);
      std::cerr << describe_report(rep);
      if (!rep.ok()) g_exit = 1;
    }
  }
  emit(rendered, out_path);
}

void cmd_curve_box(long n, const std::string& delta_str, long resolution,
                   const std::string& out_path, int bits) {
  PrecisionContext ctx(bits);
  Real delta(parse_rational(delta_str), ctx);
  std::string csv = "p,error,side\n";
  auto bps = box_breakpoints(n, delta);
  std::vector<std::pair<Real, std::string>> pts;
  for (long g = 0; g <= resolution; ++g)
    pts.emplace_back(Real(Rational(g, resolution), ctx), "point");
  for (const auto& b : bps) {
    pts.emplace_back(b, "below");
    pts.emplace_back(b, "above");
  }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });
  const Real tiny = Real::pow2(-(bits * 3 / 4), ctx);
  for (const auto& [p, side] : pts) {
    Real q = p;
    if (side == "below") q = q - tiny;
    if (side == "above") q = q + tiny;
    if (q.sign() < 0 || q.cmp(1L) > 0) continue;
    Real err = Real(1, ctx) - success_prob_1d(box_success_set(n, delta, q), p);
    csv += p.to_string(17) + "," + err.to_string(17) + "," + side + "\n";
  }
  emit(csv, out_path);
}

void cmd_curve_wedge(long n, const std::string& eta_str, long resolution,
                     const std::string& out_path, int bits) {
  PrecisionContext ctx(bits);
  WedgeGeometry geom(n, parse_angle_or_die(eta_str));
  std::string csv = "alpha,error,side\n";
  const Real two_pi = Real::pi(ctx) * 2L;
  const Real tiny = Real::pow2(-(bits * 3 / 4), ctx);
  // grid points plus both one-sided limits at each critical angle
  std::vector<std::pair<Real, std::string>> pts;
  for (long g = 0; g < resolution; ++g)
    pts.emplace_back(two_pi * g / resolution, "point");
  const Real eta = geom.eta.radians(ctx);
  for (long i = 0; i <= n; ++i)
    for (long j = 0; j <= n; ++j) {
      const long dx = 2 * i - n, dy = 2 * j - n;
      if (dx == 0 && dy == 0) continue;
      Real psi = atan2(Real(dy, ctx), Real(dx, ctx));
      if (psi.sign() < 0) psi += two_pi;
      for (int s : {-1, 1}) {
        Real a = s < 0 ? psi - eta : psi + eta;
        if (a.sign() < 0) a += two_pi;
        if (a >= two_pi) a -= two_pi;
        pts.emplace_back(a, "below");
        pts.emplace_back(a, "above");
      }
    }
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.first < b.first || (a.first == b.first && a.second < b.second);
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) {
                          return a.first == b.first && a.second == b.second;
                        }),
            pts.end());
  for (const auto& [a, side] : pts) {
    Real q = a;
    if (side == "below") q = q - tiny;
    if (side == "above") q = q + tiny;
    Real err = Real(1, ctx) - success_prob_2d(wedge_success_set(geom, q),
                                              p_from_angle(a, Component::kCos),
                                              p_from_angle(a, Component::kSin));
    csv += a.to_string(17) + "," + err.to_string(17) + "," + side + "\n";
  }
  emit(csv, out_path);
}

void cmd_curve_majority(const std::vector<long>& ns, long resolution, const std::string& out_path,
                        int bits) {
  PrecisionContext ctx(bits);
  std::string csv = "n,alpha,error,error_scaled\n";
  const Real half_pi = Real::pi(ctx) / 2L;
  for (long n : ns) {
    for (long g = 0; g <= resolution; ++g) {
      Real a = half_pi * g / resolution;
      Real err = majority_error(n, a, MajoritySetKind::kReduced);
      Real scaled = err * Real::pow2(n, ctx);
      csv += std::to_string(n) + "," + a.to_string(17) + "," + err.to_string(17) + "," +
             scaled.to_string(17) + "\n";
    }
  }
  emit(csv, out_path);
}

void cmd_simulate(long m, const std::string& eps_str, const std::string& algorithm,
                  const std::string& first_stage, long trials, std::uint64_t seed,
                  const std::string& out_path, const std::string& jsonl_path,
                  const std::vector<double>& phis, int bits) {
  PrecisionContext ctx(bits);
  SimulationConfig cfg;
  cfg.m = m;
  cfg.eps = parse_rational(eps_str);
  cfg.algorithm = algorithm == "classic" ? Algorithm::kClassic : Algorithm::kImproved;
  cfg.first_stage = first_stage == "majority" ? FirstStage::kMajority : FirstStage::kTripleSign;
  cfg.trials = trials;
  cfg.seed = seed;
  cfg.fixed_phis = phis;

  std::vector<Transcript> transcripts;
  TrialStats stats = success_rate(cfg, ctx, jsonl_path.empty() ? nullptr : &transcripts);
  if (!jsonl_path.empty()) {
    std::ofstream f(jsonl_path, std::ios::binary);
    for (const auto& t : transcripts) f << t.to_jsonl() << "\n";
  }
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "algorithm=%s first_stage=%s m=%ld eps=%s trials=%ld seed=%llu\n"
                "successes=%ld failures=%ld failure_rate=%.6g\n"
                "threshold=2^-%ld  99%% CI on failure rate: [%.6g, %.6g]\n",
                algorithm.c_str(), first_stage.c_str(), m, eps_str.c_str(), stats.trials,
                static_cast<unsigned long long>(seed), stats.successes,
                stats.trials - stats.successes, stats.failure_rate, m + 2, stats.ci_low,
                stats.ci_high);
  emit(buf, out_path);
  if (stats.ci_high > cfg.eps.get_d()) {
    std::cerr << "FAIL: 99% upper confidence bound " << stats.ci_high << " exceeds eps "
              << cfg.eps.get_d() << "\n";
    g_exit = 1;
  }
}

void print_min_n(const MinSearchResult& res, const SchemeResult& at, const std::string& witness_kind) {
  std::cout << "min_n=" << res.n << "\n";
  std::cout << "worst_error=" << at.worst_error.to_string(20) << "\n";
  std::cout << witness_kind << "=" << at.witness.to_string(20) << " side="
            << (at.side == LimitSide::kBelow ? "below"
                : at.side == LimitSide::kAbove ? "above"
                                               : "interior")
            << "\n";
  std::cout << "rel_margin=" << res.rel_margin << "\n";
  if (!at.convexity_verified) std::cout << "flag=unverified-convexity\n";
  if (res.unstable_above.empty()) {
    std::cout << "stability: no failing n in window +16\n";
  } else {
    std::cout << "stability: failing n in window:";
    for (long u : res.unstable_above) std::cout << " " << u;
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement-complexity analysis for Kitaev-style phase estimation"};
  app.require_subcommand(1);
  int bits = PrecisionContext::kDefaultBits;
  app.add_option("--precision-bits", bits, "significand bits for all Real arithmetic")
      ->capture_default_str();

  // table
  auto* table = app.add_subcommand("table", "regenerate a paper table and diff against golden");
  int table_id = 1;
  std::string fmt = "csv", out_path, golden_dir = default_data_dir();
  int jobs = max_parallel_jobs();
  bool strict = true, lenient = false, no_compare = false;
  std::vector<std::string> row_filter;
  table->add_option("id", table_id, "table number (1-4)")->required()->check(CLI::Range(1, 4));
  table->add_option("--format", fmt)->check(CLI::IsMember({"csv", "md"}));
  table->add_option("--out", out_path, "output path (default stdout)");
  table->add_option("--jobs", jobs, "parallel workers over cells")->capture_default_str();
  table->add_option("--golden-dir", golden_dir)->capture_default_str();
  table->add_option("--rows", row_filter, "restrict to named rows (table 2)")->delimiter(',');
  table->add_flag("--strict", strict, "fail on any mismatch (default)");
  table->add_flag("--lenient", lenient, "tolerate <=2-sample diffs in wedge/k-bit rows");
  table->add_flag("--no-compare", no_compare, "emit only, skip the golden diff");

  // curve
  auto* curve = app.add_subcommand("curve", "emit error-curve datasets (figures)");
  curve->require_subcommand(1);
  long cn = 8, resolution = 1024;
  std::string delta_str = "0.3", eta_str = "pi/4", curve_out;
  std::vector<long> n_list = {1, 2, 3, 5, 10, 25};
  auto* cbox = curve->add_subcommand("box", "cosine-component box error vs p");
  cbox->add_option("--n", cn)->required();
  cbox->add_option("--delta", delta_str)->required();
  cbox->add_option("--resolution", resolution)->capture_default_str();
  cbox->add_option("--out", curve_out);
  auto* cwedge = curve->add_subcommand("wedge", "wedge error vs angle");
  cwedge->add_option("--n", cn)->required();
  cwedge->add_option("--eta", eta_str)->required();
  cwedge->add_option("--resolution", resolution)->capture_default_str();
  cwedge->add_option("--out", curve_out);
  auto* cmaj = curve->add_subcommand("majority", "majority error (and 2^n-scaled) vs angle");
  cmaj->add_option("--n-list", n_list)->delimiter(',');
  cmaj->add_option("--resolution", resolution)->capture_default_str();
  cmaj->add_option("--out", curve_out);

  // simulate
  auto* sim = app.add_subcommand("simulate", "seeded Monte-Carlo validation runs");
  long sm = 4, trials = 10000;
  std::string eps_str = "1e-1", algorithm = "improved", first_stage = "triple-sign";
  std::uint64_t seed = 1;
  std::string sim_out, jsonl_path;
  std::vector<double> fixed_phis;
  sim->add_option("--m", sm)->capture_default_str();
  sim->add_option("--eps", eps_str)->capture_default_str();
  sim->add_option("--algorithm", algorithm)->check(CLI::IsMember({"classic", "improved"}));
  sim->add_option("--first-stage", first_stage)
      ->check(CLI::IsMember({"triple-sign", "majority"}));
  sim->add_option("--trials", trials)->capture_default_str();
  sim->add_option("--seed", seed)->capture_default_str();
  sim->add_option("--out", sim_out);
  sim->add_option("--jsonl", jsonl_path, "dump one transcript object per trial");
  sim->add_option("--phi", fixed_phis, "fixed phase list (turns); default uniform random")
      ->delimiter(',');

  // min-n
  auto* minn = app.add_subcommand("min-n", "minimal sample count searches");
  minn->require_subcommand(1);
  std::string angle_str = "pi/4", eps_bar_str = "1e-1";
  auto* msign = minn->add_subcommand("sign", "smallest odd n for sign determination");
  msign->add_option("--alpha", angle_str)->required();
  msign->add_option("--eps", eps_bar_str)->required();
  auto* mbox = minn->add_subcommand("box", "smallest n for the box scheme");
  mbox->add_option("--delta", delta_str)->required();
  mbox->add_option("--eps", eps_bar_str)->required();
  auto* mwedge = minn->add_subcommand("wedge", "smallest n for the wedge scheme");
  mwedge->add_option("--eta", eta_str)->required();
  mwedge->add_option("--eps", eps_bar_str)->required();
  auto* mmaj = minn->add_subcommand("majority", "Theorem bound 2/2^n <= eps");
  mmaj->add_option("--eps", eps_bar_str)->required();

  // plan
  auto* plan = app.add_subcommand("plan", "print an iteration plan");
  long pm = 5;
  std::string peps = "1e-3", pstage = "triple-sign";
  plan->add_option("--m", pm)->capture_default_str();
  plan->add_option("--eps", peps)->capture_default_str();
  plan->add_option("--first-stage", pstage)->check(CLI::IsMember({"triple-sign", "majority"}));

  CLI11_PARSE(app, argc, argv);

  try {
    PrecisionContext ctx(bits);
    if (*table) cmd_table(table_id, fmt, out_path, bits, jobs, strict && !lenient, golden_dir,
                          row_filter, no_compare);
    if (*cbox) cmd_curve_box(cn, delta_str, resolution, curve_out, bits);
    if (*cwedge) cmd_curve_wedge(cn, eta_str, resolution, curve_out, bits);
    if (*cmaj) cmd_curve_majority(n_list, resolution, curve_out, bits);
    if (*sim) cmd_simulate(sm, eps_str, algorithm, first_stage, trials, seed, sim_out, jsonl_path,
                           fixed_phis, bits);
    if (*msign) {
      auto res = sign_min_n(parse_angle_or_die(angle_str), parse_rational(eps_bar_str), ctx, true);
      Real err = sign_error(res.n, parse_angle_or_die(angle_str), ctx);
      SchemeResult at(res.n, err, parse_angle_or_die(angle_str).radians(ctx));
      print_min_n(res, at, "witness_alpha");
    }
    if (*mbox) {
      Real delta(parse_rational(delta_str), ctx);
      auto res = box_min_n(delta, parse_rational(eps_bar_str), ctx, true);
      print_min_n(res, box_worst_error(res.n, delta, ctx), "witness_p");
    }
    if (*mwedge) {
      auto eta = parse_angle_or_die(eta_str);
      auto res = wedge_min_n(eta, parse_rational(eps_bar_str), ctx, true);
      print_min_n(res, wedge_worst_error(WedgeGeometry(res.n, eta), ctx), "witness_alpha");
    }
    if (*mmaj) {
      std::cout << "min_n=" << majority_bound_n(parse_rational(eps_bar_str)) << "\n";
    }
    if (*plan) {
      auto fs = pstage == "majority" ? FirstStage::kMajority : FirstStage::kTripleSign;
      PlanRow row = simulation_plan(parse_rational(peps), pm, fs, ctx);
      std::cout << "k_eps=" << row.k_eps << " total=" << row.total << "\n";
      for (const auto& s : row.steps)
        std::cout << "  k=" << s.iteration << " " << s.role << " angle=" << s.angle.to_string()
                  << " budget=" << rational_to_string(s.budget) << " count=" << s.count << "x"
                  << s.repeats << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_exit;
}
