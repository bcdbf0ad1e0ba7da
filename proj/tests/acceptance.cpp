// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "coalition/config.hpp"
#include "coalition/deterministic.hpp"
#include "coalition/experiments.hpp"
#include "coalition/stochastic.hpp"
#include "oracles.hpp"

using namespace coalition;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = s < budget_s;
  if (!in_time) o.detail += "; over the " + std::to_string(static_cast<int>(budget_s)) + " s budget";
  const bool ok = o.pass && in_time;
  failures += !ok;
  std::printf("%s  [%2d] %-34s %8.2f s  %s\n", ok ? "PASS" : "FAIL", id, name, s, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentConfig config(const std::string& text, const fs::path& out) {
  std::istringstream in(text);
  auto cfg = parse_config(in);
  cfg.out_dir = out;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double gap_to_marginal_return(const GameParams& p, const PopulationState& s) {
  const auto sh = effective_shares(p, group_size(p, s.i_M()));
  return mean_return(p, s) * sh.total();
}

}  // namespace

int main() {
  const fs::path scratch = fs::temp_directory_path() / ("coalition_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(scratch);
  fs::create_directories(scratch);

  criterion(1, "single-coalition collapse", 5, [] {
    double worst = 0.0;
    int states = 0;
    for (int Z : {20, 60})
      for (auto benefit : {BenefitFunction::sigmoid(), BenefitFunction::linear(1.0)}) {
        auto p = GameParams::figure2(Z, 1.0);
        p.benefit = benefit;
        const FitnessTable table(p);
        for (int c = 1; c < Z; ++c)
          for (int d = 1; c + d < Z; ++d) {
            const auto& f = table.at(c, d);
            worst = std::max(worst, std::abs(f.f_C - f.f_D + p.c));
            ++states;
          }
      }
    return Outcome{worst < 1e-12, std::to_string(states) + " states, max |f_C - f_D + c| = " + fmt("%.2e", worst)};
  });

  criterion(2, "K cancellation at alpha = 1", 30, [] {
    double worst = 0.0;
    int states = 0;
    for (int Z : {20, 60}) {
      const auto p = GameParams::figure2(Z, 1.0);
      const FitnessTable table(p);
      for (int c = 1; c < Z; ++c)
        for (int d = 1; c + d < Z; ++d) {
          const PopulationState s(c, d, Z);
          worst = std::max(worst, std::abs(k_exact(p, table, s)->K_exact - gap_to_marginal_return(p, s)));
          ++states;
        }
    }
    return Outcome{worst < 1e-10, std::to_string(states) + " states, max |K - <R>eps| = " + fmt("%.2e", worst)};
  });

  criterion(3, "identity closure", 120, [] {
    double worst = 0.0;
    int states = 0;
    for (double alpha : {1.0, 2.0, 4.0}) {
      const auto p = GameParams::figure2(60, alpha);
      const FitnessTable table(p);
      for (int c = 1; c < 60; ++c)
        for (int d = 1; c + d < 60; ++d) {
          const PopulationState s(c, d, 60);
          const double x = s.x();
          const double closed = x * (1 - x) * p.c * (gap_to_marginal_return(p, s) - 1 - k_exact(p, table, s)->K_exact);
          worst = std::max(worst, std::abs(replicator_field(table.at(c, d), s).x_dot - closed));
          ++states;
        }
    }
    return Outcome{worst < 1e-10, std::to_string(states) + " states, max residual = " + fmt("%.2e", worst)};
  });

  criterion(4, "hypergeometric oracle", 30, [] {
    double pmf_err = 0.0;
    long cases = 0;
    for (int z = 0; z <= 12; ++z)
      for (int n = 0; n <= z; ++n)
        for (int i = 0; i <= z; ++i)
          for (int k = 0; k <= n; ++k) {
            pmf_err = std::max(pmf_err, std::abs(hypergeom_pmf({z, n, i}, k) - oracle::subset_pmf(z, n, i, k)));
            ++cases;
          }
    double fit_err = 0.0;
    for (double alpha : {1.0, 2.0, 4.0})
      for (auto benefit : {BenefitFunction::sigmoid(), BenefitFunction::linear(3.0)}) {
        auto p = GameParams::figure2(12, alpha);
        p.benefit = benefit;
        for (int c = 0; c <= 12; ++c)
          for (int d = 0; c + d <= 12; ++d) {
            const auto f = fitness_at(p, c, d);
            const auto g = oracle::subset_fitness(p, c, d);
            fit_err = std::max({fit_err, std::abs(f.f_C - g.f_C), std::abs(f.f_D - g.f_D), std::abs(f.f_O - g.f_O)});
          }
      }
    return Outcome{pmf_err < 1e-12 && fit_err < 1e-10,
                   std::to_string(cases) + " pmf cases, max err " + fmt("%.2e", pmf_err) + "; fitness max err " +
                       fmt("%.2e", fit_err)};
  });

  criterion(5, "stationary correctness", 600, [] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto model = build_chain(GameParams::figure2(100, 4.0));
    const auto r = stationary(model);
    const double check = residual(model, r.pi);
    const double solve_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = check < 1e-10 && model.size() == 5151;
    std::string detail = "Z=100 residual " + fmt("%.2e", check) + " in " + fmt("%.1f", solve_s) + " s";
    if (solve_s >= 60) detail += " (over the 60 s target)";

    const auto small = GameParams::figure2(20, 4.0);
    const auto exact = stationary(build_chain(small));
    detail += "; Z=20 TV";
    for (std::uint64_t seed : {101u, 202u, 303u}) {
      const auto mc = monte_carlo(small, 10'000'000, seed);
      const double tv = total_variation(exact.pi, mc.occupancy);
      ok = ok && tv < 0.05;
      detail += " " + fmt("%.4f", tv);
    }
    return Outcome{ok, detail + " (seeds 101 202 303, scaled mutation)"};
  });

  // Criteria 6 and 10 share the figure sweep.
  const auto sweep_cfg = "experiment = figure2\nZ = 100\nvalues = 1, 2, 4, 8\nformats = csv, json\n";
  RunReport first;
  criterion(6, "coalition figure sweep", 600, [&] {
    first = run_experiment(config(sweep_cfg, scratch / "sweep_a"));
    const auto& panels = first.summary["panels"];
    const double x1 = panels[0]["mean_x"], x8 = panels[3]["mean_x"];
    const double y1 = panels[0]["mean_y"], y8 = panels[3]["mean_y"];
    std::string detail = "mean_x";
    for (const auto& p : panels) detail += " " + fmt("%.4f", p["mean_x"].get<double>());
    detail += "; mean_y";
    for (const auto& p : panels) detail += " " + fmt("%.4f", p["mean_y"].get<double>());
    detail += "; dx(8-1) = " + fmt("%.4f", x8 - x1) + " (needs > 0.1)";
    return Outcome{x8 > x1 && y8 > y1 && x8 - x1 > 0.1, detail};
  });

  criterion(7, "spiral-to-sink transition", 600, [] {
    struct Row {
      double alpha;
      std::optional<FixedPoint> fp;
    };
    std::vector<Row> rows;
    for (double alpha : {1.5, 2.0, 3.0, 4.0, 6.0, 8.0}) {
      // The high-participation point: highest membership among non-saddles.
      std::optional<FixedPoint> pick;
      for (const auto& f : find_fixed_points(GameParams::figure2(100, alpha), 40))
        if (f.kind != FixedPointKind::saddle && (!pick || f.y > pick->y)) pick = f;
      rows.push_back({alpha, pick});
    }
    auto complex_at = [](const Row& r) { return r.fp && r.fp->eigenvalues[0].imag() != 0.0; };
    auto sink_at = [](const Row& r) {
      return r.fp && r.fp->eigenvalues[0].imag() == 0.0 && r.fp->eigenvalues[0].real() < 0 &&
             r.fp->eigenvalues[1].real() < 0;
    };
    std::optional<double> crossover;
    for (std::size_t j = 0; j < rows.size() && !crossover; ++j)
      for (std::size_t i = 0; i < j; ++i)
        if (complex_at(rows[i]) && sink_at(rows[j])) crossover = rows[j].alpha;
    std::string detail;
    for (const auto& r : rows) {
      detail += fmt("a=%g:", r.alpha);
      detail += r.fp ? std::string(to_string(r.fp->kind)) + fmt("(%.3f", r.fp->eigenvalues[0].real()) +
                           fmt("%+.3fi) ", r.fp->eigenvalues[0].imag())
                     : "none ";
    }
    detail += crossover ? fmt("crossover alpha = %g", *crossover) : "no real-eigenvalue sink found";
    return Outcome{crossover.has_value(), detail};
  });

  criterion(8, "small-beta replicator agreement", 120, [] {
    double worst = 1.0, worst_global = 1.0;
    int states = 0;
    for (double alpha : {1.0, 4.0, 8.0}) {
      auto p = GameParams::figure2(100, alpha);
      p.mu = 0.0;
      const auto grad = selection_gradient(build_chain(p));
      const FitnessTable table(p);
      double dot = 0, na = 0, nb = 0;
      for (const auto& g : grad) {
        const int o = p.Z - g.i_C - g.i_D;
        if (std::min({g.i_C, g.i_D, o}) < 5) continue;
        const PopulationState s(g.i_C, g.i_D, p.Z);
        const auto v = replicator_field(table.at(g.i_C, g.i_D), s);
        const double x = s.x(), y = s.y();
        // (x', y') mapped to composition changes.
        const double a = x * v.y_dot + y * v.x_dot;
        const double b = (1 - x) * v.y_dot - y * v.x_dot;
        const double d = a * g.d_iC + b * g.d_iD;
        const double n1 = std::hypot(a, b), n2 = std::hypot(g.d_iC, g.d_iD);
        if (n1 > 0 && n2 > 0) worst = std::min(worst, d / (n1 * n2));
        dot += d, na += n1 * n1, nb += n2 * n2;
        ++states;
      }
      worst_global = std::min(worst_global, dot / std::sqrt(na * nb));
    }
    return Outcome{worst > 0.99, std::to_string(states) + " states (alpha 1, 4, 8): min per-state cosine " +
                                     fmt("%.5f", worst) + ", min field cosine " + fmt("%.5f", worst_global)};
  });

  criterion(9, "information gap over alpha", 120, [&] {
    const auto report = run_experiment(
        config("experiment = s1-compare\nvalues = 1, 2, 4, 8\ns1_Z = 60, 100\ns1_group_size = 20\nformats = csv, json\n",
               scratch / "s1"));
    std::map<int, std::vector<double>> gaps;
    std::string detail;
    for (const auto& sl : report.summary["slices"]) {
      gaps[sl["Z"].get<int>()].push_back(sl["max_gap"].get<double>());
    }
    bool ok = gaps.size() == 2;
    std::vector<std::vector<std::size_t>> orders;
    for (const auto& [Z, g] : gaps) {
      detail += "Z=" + std::to_string(Z) + ":";
      for (std::size_t i = 0; i < g.size(); ++i) {
        detail += " " + fmt("%.4f", g[i]);
        if (i > 0) ok = ok && g[i] < g[i - 1];
      }
      detail += "; ";
      std::vector<std::size_t> order(g.size());
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return g[a] > g[b]; });
      orders.push_back(order);
    }
    ok = ok && orders.size() == 2 && orders[0] == orders[1];
    detail += "matched group size 20";
    return Outcome{ok, detail};
  });

  criterion(10, "determinism", 600, [&] {
    if (first.files.empty()) return Outcome{false, "the criterion 6 sweep did not run"};
    const auto second = run_experiment(config(sweep_cfg, scratch / "sweep_b"));
    int compared = 0, differing = 0;
    for (const auto& f : first.files) {
      if (f.extension() != ".csv" && f.extension() != ".json") continue;
      ++compared;
      differing += slurp(scratch / "sweep_a" / f) != slurp(scratch / "sweep_b" / f);
    }
    return Outcome{differing == 0 && compared > 0 && second.files == first.files,
                   std::to_string(compared) + " csv/json files, " + std::to_string(differing) + " differ"};
  });

  fs::remove_all(scratch);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
