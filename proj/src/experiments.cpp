#include "coalition/experiments.hpp"

#include <cmath>
#include <fstream>
#include <optional>

#include "coalition/csv.hpp"
#include "coalition/deterministic.hpp"
#include "coalition/errors.hpp"
#include "coalition/informed.hpp"
#include "coalition/parallel.hpp"
#include "coalition/stochastic.hpp"
#include "coalition/svg.hpp"

namespace coalition {

using Json = nlohmann::ordered_json;

namespace {

class Sink {
 public:
  Sink(const ExperimentConfig& cfg, RunReport& report) : cfg_(cfg), report_(report) {
    std::filesystem::create_directories(cfg.out_dir);
  }

  template <class Body>
  void write(const std::string& name, Body&& body) {
    const auto path = cfg_.out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    body(out);
    out.close();
    if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
    report_.files.push_back(name);
  }

  bool csv() const { return cfg_.wants("csv"); }
  bool svg() const { return cfg_.wants("svg"); }

 private:
  const ExperimentConfig& cfg_;
  RunReport& report_;
};

struct Panel {
  double alpha = 0.0;
  GameParams params;
  StationaryResult result;
  std::vector<GradientPoint> gradient;
  std::vector<FixedPoint> fixed_points;
};

Panel solve_panel(const ExperimentConfig& cfg, const GameParams& params, bool with_fixed_points) {
  Panel panel;
  panel.alpha = params.alpha;
  panel.params = params;
  const auto model = build_chain(params, cfg.chain);
  panel.result = stationary(model, cfg.solver);
  panel.gradient = selection_gradient(model);
  if (with_fixed_points) panel.fixed_points = find_fixed_points(params, cfg.grid_resolution);
  return panel;
}

double low_membership_mass(const StateIndex& index, std::span<const double> pi) {
  double mass = 0.0;
  for (std::size_t k = 0; k < index.size(); ++k)
    if (index.state(k).y() <= 0.2) mass += pi[k];
  return mass;
}

Json stats(const Panel& panel) {
  const auto& s = panel.result.summary;
  const StateIndex index(panel.params.Z);
  Json j;
  j["alpha"] = panel.alpha;
  j["mean_x"] = s.mean_x;
  j["sd_x"] = s.sd_x;
  j["mean_y"] = s.mean_y;
  j["sd_y"] = s.sd_y;
  j["member_mass"] = s.member_mass;
  j["mass_y_le_0.2"] = low_membership_mass(index, panel.result.pi);
  j["residual"] = panel.result.residual;
  j["iterations"] = panel.result.iterations;
  return j;
}

Json fixed_points_json(std::span<const FixedPoint> points) {
  Json list = Json::array();
  for (const auto& f : points) {
    Json j;
    j["x"] = f.x;
    j["y"] = f.y;
    j["kind"] = to_string(f.kind);
    j["eigenvalues"] = {{f.eigenvalues[0].real(), f.eigenvalues[0].imag()},
                        {f.eigenvalues[1].real(), f.eigenvalues[1].imag()}};
    j["residual"] = f.residual;
    list.push_back(j);
  }
  return list;
}

void write_fixed_points_csv(std::ostream& out, std::span<const FixedPoint> points) {
  csv::Writer w(out, {"x", "y", "kind", "re_1", "im_1", "re_2", "im_2", "residual"});
  for (const auto& f : points) {
    w << f.x << f.y << to_string(f.kind) << f.eigenvalues[0].real() << f.eigenvalues[0].imag()
      << f.eigenvalues[1].real() << f.eigenvalues[1].imag() << f.residual;
    w.end_row();
  }
}

void write_panel(Sink& sink, const Panel& panel, const std::string& suffix) {
  const StateIndex index(panel.params.Z);
  if (sink.csv()) {
    sink.write("stationary" + suffix + ".csv", [&](std::ostream& o) { write_stationary_csv(o, index, panel.result.pi); });
    sink.write("gradient" + suffix + ".csv", [&](std::ostream& o) { write_gradient_csv(o, panel.gradient); });
    if (!panel.fixed_points.empty())
      sink.write("fixed_points" + suffix + ".csv", [&](std::ostream& o) { write_fixed_points_csv(o, panel.fixed_points); });
  }
  if (sink.svg()) {
    std::vector<svg::Arrow> arrows;
    for (const auto& g : panel.gradient) arrows.push_back({g.i_C, g.i_D, g.d_iC, g.d_iD});
    sink.write("stationary" + suffix + ".svg", [&](std::ostream& o) {
      svg::write_simplex(o, index, panel.result.pi, arrows, "stationary distribution, alpha = " + alpha_label(panel.alpha));
    });
  }
}

std::vector<double> require_values(const ExperimentConfig& cfg) {
  if (cfg.values.empty()) throw ConfigError("invalid value for key 'values': '' (this experiment needs alpha values)");
  return cfg.values;
}

void write_summary(const ExperimentConfig& cfg, Sink& sink, const Json& summary) {
  if (!cfg.wants("json")) return;
  sink.write("summary.json", [&](std::ostream& o) { o << summary.dump(2) << '\n'; });
}

// ---------------------------------------------------------------------------

Json run_field(const ExperimentConfig& cfg, Sink& sink) {
  const auto& p = cfg.params;
  const FitnessTable table(p);
  const auto flow = flow_field(p, table);
  const ContinuousField field(p);
  const auto points = find_fixed_points(field, cfg.grid_resolution);
  if (sink.csv()) {
    sink.write("flow.csv", [&](std::ostream& o) { write_flow_csv(o, flow); });
    sink.write("fixed_points.csv", [&](std::ostream& o) { write_fixed_points_csv(o, points); });
  }
  if (sink.svg()) {
    const StateIndex index(p.Z);
    std::vector<double> heat(index.size(), 0.0);
    std::vector<svg::Arrow> arrows;
    for (const auto& f : flow) {
      heat[index(f.i_C, f.i_D)] = std::hypot(f.x_dot, f.y_dot);
      const double d_iC = p.Z * (f.x_dot * f.y + f.x * f.y_dot);
      const double d_iD = p.Z * ((1 - f.x) * f.y_dot - f.x_dot * f.y);
      arrows.push_back({f.i_C, f.i_D, d_iC, d_iD});
    }
    sink.write("field.svg", [&](std::ostream& o) {
      svg::write_simplex(o, index, heat, arrows, "replicator field, alpha = " + alpha_label(p.alpha));
    });
  }
  Json s;
  s["experiment"] = "field";
  s["alpha"] = p.alpha;
  s["interior_states"] = flow.size();
  s["fixed_points"] = fixed_points_json(points);
  return s;
}

Json run_stationary(const ExperimentConfig& cfg, Sink& sink) {
  const auto panel = solve_panel(cfg, cfg.params, false);
  write_panel(sink, panel, "");
  Json s;
  s["experiment"] = "stationary";
  s["Z"] = cfg.params.Z;
  s["mutation_form"] = to_string(cfg.chain.mutation_form);
  const Json st = stats(panel);
  for (const auto& [k, v] : st.items()) s[k] = v;
  return s;
}

Json run_sweep(const ExperimentConfig& cfg, Sink& sink, bool figure) {
  const auto alphas = require_values(cfg);
  std::vector<Panel> panels(alphas.size());
  // Panels are independent; each is written only after all have finished.
  parallel_for(alphas.size(), [&](std::size_t i) {
    GameParams p = cfg.params;
    if (figure) {
      p = GameParams::figure2(cfg.params.Z, alphas[i]);
      p.theta = cfg.params.theta;
      p.theta_prime = cfg.params.theta_prime;
    }
    p.alpha = alphas[i];
    panels[i] = solve_panel(cfg, p, figure);
  });
  Json list = Json::array();
  for (const auto& panel : panels) {
    write_panel(sink, panel, "_alpha" + alpha_label(panel.alpha));
    Json j = stats(panel);
    if (figure) j["fixed_points"] = fixed_points_json(panel.fixed_points);
    list.push_back(j);
  }
  if (sink.csv())
    sink.write("sweep.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"alpha", "mean_x", "sd_x", "mean_y", "sd_y", "member_mass", "residual", "iterations"});
      for (const auto& panel : panels) {
        const auto& s = panel.result.summary;
        w << panel.alpha << s.mean_x << s.sd_x << s.mean_y << s.sd_y << s.member_mass << panel.result.residual
          << static_cast<long long>(panel.result.iterations);
        w.end_row();
      }
    });
  Json s;
  s["experiment"] = figure ? "figure2" : "sweep-alpha";
  s["Z"] = cfg.params.Z;
  s["mutation_form"] = to_string(cfg.chain.mutation_form);
  s["panels"] = list;
  return s;
}

Json run_informed_map(const ExperimentConfig& cfg, Sink& sink) {
  const auto& p = cfg.params;
  const StateIndex index(p.Z);
  std::vector<std::optional<InformedField>> informed(index.size());
  std::vector<FieldVector> uninformed(index.size());
  parallel_for(index.size(), [&](std::size_t k) {
    const auto s = index.state(k);
    if (!s.interior()) return;
    informed[k] = informed_field(p, s);
    uninformed[k] = replicator_field(p, s);
  });
  int flips = 0, interior = 0;
  for (std::size_t k = 0; k < index.size(); ++k)
    if (informed[k]) {
      ++interior;
      flips += (informed[k]->x_dot > 0) != (uninformed[k].x_dot > 0);
    }

  int label_A = 0, label_B = 0, unlabelled = 0;
  std::vector<std::pair<int, int>> grid;
  for (int N = 2; N <= p.Z; ++N)
    for (int k = 0; k < N; ++k) grid.emplace_back(N, k);
  std::vector<StateClass> classes(grid.size());
  std::vector<MarginalGains> gains(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const auto [N, k] = grid[g];
    classes[g] = classify_state(p, k * p.c, N);
    gains[g] = marginal_gains(p, k * p.c, N);
    if (!classes[g].label) {
      ++unlabelled;
    } else {
      (*classes[g].label == 'A' ? label_A : label_B)++;
    }
  }

  if (sink.csv()) {
    sink.write("informed.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"i_C", "i_D", "x", "y", "x_dot", "y_dot", "x_dot_leading", "uninformed_x_dot",
                        "uninformed_y_dot"});
      for (std::size_t k = 0; k < index.size(); ++k) {
        if (!informed[k]) continue;
        const auto s = index.state(k);
        const auto& f = *informed[k];
        w << s.i_C() << s.i_D() << s.x() << s.y() << f.x_dot << f.y_dot << f.x_dot_leading << uninformed[k].x_dot
          << uninformed[k].y_dot;
        w.end_row();
      }
    });
    sink.write("classes.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"N", "k", "d_CD", "d_DO", "d_CO", "signs", "label"});
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const auto& c = classes[g];
        const std::string signs{to_char(c.signs[0]), to_char(c.signs[1]), to_char(c.signs[2])};
        w << grid[g].first << grid[g].second << gains[g].d_CD << gains[g].d_DO << gains[g].d_CO << signs
          << (c.label ? std::string(1, *c.label) : std::string());
        w.end_row();
      }
    });
  }
  Json s;
  s["experiment"] = "informed-map";
  s["alpha"] = p.alpha;
  s["interior_states"] = interior;
  s["x_dot_sign_differs"] = flips;
  s["label_A"] = label_A;
  s["label_B"] = label_B;
  s["unlabelled"] = unlabelled;
  return s;
}

Json run_k_profile(const ExperimentConfig& cfg, Sink& sink) {
  struct Row {
    int i_C, i_D;
    double mean_R_eps, K_exact, K_dropped;
  };
  const auto alphas = require_values(cfg);
  std::vector<std::vector<Row>> rows(alphas.size());
  Json list = Json::array();
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    GameParams p = cfg.params;
    p.alpha = alphas[a];
    const FitnessTable table(p);
    const StateIndex& index = table.index();
    std::vector<std::optional<Row>> found(index.size());
    parallel_for(index.size(), [&](std::size_t k) {
      const auto s = index.state(k);
      if (!s.interior()) return;
      const auto K = k_exact(p, table, s);
      const auto sh = effective_shares(p, group_size(p, s.i_M()));
      found[k] = Row{s.i_C(), s.i_D(), mean_return(p, s) * sh.total(), K->K_exact, *K->K_dropped};
    });
    double sum_K = 0.0, sum_ratio = 0.0, max_dropped = 0.0;
    for (const auto& r : found)
      if (r) {
        rows[a].push_back(*r);
        sum_K += r->K_exact;
        sum_ratio += r->K_exact / r->mean_R_eps;
        max_dropped = std::max(max_dropped, std::abs(r->K_dropped));
      }
    const double n = static_cast<double>(rows[a].size());
    Json j;
    j["alpha"] = alphas[a];
    j["mean_K_exact"] = sum_K / n;
    j["mean_K_ratio"] = sum_ratio / n;
    j["max_abs_K_dropped"] = max_dropped;
    list.push_back(j);
  }
  if (sink.csv())
    sink.write("k_profile.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"alpha", "i_C", "i_D", "x", "y", "mean_R_eps", "K_exact", "K_dropped", "K_ratio"});
      for (std::size_t a = 0; a < alphas.size(); ++a)
        for (const auto& r : rows[a]) {
          const PopulationState s(r.i_C, r.i_D, cfg.params.Z);
          w << alphas[a] << r.i_C << r.i_D << s.x() << s.y() << r.mean_R_eps << r.K_exact << r.K_dropped
            << r.K_exact / r.mean_R_eps;
          w.end_row();
        }
    });
  Json s;
  s["experiment"] = "k-profile";
  s["Z"] = cfg.params.Z;
  s["profiles"] = list;
  return s;
}

Json run_s1(const ExperimentConfig& cfg, Sink& sink) {
  struct Row {
    int Z, i_M, N, i_C;
    double alpha, x, uninformed, informed, K;
  };
  const auto alphas = require_values(cfg);
  std::vector<Row> rows;
  Json list = Json::array();
  for (int Z : cfg.s1_Z) {
    // Size-dependent defaults such as g_m = 5/Z follow the new size.
    auto settings = cfg.settings;
    settings["Z"] = std::to_string(Z);
    const auto at_Z = config_from_pairs(settings);
    for (double alpha : alphas) {
      GameParams p = at_Z.params;
      p.alpha = alpha;
      const int i_M = matched_membership(p, cfg.s1_group_size);
      const int N = group_size(p, i_M);
      double max_gap = 0.0;
      for (int c = 1; c < i_M; ++c) {
        const PopulationState s(c, i_M - c, Z);
        const auto f = fitness(p, s);
        const double K = *k_exact(p, s)->K_full();
        const double un = f.f_C - f.f_D;
        rows.push_back({Z, i_M, N, c, alpha, s.x(), un, un + p.c * K, K});
        max_gap = std::max(max_gap, std::abs(p.c * K));
      }
      Json j;
      j["Z"] = Z;
      j["alpha"] = alpha;
      j["i_M"] = i_M;
      j["N"] = N;
      j["max_gap"] = max_gap;
      list.push_back(j);
    }
  }
  if (sink.csv())
    sink.write("s1.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"Z", "alpha", "i_M", "N", "i_C", "x", "uninformed_x_dot", "informed_x_dot", "K"});
      for (const auto& r : rows) {
        w << r.Z << r.alpha << r.i_M << r.N << r.i_C << r.x << r.uninformed << r.informed << r.K;
        w.end_row();
      }
    });
  Json s;
  s["experiment"] = "s1-compare";
  s["group_size"] = cfg.s1_group_size;
  s["slices"] = list;
  return s;
}

Json run_montecarlo(const ExperimentConfig& cfg, Sink& sink) {
  const auto& p = cfg.params;
  const auto mc = monte_carlo(p, cfg.steps, cfg.seed);
  const StateIndex index(p.Z);
  if (sink.csv())
    sink.write("occupancy.csv", [&](std::ostream& o) {
      csv::Writer w(o, {"i_C", "i_D", "x", "y", "occupancy"});
      for (std::size_t k = 0; k < index.size(); ++k) {
        const auto s = index.state(k);
        w << s.i_C() << s.i_D() << (s.has_members() ? s.x() : 0.0) << s.y() << mc.occupancy[k];
        w.end_row();
      }
    });
  const auto summary = summarize(index, mc.occupancy);
  Json s;
  s["experiment"] = "montecarlo";
  s["steps"] = mc.steps;
  s["seed"] = cfg.seed;
  s["mean_x"] = summary.mean_x;
  s["mean_y"] = summary.mean_y;
  s["member_mass"] = summary.member_mass;
  // The simulation follows the scaled mutation form; compare when the chain fits.
  if (cfg.chain.mutation_form == MutationForm::scaled && index.size() <= cfg.chain.max_states) {
    const auto exact = stationary(build_chain(p, cfg.chain), cfg.solver);
    s["tv_to_stationary"] = total_variation(exact.pi, mc.occupancy);
  }
  return s;
}

}  // namespace

std::string alpha_label(double alpha) { return csv::format_double(alpha); }

int matched_membership(const GameParams& params, int target) {
  int best = -1, best_gap = 0;
  for (int i_M = 2; i_M < params.Z; ++i_M) {
    const int gap = std::abs(group_size(params, i_M) - target);
    if (best < 0 || gap < best_gap) best = i_M, best_gap = gap;
  }
  if (best < 0) throw std::invalid_argument("matched_membership: population too small");
  return best;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  RunReport report;
  Sink sink(cfg, report);
  const auto& name = cfg.experiment;
  Json summary;
  if (name == "field") {
    summary = run_field(cfg, sink);
  } else if (name == "stationary") {
    summary = run_stationary(cfg, sink);
  } else if (name == "sweep-alpha") {
    summary = run_sweep(cfg, sink, false);
  } else if (name == "figure2") {
    summary = run_sweep(cfg, sink, true);
    report.decisions.push_back("theta = " + csv::format_double(cfg.params.theta) +
                               ", theta_prime = " + csv::format_double(cfg.params.theta_prime) +
                               ": chosen, the figure parameters leave them open");
    report.decisions.push_back("g_m = 5/Z, e = 0.5, c = c_c = 1, beta = 0.1, mu = 1/Z, sigmoid benefit: "
                               "figure parameters, override the config");
  } else if (name == "informed-map") {
    summary = run_informed_map(cfg, sink);
  } else if (name == "k-profile") {
    summary = run_k_profile(cfg, sink);
  } else if (name == "s1-compare") {
    summary = run_s1(cfg, sink);
  } else if (name == "montecarlo") {
    summary = run_montecarlo(cfg, sink);
  } else {
    throw ConfigError("invalid value for key 'experiment': '" + name + "'");
  }
  report.decisions.push_back("mutation_form = " + std::string(to_string(cfg.chain.mutation_form)));
  write_summary(cfg, sink, summary);
  report.summary = std::move(summary);
  return report;
}

}  // namespace coalition
