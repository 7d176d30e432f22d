// dfpp: command-line front end for the directed first-passage percolation
// library. Exit codes: 0 ok, 1 failed criterion, 2 configuration error,
// 3 window or budget exhausted.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dfpp/distributions.hpp"
#include "dfpp/estimators.hpp"
#include "dfpp/growth.hpp"
#include "dfpp/io.hpp"
#include "dfpp/lattice.hpp"
#include "dfpp/oriented.hpp"
#include "dfpp/passage.hpp"
#include "dfpp/verify.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace dfpp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string dist;
  std::uint64_t seed = 1;
  int replicates = 200;
  unsigned workers = 0;
  std::string out = "out";
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c, bool needs_dist, int default_replicates) {
  c.replicates = default_replicates;
  auto* d = cmd->add_option("--dist", c.dist, "edge-time law as a JSON literal or a path to a JSON file");
  if (needs_dist) d->required();
  cmd->add_option("--seed", c.seed, "master seed")->capture_default_str();
  cmd->add_option("--replicates", c.replicates, "replicates per cell")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--workers", c.workers, "worker threads (0 = all cores)")->capture_default_str();
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--format", c.format, "csv writes tables plus a JSON summary; json writes the summary only")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

EdgeTimeDistribution load_dist(const std::string& text) {
  std::string literal = text;
  if (!text.empty() && text.front() != '{') {
    std::ifstream is(text);
    if (!is) throw ConfigError("--dist: cannot read file '" + text + "'");
    literal.assign(std::istreambuf_iterator<char>(is), {});
  }
  const json j = json::parse(literal, nullptr, false);
  if (j.is_discarded()) throw ConfigError("--dist: not valid JSON");
  return EdgeTimeDistribution::from_json(j);
}

json common_config(const std::string& command, const Common& c) {
  return {{"command", command}, {"seed", c.seed}, {"replicates", c.replicates}, {"format", c.format}};
}

class Outputs {
 public:
  Outputs(const Common& c, json config) : dir_(c.out), csv_(c.format == "csv"), config_(std::move(config)) {
    hash_ = io::config_hash(config_);
  }
  void table(const std::string& name, const io::CsvTable& t) {
    if (csv_) write(name, t.render(hash_));
  }
  void summary(const std::string& name, json body) {
    body["config"] = config_;
    write(name, io::render_json(std::move(body), hash_));
  }

 private:
  void write(const std::string& name, const std::string& content) {
    io::write_text(dir_ / name, content);
    std::cout << "wrote " << (dir_ / name).string() << "\n";
  }
  fs::path dir_;
  bool csv_;
  json config_;
  std::string hash_;
};

std::vector<double> or_default_thetas(const std::vector<double>& t) { return t.empty() ? default_theta_grid() : t; }

double resolve_pc(std::optional<double> pc, const Common& c) {
  if (pc) return *pc;
  PcOptions po;
  po.workers = c.workers;
  std::cout << "estimating p_c (n = 10000, tolerance 0.01)\n";
  return estimate_pc(10000, 0.01, c.seed, po).p_hat;
}

json mu_json(const MuEstimate& e) {
  json per_r = json::array();
  for (std::size_t k = 0; k < e.radii.size(); ++k)
    per_r.push_back({{"r", e.radii[k]}, {"x", e.targets[k].x}, {"y", e.targets[k].y},
                     {"mean_t_over_r", e.mean_ratio[k]}, {"stderr", e.stderr_ratio[k]}});
  return {{"theta", e.theta}, {"mu_hat", e.mu_hat}, {"stderr", e.mu_stderr}, {"trend_slope", e.trend_slope},
          {"inf_characterization", e.inf_characterization}, {"per_r", per_r}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Directed first-passage percolation experiments"};
  app.require_subcommand(1);
  const auto start = std::chrono::steady_clock::now();
  std::function<int()> action;

  // estimate-mu
  Common mu_c;
  std::vector<double> mu_thetas, mu_radii{64, 128, 256};
  auto* mu = app.add_subcommand("estimate-mu", "time constant along directions");
  add_common(mu, mu_c, true, 200);
  mu->add_option("--theta", mu_thetas, "directions in radians (default grid of nine)");
  mu->add_option("--radii", mu_radii, "strictly increasing radius schedule")->capture_default_str();
  mu->callback([&] {
    action = [&] {
      const auto dist = load_dist(mu_c.dist);
      const auto thetas = or_default_thetas(mu_thetas);
      json cfg = common_config("estimate-mu", mu_c);
      cfg["dist"] = dist.to_json();
      cfg["theta"] = thetas;
      cfg["radii"] = mu_radii;
      Outputs out(mu_c, cfg);
      io::CsvTable samples({"dist_id", "theta", "r", "replicate", "T", "T_over_r"});
      json summary = json::array();
      for (double theta : thetas) {
        const MuEstimate e = estimate_mu(dist, theta, mu_radii, mu_c.replicates, mu_c.seed, mu_c.workers);
        for (std::size_t k = 0; k < e.radii.size(); ++k)
          for (std::size_t i = 0; i < e.passage_times[k].size(); ++i)
            samples.add(dist.id(), theta, e.radii[k], i, e.passage_times[k][i], e.passage_times[k][i] / e.radii[k]);
        summary.push_back(mu_json(e));
        std::cout << "theta=" << theta << " mu_hat=" << e.mu_hat << " stderr=" << e.mu_stderr << "\n";
      }
      out.table("mu_samples.csv", samples);
      out.summary("mu_summary.json", {{"estimates", summary}});
      return kExitOk;
    };
  });

  // tail
  Common tail_c;
  double tail_theta = std::numbers::pi / 4, tail_delta = 0.1, tail_r = 128;
  auto* tail = app.add_subcommand("tail", "frequency of {T <= delta r}");
  add_common(tail, tail_c, true, 1000);
  tail->add_option("--theta", tail_theta)->capture_default_str();
  tail->add_option("--delta", tail_delta)->capture_default_str();
  tail->add_option("--r", tail_r)->capture_default_str();
  tail->callback([&] {
    action = [&] {
      const auto dist = load_dist(tail_c.dist);
      json cfg = common_config("tail", tail_c);
      cfg.update({{"dist", dist.to_json()}, {"theta", tail_theta}, {"delta", tail_delta}, {"r", tail_r}});
      Outputs out(tail_c, cfg);
      const TailEstimate t = tail_probability(dist, tail_theta, tail_delta, tail_r, tail_c.replicates, tail_c.seed, tail_c.workers);
      io::CsvTable table({"theta", "delta", "r", "hits", "replicates", "frequency", "ci_lo", "ci_hi"});
      table.add(t.theta, t.delta, t.r, t.hits, t.replicates, t.frequency, t.ci.lo, t.ci.hi);
      out.table("tail.csv", table);
      out.summary("tail.json", {{"hits", t.hits}, {"frequency", t.frequency}, {"ci", {t.ci.lo, t.ci.hi}}});
      std::cout << "frequency=" << t.frequency << " ci=[" << t.ci.lo << ", " << t.ci.hi << "]\n";
      return kExitOk;
    };
  });

  // moments and sigma-tail share the cone machinery
  Common mom_c;
  double mom_theta = std::numbers::pi / 4;
  int mom_m = 1;
  std::vector<double> mom_radii{64, 128, 256, 512};
  std::optional<double> mom_pc;
  std::int64_t mom_levels = 4000;
  auto* mom = app.add_subcommand("moments", "m-th moments of T inside the percolation cone");
  add_common(mom, mom_c, true, 200);
  mom->add_option("--theta", mom_theta)->capture_default_str();
  mom->add_option("--m", mom_m)->capture_default_str();
  mom->add_option("--radii", mom_radii)->capture_default_str();
  mom->add_option("--pc-hat", mom_pc, "critical probability (estimated when absent)");
  mom->add_option("--cone-levels", mom_levels)->capture_default_str();
  mom->callback([&] {
    action = [&] {
      const auto dist = load_dist(mom_c.dist);
      const double pc = resolve_pc(mom_pc, mom_c);
      const ConeEstimate cone = estimate_cone(dist.atom_at_zero(), mom_levels, 32, mom_c.seed, mom_c.workers);
      json cfg = common_config("moments", mom_c);
      cfg.update({{"dist", dist.to_json()}, {"theta", mom_theta}, {"m", mom_m}, {"radii", mom_radii}, {"pc_hat", pc}});
      Outputs out(mom_c, cfg);
      const MomentPlateau mp = moment_plateau(dist, mom_theta, mom_m, mom_radii, mom_c.replicates, mom_c.seed, cone, pc, mom_c.workers);
      io::CsvTable table({"theta", "m", "r", "moment", "stderr", "ci_lo", "ci_hi"});
      for (const auto& p : mp.points) table.add(mom_theta, mom_m, p.r, p.moment, p.stderr_, p.ci.lo, p.ci.hi);
      out.table("moments.csv", table);
      out.summary("moments.json", {{"plateau", mp.plateau}, {"endpoints_agree", mp.endpoints_agree},
                                   {"range", mp.range}, {"pooled_stderr", mp.pooled_stderr},
                                   {"cone", {cone.theta_minus, cone.theta_plus}}});
      std::cout << "plateau=" << (mp.plateau ? "yes" : "no") << " range=" << mp.range << "\n";
      return kExitOk;
    };
  });

  Common sig_c;
  double sig_theta = std::numbers::pi / 4, sig_r = 256;
  std::optional<double> sig_pc;
  auto* sig = app.add_subcommand("sigma-tail", "survival function of the tau-passage time");
  add_common(sig, sig_c, true, 20000);
  sig->add_option("--theta", sig_theta)->capture_default_str();
  sig->add_option("--r", sig_r)->capture_default_str();
  sig->add_option("--pc-hat", sig_pc);
  sig->callback([&] {
    action = [&] {
      const auto dist = load_dist(sig_c.dist);
      const double pc = resolve_pc(sig_pc, sig_c);
      const ConeEstimate cone = estimate_cone(dist.atom_at_zero(), 4000, 32, sig_c.seed, sig_c.workers);
      json cfg = common_config("sigma-tail", sig_c);
      cfg.update({{"dist", dist.to_json()}, {"theta", sig_theta}, {"r", sig_r}, {"pc_hat", pc}});
      Outputs out(sig_c, cfg);
      const SigmaTail st = sigma_tail(dist, sig_theta, sig_r, sig_c.replicates, sig_c.seed, cone, pc, sig_c.workers);
      io::CsvTable table({"k", "survival"});
      for (std::size_t k = 0; k < st.survival.size(); ++k) table.add(k, st.survival[k]);
      out.table("sigma_tail.csv", table);
      out.summary("sigma_tail.json", {{"slope", st.fit.slope}, {"r_squared", st.fit.r_squared},
                                      {"fitted_points", st.fitted_points}, {"survival", st.survival}});
      std::cout << "slope=" << st.fit.slope << " R2=" << st.fit.r_squared << "\n";
      return kExitOk;
    };
  });

  // phase-diagram
  Common ph_c;
  std::vector<double> ph_p, ph_thetas, ph_radii{32, 64, 128, 256};
  std::optional<double> ph_pc;
  auto* ph = app.add_subcommand("phase-diagram", "phase, cone and mu-hat for Bernoulli 0/1 laws");
  add_common(ph, ph_c, false, 200);
  ph->add_option("--p", ph_p, "values of P[t = 0] (default 0.4, p_c, 0.8)");
  ph->add_option("--theta", ph_thetas);
  ph->add_option("--radii", ph_radii)->capture_default_str();
  ph->add_option("--pc-hat", ph_pc);
  ph->callback([&] {
    action = [&] {
      const double pc = resolve_pc(ph_pc, ph_c);
      const auto ps = ph_p.empty() ? std::vector<double>{0.4, pc, 0.8} : ph_p;
      for (double p : ps)
        if (!(p > 0.0 && p <= 1.0)) throw ConfigError("--p: values must lie in (0, 1]");
      const auto thetas = or_default_thetas(ph_thetas);
      json cfg = common_config("phase-diagram", ph_c);
      cfg.update({{"p", ps}, {"theta", thetas}, {"radii", ph_radii}, {"pc_hat", pc}});
      Outputs out(ph_c, cfg);
      PhaseBudget budget;
      budget.radii = ph_radii;
      budget.replicates = ph_c.replicates;
      budget.seed = ph_c.seed;
      budget.workers = ph_c.workers;
      io::CsvTable table({"p", "phase", "alpha_hat", "theta_minus", "theta_plus", "theta", "mu_hat", "stderr", "lcb99", "pass"});
      json rows = json::array();
      bool consistent = true;
      for (double p : ps) {
        const auto dist = EdgeTimeDistribution::bernoulli01(p);
        std::optional<Phase> forced;
        if (std::abs(p - pc) < budget.phase_tolerance) forced = Phase::kCritical;
        const PhaseReport rep = classify_phase(dist, pc, thetas, budget, forced);
        consistent = consistent && rep.consistent();
        const auto cone_cell = [&](double v) { return rep.cone ? io::format_double(v) : std::string(); };
        json ests = json::array();
        for (std::size_t i = 0; i < rep.estimates.size(); ++i) {
          const auto& e = rep.estimates[i];
          const auto& v = rep.verdicts[i];
          table.add(p, phase_name(rep.phase), cone_cell(rep.cone ? rep.cone->alpha_hat : 0),
                    cone_cell(rep.cone ? rep.cone->theta_minus : 0), cone_cell(rep.cone ? rep.cone->theta_plus : 0),
                    e.theta, e.mu_hat, e.mu_stderr, v.lower_bound, v.pass);
          ests.push_back(mu_json(e));
        }
        json cone = rep.cone ? json{{"alpha_hat", rep.cone->alpha_hat}, {"theta_minus", rep.cone->theta_minus},
                                    {"theta_plus", rep.cone->theta_plus}}
                             : json();
        rows.push_back({{"p", p}, {"phase", phase_name(rep.phase)}, {"cone", cone}, {"estimates", ests},
                        {"consistent", rep.consistent()}});
        std::cout << "p=" << p << " phase=" << phase_name(rep.phase) << " consistent=" << rep.consistent() << "\n";
      }
      out.table("phase_diagram.csv", table);
      out.summary("phase_diagram.json", {{"pc_hat", pc}, {"rows", rows}});
      return consistent ? kExitOk : kExitFailed;
    };
  });

  // cone
  Common cone_c;
  std::vector<double> cone_p{0.7, 0.8, 0.9};
  std::int64_t cone_levels = 4000;
  auto* cone = app.add_subcommand("cone", "edge speed and percolation cone angles");
  add_common(cone, cone_c, false, 32);
  cone->add_option("--p", cone_p)->capture_default_str();
  cone->add_option("--levels", cone_levels)->capture_default_str();
  cone->callback([&] {
    action = [&] {
      json cfg = common_config("cone", cone_c);
      cfg.update({{"p", cone_p}, {"levels", cone_levels}});
      Outputs out(cone_c, cfg);
      io::CsvTable table({"p", "alpha_hat", "theta_minus", "theta_plus"});
      json rows = json::array();
      for (double p : cone_p) {
        const ConeEstimate c = estimate_cone(p, cone_levels, cone_c.replicates, cone_c.seed, cone_c.workers);
        table.add(p, c.alpha_hat, c.theta_minus, c.theta_plus);
        rows.push_back({{"p", p}, {"alpha_hat", c.alpha_hat}, {"theta_minus", c.theta_minus}, {"theta_plus", c.theta_plus}});
        std::cout << "p=" << p << " alpha_hat=" << c.alpha_hat << " cone=[" << c.theta_minus << ", " << c.theta_plus << "]\n";
      }
      out.table("cone.csv", table);
      out.summary("cone.json", {{"rows", rows}});
      return kExitOk;
    };
  });

  // pc-estimate
  Common pc_c;
  std::int64_t pc_levels = 10000;
  double pc_tol = 0.01;
  auto* pcc = app.add_subcommand("pc-estimate", "critical probability by right-edge drift bisection");
  add_common(pcc, pc_c, false, 32);
  pcc->add_option("--levels", pc_levels)->capture_default_str();
  pcc->add_option("--tolerance", pc_tol)->capture_default_str();
  pcc->callback([&] {
    action = [&] {
      json cfg = common_config("pc-estimate", pc_c);
      cfg.update({{"levels", pc_levels}, {"tolerance", pc_tol}});
      Outputs out(pc_c, cfg);
      PcOptions po;
      po.replicates = pc_c.replicates;
      po.workers = pc_c.workers;
      const PcEstimate est = estimate_pc(pc_levels, pc_tol, pc_c.seed, po);
      io::CsvTable table({"p", "levels", "positives", "replicates", "mean_speed", "verdict"});
      for (const auto& pr : est.probes) {
        const char* v = pr.verdict == DriftVerdict::kSupercritical ? "supercritical"
                        : pr.verdict == DriftVerdict::kSubcritical ? "subcritical"
                                                                   : "undecided";
        table.add(pr.p, pr.levels, pr.positives, pr.replicates, pr.mean_speed, v);
      }
      out.table("pc_probes.csv", table);
      out.summary("pc.json", {{"p_hat", est.p_hat}, {"bracket", {est.lo, est.hi}}, {"literature", kLiteraturePc}});
      std::cout << "p_hat=" << est.p_hat << " bracket=[" << est.lo << ", " << est.hi << "] literature=" << kLiteraturePc << "\n";
      return kExitOk;
    };
  });

  // right-edge
  Common re_c;
  double re_p = 0.7;
  std::int64_t re_levels = 1000, re_stride = 1;
  auto* re = app.add_subcommand("right-edge", "right-edge traces from the half-line source");
  add_common(re, re_c, false, 16);
  re->add_option("--p", re_p)->capture_default_str();
  re->add_option("--levels", re_levels)->capture_default_str();
  re->add_option("--stride", re_stride, "record every k-th level")->capture_default_str()->check(CLI::PositiveNumber);
  re->callback([&] {
    action = [&] {
      json cfg = common_config("right-edge", re_c);
      cfg.update({{"p", re_p}, {"levels", re_levels}, {"stride", re_stride}});
      Outputs out(re_c, cfg);
      const auto traces = parallel_map(static_cast<std::size_t>(re_c.replicates), re_c.workers, [&](std::size_t i) {
        return right_edge_trace(re_p, re_levels, re_c.seed, static_cast<std::uint32_t>(i));
      });
      io::CsvTable table({"p", "n", "replicate", "r_n"});
      std::vector<double> speeds;
      for (std::size_t i = 0; i < traces.size(); ++i) {
        for (std::size_t n = static_cast<std::size_t>(re_stride); n <= traces[i].r.size(); n += static_cast<std::size_t>(re_stride)) {
          const auto& r = traces[i].r[n - 1];
          table.add(re_p, n, i, r ? std::to_string(*r) : std::string("-inf"));
        }
        if (auto a = traces[i].alpha_hat()) speeds.push_back(*a);
      }
      out.table("right_edge.csv", table);
      const double alpha = speeds.empty() ? 0.0 : stats::mean(speeds);
      out.summary("right_edge.json", {{"alpha_hat", alpha}, {"stderr", stats::stderr_of_mean(speeds)}});
      std::cout << "alpha_hat=" << alpha << "\n";
      return kExitOk;
    };
  });

  // cluster-tail
  Common cl_c;
  double cl_p = 0.4;
  std::int64_t cl_cap = 100000;
  auto* cl = app.add_subcommand("cluster-tail", "size distribution of the oriented cluster of the origin");
  add_common(cl, cl_c, false, 100000);
  cl->add_option("--p", cl_p)->capture_default_str();
  cl->add_option("--cap", cl_cap)->capture_default_str();
  cl->callback([&] {
    action = [&] {
      json cfg = common_config("cluster-tail", cl_c);
      cfg.update({{"p", cl_p}, {"cap", cl_cap}});
      Outputs out(cl_c, cfg);
      const auto sizes = parallel_map(static_cast<std::size_t>(cl_c.replicates), cl_c.workers, [&](std::size_t i) {
        return cluster_size(cl_p, cl_cap, cl_c.seed, static_cast<std::uint32_t>(i));
      });
      io::CsvTable table({"p", "replicate", "cluster_size"});
      std::map<std::int64_t, std::int64_t> hist;
      int exceeded = 0;
      for (std::size_t i = 0; i < sizes.size(); ++i) {
        table.add(cl_p, i, sizes[i].size);
        ++hist[sizes[i].size];
        exceeded += sizes[i].exceeded ? 1 : 0;
      }
      // log P[|C| >= s] against s over frequencies >= 1e-3
      std::vector<double> xs, ys;
      json survival = json::array();
      double remaining = static_cast<double>(sizes.size());
      for (const auto& [s, k] : hist) {
        const double f = remaining / static_cast<double>(sizes.size());
        survival.push_back({s, f});
        if (f >= 1e-3) {
          xs.push_back(static_cast<double>(s));
          ys.push_back(std::log(f));
        }
        remaining -= static_cast<double>(k);
      }
      json body = {{"exceeded", exceeded}, {"survival", survival}};
      if (xs.size() >= 2) {
        const auto fit = stats::least_squares(xs, ys);
        body["slope"] = fit.slope;
        body["r_squared"] = fit.r_squared;
        std::cout << "log-survival slope=" << fit.slope << " R2=" << fit.r_squared << "\n";
      }
      out.table("cluster_sizes.csv", table);
      out.summary("cluster_tail.json", body);
      return kExitOk;
    };
  });

  // shape
  Common sh_c;
  double sh_t = 50;
  std::vector<double> sh_thetas;
  std::int64_t sh_window = 0;
  bool sh_ball = false;
  auto* sh = app.add_subcommand("shape", "boundary of the reached set C_t along rays");
  add_common(sh, sh_c, true, 20);
  sh->add_option("--t", sh_t, "time")->capture_default_str();
  sh->add_option("--theta", sh_thetas);
  sh->add_option("--window", sh_window, "window side (default 4 t / E[t(e)] capped at 2000)");
  sh->add_flag("--export-ball", sh_ball, "also write B_tau(floor t) of replicate 0 as run-length JSON");
  sh->callback([&] {
    action = [&] {
      const auto dist = load_dist(sh_c.dist);
      const auto thetas = or_default_thetas(sh_thetas);
      std::int64_t side = sh_window;
      if (side <= 0) {
        const double m = std::max(dist.mean(), 1e-3);
        side = std::min<std::int64_t>(2000, static_cast<std::int64_t>(std::ceil(4 * sh_t / m)) + 2);
      }
      json cfg = common_config("shape", sh_c);
      cfg.update({{"dist", dist.to_json()}, {"t", sh_t}, {"theta", thetas}, {"window", side}});
      Outputs out(sh_c, cfg);
      const GridSpec grid(side, side);
      const auto radii = parallel_map(static_cast<std::size_t>(sh_c.replicates), sh_c.workers, [&](std::size_t i) {
        const PassageField pf = compute_passage(generate_field(grid, dist, sh_c.seed, static_cast<std::uint32_t>(i)));
        std::vector<double> rs;
        for (double th : thetas) rs.push_back(shape_boundary_radius(pf, sh_t, th));
        return rs;
      });
      io::CsvTable table({"theta", "rho", "t", "replicate"});
      json mean_rho = json::array();
      for (std::size_t k = 0; k < thetas.size(); ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < radii.size(); ++i) {
          table.add(thetas[k], radii[i][k] / sh_t, sh_t, i);
          sum += radii[i][k] / sh_t;
        }
        mean_rho.push_back({{"theta", thetas[k]}, {"rho", sum / static_cast<double>(radii.size())}});
      }
      out.table("shape.csv", table);
      out.summary("shape.json", {{"mean_rho", mean_rho}});
      if (sh_ball) {
        const TauField tf = compute_tau(generate_field(grid, dist, sh_c.seed, 0));
        out.summary("ball.json", io::ball_rle(ball(tf, static_cast<std::int32_t>(std::floor(sh_t)))));
      }
      return kExitOk;
    };
  });

  // growth
  Common gr_c;
  std::int64_t gr_n = 10;
  std::string gr_rule = "edge";
  int gr_dump = -1;
  auto* gr = app.add_subcommand("growth", "directed growth model and its first-passage representation");
  add_common(gr, gr_c, false, 5000);
  gr->add_option("--n", gr_n, "cells")->capture_default_str()->check(CLI::PositiveNumber);
  gr->add_option("--rule", gr_rule, "edge: weight per exposed NE edge; cell: weight per boundary cell")
      ->check(CLI::IsMember({"edge", "cell"}))
      ->capture_default_str();
  gr->add_option("--dump-trajectory", gr_dump, "replicate whose trajectory is written as (step, x, y)");
  gr->callback([&] {
    action = [&] {
      const GrowthRule rule = gr_rule == "edge" ? GrowthRule::kEdgeProportional : GrowthRule::kCellUniform;
      json cfg = common_config("growth", gr_c);
      cfg.update({{"n", gr_n}, {"rule", gr_rule}, {"dump_trajectory", gr_dump}});
      Outputs out(gr_c, cfg);
      const Occupancy direct = growth_occupancy(gr_n, gr_c.replicates, gr_c.seed, gr_c.workers, rule);
      const Occupancy fpp = fpp_occupancy(gr_n, gr_c.replicates, gr_c.seed + 1, gr_c.workers, rule == GrowthRule::kCellUniform);
      io::CsvTable table({"x", "y", "frequency", "n", "replicates"});
      for (const auto& [c, k] : direct.counts) table.add(c.x, c.y, direct.frequency(c), gr_n, gr_c.replicates);
      out.table("occupancy.csv", table);
      if (gr_dump >= 0) {
        io::CsvTable traj({"step", "x", "y"});
        const GrowthState s = grow(gr_n, gr_c.seed, static_cast<std::uint32_t>(gr_dump), rule);
        for (std::size_t i = 0; i < s.trajectory.size(); ++i) traj.add(i + 1, s.trajectory[i].x, s.trajectory[i].y);
        out.table("trajectory.csv", traj);
      }
      const double tv = total_variation(direct, fpp);
      out.summary("growth.json", {{"tv_growth_vs_fpp", tv}, {"fpp_clocks", rule == GrowthRule::kCellUniform ? "vertex" : "edge"}});
      std::cout << "TV(growth, fpp)=" << tv << "\n";
      return kExitOk;
    };
  });

  // verify
  Common vf_c;
  std::string vf_suite;
  std::vector<std::string> vf_compare;
  std::optional<double> vf_pc;
  auto* vf = app.add_subcommand("verify", "run an acceptance suite, or compare two output files");
  add_common(vf, vf_c, false, 1);
  vf_c.seed = verify::Options{}.seed;
  vf->add_option("suite", vf_suite, "structure, subcritical, supercritical, critical, oriented, coupling or growth");
  vf->add_option("--compare", vf_compare, "two output files to compare byte for byte")->expected(2);
  vf->add_option("--pc-hat", vf_pc);
  vf->callback([&] {
    action = [&] {
      if (!vf_compare.empty()) {
        const bool same = io::compare_outputs(io::read_text(vf_compare[0]), io::read_text(vf_compare[1]));
        std::cout << (same ? "identical" : "different") << "\n";
        return same ? kExitOk : kExitFailed;
      }
      if (vf_suite.empty()) throw ConfigError("verify: name a suite or pass --compare");
      verify::Options opt;
      opt.seed = vf_c.seed;
      opt.workers = vf_c.workers;
      opt.pc_hat = vf_pc;
      const verify::SuiteResult res = verify::run_suite(vf_suite, opt);
      for (const auto& v : res.verdicts) std::cout << v.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << "\n";
      for (const auto& [name, content] : res.files) {
        io::write_text(fs::path(vf_c.out) / name, content);
        std::cout << "wrote " << (fs::path(vf_c.out) / name).string() << "\n";
      }
      return res.passed() ? kExitOk : kExitFailed;
    };
  });

  // dump-field
  Common df_c;
  std::int64_t df_w = 16, df_h = 16;
  std::uint32_t df_rep = 0;
  auto* df = app.add_subcommand("dump-field", "write one realized edge field in the binary dump format");
  add_common(df, df_c, true, 1);
  df->add_option("--width", df_w)->capture_default_str();
  df->add_option("--height", df_h)->capture_default_str();
  df->add_option("--replicate", df_rep)->capture_default_str();
  df->callback([&] {
    action = [&] {
      const auto dist = load_dist(df_c.dist);
      const EdgeField f = generate_field(GridSpec(df_w, df_h), dist, df_c.seed, df_rep);
      fs::create_directories(df_c.out);
      const fs::path path = fs::path(df_c.out) / "field.bin";
      std::ofstream os(path, std::ios::binary);
      write_field_dump(os, f);
      std::cout << "wrote " << path.string() << "\n";
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  int code = kExitOk;
  try {
    code = action();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const verify::UnknownSuite& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const io::SchemaMismatch& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const BallTruncated& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const RayTruncated& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const WindowExceeded& e) {
    std::cerr << "window error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const PcInconclusive& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const PhaseInconclusive& e) {
    std::cerr << "budget error: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBudget;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cout << "wall-clock " << secs << " s\n";
  return code;
}
