#pragma once

// Edge passage-time laws F, inverse-CDF sampling, pointwise CDF ordering and
// the derived laws used by the critical-phase constructions (flattening G_n / H,
// the G_epsilon coupling).

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace dfpp {

constexpr double kProbabilityTolerance = 1e-12;

struct Atom {
  double value;
  double prob;
  friend bool operator==(const Atom&, const Atom&) = default;
};

class EdgeTimeDistribution;

struct BernoulliZeroOne {
  double p0;  // P[t = 0]; the remaining mass sits at 1
};
struct DiscreteAtoms {
  std::vector<Atom> atoms;  // ascending values, positive probabilities
};
struct Exponential {
  double rate;
};
struct Shifted {
  std::shared_ptr<const EdgeTimeDistribution> inner;
  double a;
};

/// Law of a single edge passage time. Immutable once built.
class EdgeTimeDistribution {
 public:
  using Variant = std::variant<BernoulliZeroOne, DiscreteAtoms, Exponential, Shifted>;

  static EdgeTimeDistribution bernoulli01(double p0) {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw std::invalid_argument("bernoulli01: p0 must lie in [0, 1]");
    return EdgeTimeDistribution(BernoulliZeroOne{p0});
  }

  static EdgeTimeDistribution atoms(std::vector<Atom> atoms) {
    std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) { return a.value < b.value; });
    std::vector<Atom> merged;
    double total = 0.0;
    for (const Atom& atom : atoms) {
      if (!std::isfinite(atom.value) || atom.value < 0.0)
        throw std::invalid_argument("atoms: support points must be finite and nonnegative");
      if (!(atom.prob >= 0.0)) throw std::invalid_argument("atoms: probabilities must be nonnegative");
      total += atom.prob;
      if (atom.prob == 0.0) continue;
      if (!merged.empty() && merged.back().value == atom.value)
        merged.back().prob += atom.prob;
      else
        merged.push_back(atom);
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance)
      throw std::invalid_argument("atoms: probabilities must sum to 1");
    return EdgeTimeDistribution(DiscreteAtoms{std::move(merged)});
  }

  static EdgeTimeDistribution point_mass(double c) { return atoms({{c, 1.0}}); }

  static EdgeTimeDistribution exponential(double rate) {
    if (!(rate > 0.0) || !std::isfinite(rate)) throw std::invalid_argument("exponential: rate must be positive");
    return EdgeTimeDistribution(Exponential{rate});
  }

  /// F (+) a: the law of t(e) + a.
  static EdgeTimeDistribution shifted(const EdgeTimeDistribution& inner, double a) {
    if (!std::isfinite(a)) throw std::invalid_argument("shift: a must be finite");
    if (inner.min_support() + a < 0.0) throw std::invalid_argument("shift: shifted support must stay nonnegative");
    return EdgeTimeDistribution(Shifted{std::make_shared<const EdgeTimeDistribution>(inner), a});
  }

  const Variant& variant() const { return v_; }

  bool is_discrete() const {
    return std::visit(
        [](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return false;
          else if constexpr (std::is_same_v<T, Shifted>) return d.inner->is_discrete();
          else return true;
        },
        v_);
  }

  /// Atoms of a discrete law, ascending. Empty for continuous laws.
  std::vector<Atom> support() const {
    return std::visit(
        [](const auto& d) -> std::vector<Atom> {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, BernoulliZeroOne>) {
            std::vector<Atom> out;
            if (d.p0 > 0.0) out.push_back({0.0, d.p0});
            if (d.p0 < 1.0) out.push_back({1.0, 1.0 - d.p0});
            return out;
          } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
            return d.atoms;
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return {};
          } else {
            auto out = d.inner->support();
            for (Atom& atom : out) atom.value += d.a;
            return out;
          }
        },
        v_);
  }

  double cdf(double x) const {
    return std::visit(
        [x](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, BernoulliZeroOne>) {
            return x < 0.0 ? 0.0 : (x < 1.0 ? d.p0 : 1.0);
          } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
            double c = 0.0;
            for (const Atom& atom : d.atoms)
              if (atom.value <= x) c += atom.prob;
            return std::min(c, 1.0);
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return x < 0.0 ? 0.0 : -std::expm1(-d.rate * x);
          } else {
            return d.inner->cdf(x - d.a);
          }
        },
        v_);
  }

  /// F(0): exact for discrete laws, 0 for the exponential.
  double atom_at_zero() const { return cdf(0.0); }

  double mean() const {
    return std::visit(
        [this](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return 1.0 / d.rate;
          else if constexpr (std::is_same_v<T, Shifted>) return d.inner->mean() + d.a;
          else {
            double m = 0.0;
            for (const Atom& atom : support()) m += atom.value * atom.prob;
            return m;
          }
        },
        v_);
  }

  double min_support() const {
    return std::visit(
        [this](const auto& d) -> double {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, Exponential>) return 0.0;
          else if constexpr (std::is_same_v<T, Shifted>) return d.inner->min_support() + d.a;
          else {
            const auto s = support();
            return s.empty() ? 0.0 : s.front().value;
          }
        },
        v_);
  }

  /// Inverse CDF, right-continuous version: inf{x : F(x) > u}. Agrees with
  /// inf{x : F(x) >= u} except on a null set of u, and sends u < F(0) to 0.
  double sample(double u) const;

  nlohmann::json to_json() const {
    return std::visit(
        [](const auto& d) -> nlohmann::json {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, BernoulliZeroOne>) {
            return {{"bernoulli01", {{"p0", d.p0}}}};
          } else if constexpr (std::is_same_v<T, DiscreteAtoms>) {
            nlohmann::json arr = nlohmann::json::array();
            for (const Atom& a : d.atoms) arr.push_back({a.value, a.prob});
            return {{"atoms", arr}};
          } else if constexpr (std::is_same_v<T, Exponential>) {
            return {{"exponential", {{"rate", d.rate}}}};
          } else {
            return {{"shift", {{"a", d.a}, {"inner", d.inner->to_json()}}}};
          }
        },
        v_);
  }

  /// Canonical identifier: the compact JSON literal.
  std::string id() const { return to_json().dump(); }

  static EdgeTimeDistribution from_json(const nlohmann::json& j);

 private:
  explicit EdgeTimeDistribution(Variant v) : v_(std::move(v)) {}

  Variant v_;
};

/// Flattened inverse-CDF table. Sampling happens once per edge, so the
/// variant dispatch and shift chain are resolved ahead of time.
class Sampler {
 public:
  explicit Sampler(const EdgeTimeDistribution& dist) {
    const EdgeTimeDistribution* cur = &dist;
    while (const auto* s = std::get_if<Shifted>(&cur->variant())) {
      shift_ += s->a;
      cur = s->inner.get();
    }
    if (const auto* e = std::get_if<Exponential>(&cur->variant())) {
      exponential_ = true;
      rate_ = e->rate;
    } else {
      double c = 0.0;
      for (const Atom& atom : cur->support()) {
        c += atom.prob;
        values_.push_back(atom.value);
        cumulative_.push_back(c);
      }
    }
  }

  double operator()(double u) const {
    if (exponential_) return -std::log1p(-u) / rate_ + shift_;
    const std::size_t n = values_.size();
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (u < cumulative_[i]) return values_[i] + shift_;
    return values_.back() + shift_;
  }

 private:
  bool exponential_ = false;
  double rate_ = 1.0;
  double shift_ = 0.0;
  std::vector<double> values_;
  std::vector<double> cumulative_;
};

inline double EdgeTimeDistribution::sample(double u) const { return Sampler(*this)(u); }

inline EdgeTimeDistribution EdgeTimeDistribution::from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument("distribution literal must be an object with exactly one key");
  const auto& [kind, body] = *j.items().begin();
  try {
    if (kind == "bernoulli01") return bernoulli01(body.at("p0").get<double>());
    if (kind == "exponential") return exponential(body.at("rate").get<double>());
    if (kind == "atoms") {
      std::vector<Atom> atoms;
      for (const auto& pair : body) {
        if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("atoms: entries must be [value, prob]");
        atoms.push_back({pair[0].get<double>(), pair[1].get<double>()});
      }
      return EdgeTimeDistribution::atoms(std::move(atoms));
    }
    if (kind == "shift") return shifted(from_json(body.at("inner")), body.at("a").get<double>());
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("distribution '" + kind + "': " + e.what());
  }
  throw std::invalid_argument("unknown distribution kind '" + kind + "'");
}

/// True iff F1(x) <= F2(x) at every probe point and every atom of either law,
/// i.e. F2 is stochastically smaller (edge times under F2 are shorter).
inline bool stochastically_dominates(const EdgeTimeDistribution& f1, const EdgeTimeDistribution& f2,
                                     const std::vector<double>& grid) {
  std::vector<double> probes = grid;
  for (const Atom& a : f1.support()) probes.push_back(a.value);
  for (const Atom& a : f2.support()) probes.push_back(a.value);
  return std::all_of(probes.begin(), probes.end(),
                     [&](double x) { return f1.cdf(x) <= f2.cdf(x) + kProbabilityTolerance; });
}

// ---------------------------------------------------------------------------
// Critical-phase constructions

/// Flattens F on [0, x_n): mass of (0, x_n) moves up to x_n, F is unchanged at
/// and beyond x_n. With x_n the jump point h_1 this is the law H.
inline EdgeTimeDistribution build_g_n(const EdgeTimeDistribution& f, double x_n) {
  if (!f.is_discrete()) throw std::invalid_argument("build_g_n: distribution must be discrete");
  const auto atoms = f.support();
  const bool on_support =
      std::any_of(atoms.begin(), atoms.end(), [x_n](const Atom& a) { return a.value == x_n; });
  if (!on_support) throw std::invalid_argument("build_g_n: x_n must be a support point");
  const double f0 = f.atom_at_zero();
  if (!(x_n > 0.0) || !(f.cdf(x_n) > f0)) throw std::invalid_argument("build_g_n: need F(x_n) > F(0)");
  std::vector<Atom> out;
  if (f0 > 0.0) out.push_back({0.0, f0});
  out.push_back({x_n, f.cdf(x_n) - f0});
  for (const Atom& a : atoms)
    if (a.value > x_n) out.push_back(a);
  return EdgeTimeDistribution::atoms(std::move(out));
}

struct CoupledPair {
  double t;  // sample of F
  double g;  // coupled sample of G_epsilon
};

/// Base law with a flat CDF on [0, h) and a jump at h, plus the extra mass
/// epsilon moved to 0.
class GEpsilonSpec {
 public:
  GEpsilonSpec(EdgeTimeDistribution base, double h, double epsilon)
      : base_(std::move(base)), h_(h), epsilon_(epsilon) {
    if (!base_.is_discrete()) throw std::invalid_argument("g_epsilon: base must be discrete");
    if (!(h_ > 0.0)) throw std::invalid_argument("g_epsilon: h must be positive");
    const double f0 = base_.atom_at_zero();
    for (const Atom& a : base_.support())
      if (a.value > 0.0 && a.value < h_) throw std::invalid_argument("g_epsilon: F must be flat on [0, h)");
    jump_ = base_.cdf(h_) - f0;
    if (!(jump_ > 0.0)) throw std::invalid_argument("g_epsilon: F must jump at h");
    if (!(epsilon_ > 0.0 && epsilon_ < jump_)) throw std::invalid_argument("g_epsilon: need 0 < epsilon < F(h) - F(0)");
  }

  const EdgeTimeDistribution& base() const { return base_; }
  double h() const { return h_; }
  double epsilon() const { return epsilon_; }
  /// Conditional probability that t = h is sent to g = 0.
  double zero_branch_probability() const { return epsilon_ / jump_; }

  /// The marginal law G_epsilon of the coupled variable.
  EdgeTimeDistribution g_distribution() const {
    std::vector<Atom> out{{0.0, base_.atom_at_zero() + epsilon_}, {h_, jump_ - epsilon_}};
    for (const Atom& a : base_.support())
      if (a.value > h_) out.push_back(a);
    return EdgeTimeDistribution::atoms(std::move(out));
  }

 private:
  EdgeTimeDistribution base_;
  double h_;
  double epsilon_;
  double jump_ = 0.0;
};

inline CoupledPair couple_g_epsilon(const GEpsilonSpec& spec, double t, double u_aux) {
  const auto atoms = spec.base().support();
  if (std::none_of(atoms.begin(), atoms.end(), [t](const Atom& a) { return a.value == t; }))
    throw std::invalid_argument("couple_g_epsilon: t is not in the support of the base law");
  if (t == 0.0) return {t, 0.0};
  if (t > spec.h()) return {t, t};
  return {t, u_aux < spec.zero_branch_probability() ? 0.0 : spec.h()};
}

}  // namespace dfpp
