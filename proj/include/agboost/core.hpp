#pragma once

// Domain types and exact metrics over a finite integer universe.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "hadamard.hpp"

namespace agboost {

/// Absolute tolerance for probability comparisons.
inline constexpr double kProbTol = 1e-9;
/// Absolute tolerance for total-mass normalization.
inline constexpr double kMassTol = 1e-12;

/// sign with sign(0) = +1.
constexpr int sign_pm(double x) noexcept { return x >= 0.0 ? 1 : -1; }

// ---------------------------------------------------------------------------
// Dataset

/// Finite labeled sample over the universe [0, universe_size).
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::size_t universe_size, std::vector<std::size_t> points, std::vector<int> labels)
      : universe_size_(universe_size), points_(std::move(points)), labels_(std::move(labels)) {
    detail::require(points_.size() == labels_.size(), "dataset: points and labels differ in length");
    for (std::size_t i = 0; i < points_.size(); ++i) {
      detail::require(points_[i] < universe_size_, "dataset: point " + std::to_string(points_[i]) +
                                                       " outside universe of size " +
                                                       std::to_string(universe_size_));
      detail::require(labels_[i] == 1 || labels_[i] == -1, "dataset: labels must be +1 or -1");
    }
  }

  std::size_t universe_size() const noexcept { return universe_size_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  std::size_t point(std::size_t i) const { return points_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  std::span<const std::size_t> points() const noexcept { return points_; }
  std::span<const int> labels() const noexcept { return labels_; }

  /// Contiguous sub-sample [begin, end).
  Dataset slice(std::size_t begin, std::size_t end) const {
    detail::require(begin <= end && end <= size(), "dataset: slice out of range");
    return Dataset(universe_size_, {points_.begin() + begin, points_.begin() + end},
                   {labels_.begin() + begin, labels_.begin() + end});
  }

  /// Same points, new labels.
  Dataset relabeled(std::vector<int> labels) const { return Dataset(universe_size_, points_, std::move(labels)); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t universe_size_ = 0;
  std::vector<std::size_t> points_;
  std::vector<int> labels_;
};

// ---------------------------------------------------------------------------
// DiscreteDistribution

/// Dense probability table p(x, y) over [N] x {-1, +1}.
class DiscreteDistribution {
 public:
  /// Takes the masses as given; they must already sum to one within kMassTol.
  DiscreteDistribution(std::vector<double> mass_pos, std::vector<double> mass_neg)
      : pos_(std::move(mass_pos)), neg_(std::move(mass_neg)) {
    detail::require(pos_.size() == neg_.size() && !pos_.empty(),
                    "distribution: mass tables must be non-empty and of equal length");
    double total = 0.0;
    for (std::size_t x = 0; x < pos_.size(); ++x) {
      detail::require(pos_[x] >= 0.0 && neg_[x] >= 0.0 && std::isfinite(pos_[x]) && std::isfinite(neg_[x]),
                      "distribution: masses must be finite and non-negative");
      total += pos_[x] + neg_[x];
    }
    detail::require(std::abs(total - 1.0) <= kMassTol,
                    "distribution: total mass " + std::to_string(total) + " is not 1");
  }

  /// Rescales arbitrary non-negative weights to a probability table.
  static DiscreteDistribution normalized(std::vector<double> mass_pos, std::vector<double> mass_neg) {
    detail::require(mass_pos.size() == mass_neg.size(), "distribution: mass tables differ in length");
    double total = 0.0;
    for (std::size_t x = 0; x < mass_pos.size(); ++x) {
      detail::require(mass_pos[x] >= 0.0 && mass_neg[x] >= 0.0, "distribution: masses must be non-negative");
      total += mass_pos[x] + mass_neg[x];
    }
    detail::require(total > 0.0, "distribution: zero total mass");
    for (auto& v : mass_pos) v /= total;
    for (auto& v : mass_neg) v /= total;
    return DiscreteDistribution(std::move(mass_pos), std::move(mass_neg));
  }

  std::size_t universe_size() const noexcept { return pos_.size(); }
  double mass(std::size_t x, int y) const { return y > 0 ? pos_[x] : neg_[x]; }
  double marginal(std::size_t x) const { return pos_[x] + neg_[x]; }
  /// p(x, +1) - p(x, -1).
  double signed_mass(std::size_t x) const { return pos_[x] - neg_[x]; }
  std::span<const double> mass_pos() const noexcept { return pos_; }
  std::span<const double> mass_neg() const noexcept { return neg_; }

  double total_mass() const noexcept {
    double t = 0.0;
    for (std::size_t x = 0; x < pos_.size(); ++x) t += pos_[x] + neg_[x];
    return t;
  }

 private:
  std::vector<double> pos_;
  std::vector<double> neg_;
};

// ---------------------------------------------------------------------------
// Hypotheses

class VotingClassifier;

/// A map from universe points to [-1, 1].
class Hypothesis {
 public:
  struct Table {
    std::vector<double> values;
  };
  struct HadamardBlock {
    BaseClassHandle handle;
    BaseElement element;
  };
  struct Constant {
    double value = 0.0;
  };
  using Voting = std::shared_ptr<const VotingClassifier>;
  using Repr = std::variant<Table, HadamardBlock, Voting, Constant>;

  static Hypothesis table(std::vector<double> values) {
    for (double v : values) detail::require(v >= -1.0 && v <= 1.0, "table hypothesis values must lie in [-1, 1]");
    return Hypothesis(Table{std::move(values)});
  }
  static Hypothesis table(std::span<const int> labels) {
    return Hypothesis(Table{std::vector<double>(labels.begin(), labels.end())});
  }
  static Hypothesis constant(double v) {
    detail::require(v >= -1.0 && v <= 1.0, "constant hypothesis must lie in [-1, 1]");
    return Hypothesis(Constant{v});
  }
  static Hypothesis hadamard(BaseClassHandle handle, BaseElement element) {
    handle.check_element(element);
    return Hypothesis(HadamardBlock{std::move(handle), std::move(element)});
  }
  static Hypothesis voting(VotingClassifier v);

  double operator()(std::size_t x) const;

  /// Size of the universe the hypothesis is tied to, if any.
  std::optional<std::size_t> domain_size() const;

  const Repr& repr() const noexcept { return repr_; }

 private:
  explicit Hypothesis(Repr r) : repr_(std::move(r)) {}
  Repr repr_;
};

/// Normalized convex combination sum(alpha_t h_t) / sum(alpha_t); zero when
/// the total weight is zero.
class VotingClassifier {
 public:
  VotingClassifier() = default;
  VotingClassifier(std::vector<double> alphas, std::vector<Hypothesis> bases)
      : alphas_(std::move(alphas)), bases_(std::move(bases)) {
    detail::require(alphas_.size() == bases_.size(), "voting: alphas and bases differ in length");
    for (double a : alphas_) detail::require(a >= 0.0 && std::isfinite(a), "voting: weights must be finite and >= 0");
  }

  void add(double alpha, Hypothesis h) {
    detail::require(alpha >= 0.0 && std::isfinite(alpha), "voting: weights must be finite and >= 0");
    alphas_.push_back(alpha);
    bases_.push_back(std::move(h));
  }

  std::size_t size() const noexcept { return alphas_.size(); }
  std::span<const double> alphas() const noexcept { return alphas_; }
  std::span<const Hypothesis> bases() const noexcept { return bases_; }

  double total_weight() const noexcept {
    double t = 0.0;
    for (double a : alphas_) t += a;
    return t;
  }

  double operator()(std::size_t x) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t t = 0; t < alphas_.size(); ++t) {
      if (alphas_[t] == 0.0) continue;
      num += alphas_[t] * bases_[t](x);
      den += alphas_[t];
    }
    return den > 0.0 ? num / den : 0.0;
  }

 private:
  std::vector<double> alphas_;
  std::vector<Hypothesis> bases_;
};

inline Hypothesis Hypothesis::voting(VotingClassifier v) {
  return Hypothesis(std::make_shared<const VotingClassifier>(std::move(v)));
}

inline double Hypothesis::operator()(std::size_t x) const {
  return std::visit(
      [x](const auto& r) -> double {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Table>) {
          if (x >= r.values.size()) throw ValidationError("table hypothesis: point outside universe");
          return r.values[x];
        } else if constexpr (std::is_same_v<T, HadamardBlock>) {
          return r.handle.eval(r.element, x);
        } else if constexpr (std::is_same_v<T, Voting>) {
          return (*r)(x);
        } else {
          return r.value;
        }
      },
      repr_);
}

inline std::optional<std::size_t> Hypothesis::domain_size() const {
  return std::visit(
      [](const auto& r) -> std::optional<std::size_t> {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Table>) {
          return r.values.size();
        } else if constexpr (std::is_same_v<T, HadamardBlock>) {
          return r.handle.universe_size();
        } else if constexpr (std::is_same_v<T, Voting>) {
          std::optional<std::size_t> d;
          for (const auto& b : r->bases()) {
            if (auto bd = b.domain_size()) d = d ? std::min(*d, *bd) : bd;
          }
          return d;
        } else {
          return std::nullopt;
        }
      },
      repr_);
}

/// Evaluates h on every point of [0, n).
inline std::vector<double> evaluate_all(const Hypothesis& h, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = h(x);
  return out;
}

/// The binary table x -> sign_pm(h(x)) over [0, n).
inline Hypothesis sign_decode(const Hypothesis& h, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t x = 0; x < n; ++x) out[x] = sign_pm(h(x));
  return Hypothesis::table(std::move(out));
}

namespace detail {

inline void check_domain(const Hypothesis& h, std::size_t universe_size, const char* op) {
  if (auto d = h.domain_size(); d && *d < universe_size)
    throw ValidationError(std::string(op) + ": hypothesis defined on " + std::to_string(*d) +
                          " points but universe has " + std::to_string(universe_size));
}

inline void check_weights(std::span<const double> w, std::size_t m, const char* op) {
  if (w.size() != m)
    throw ValidationError(std::string(op) + ": weight vector has length " + std::to_string(w.size()) +
                          ", expected " + std::to_string(m));
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ValidationError(std::string(op) + ": weights must be non-negative");
    total += v;
  }
  if (std::abs(total - 1.0) > kProbTol) throw ValidationError(std::string(op) + ": weights do not sum to 1");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Metrics

/// Corr_D(h) = E[y h(x)], exact.
inline double correlation(const Hypothesis& h, const DiscreteDistribution& dist) {
  detail::check_domain(h, dist.universe_size(), "correlation");
  double acc = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) {
    if (dist.marginal(x) == 0.0) continue;
    acc += dist.signed_mass(x) * h(x);
  }
  return acc;
}

/// sum_i w_i y_i h(x_i); uniform weights when none are given.
inline double empirical_correlation(const Hypothesis& h, const Dataset& sample,
                                    std::optional<std::span<const double>> weights = std::nullopt) {
  detail::require(!sample.empty(), "empirical_correlation: empty dataset");
  if (weights) detail::check_weights(*weights, sample.size(), "empirical_correlation");
  double acc = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double w = weights ? (*weights)[i] : 1.0;
    acc += w * sample.label(i) * h(sample.point(i));
  }
  return weights ? acc : acc / static_cast<double>(sample.size());
}

/// Number of examples with y * v(x) <= lambda.
inline std::size_t margin_violations(const Hypothesis& v, const Dataset& sample, double lambda) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < sample.size(); ++i)
    if (sample.label(i) * v(sample.point(i)) <= lambda) ++count;
  return count;
}

/// Fraction of examples with y * v(x) <= lambda.
inline double margin_loss(const Hypothesis& v, const Dataset& sample, double lambda) {
  detail::require(lambda >= 0.0, "margin_loss: lambda must be >= 0");
  detail::require(!sample.empty(), "margin_loss: empty dataset");
  return static_cast<double>(margin_violations(v, sample, lambda)) / static_cast<double>(sample.size());
}

/// Pr_D[y * v(x) <= lambda], exact.
inline double margin_loss(const Hypothesis& v, const DiscreteDistribution& dist, double lambda) {
  detail::require(lambda >= 0.0, "margin_loss: lambda must be >= 0");
  detail::check_domain(v, dist.universe_size(), "margin_loss");
  double acc = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) {
    if (dist.marginal(x) == 0.0) continue;
    const double vx = v(x);
    if (vx <= lambda) acc += dist.mass(x, 1);
    if (-vx <= lambda) acc += dist.mass(x, -1);
  }
  return acc;
}

/// Pr_D[h(x) != y] for a binary h; throws if h leaves {-1, +1} on the support.
inline double error_binary(const Hypothesis& h, const DiscreteDistribution& dist) {
  detail::check_domain(h, dist.universe_size(), "error_binary");
  double acc = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) {
    if (dist.marginal(x) == 0.0) continue;
    const double hx = h(x);
    if (hx != 1.0 && hx != -1.0) throw ValidationError("error_binary: hypothesis is not binary on the support");
    acc += hx > 0 ? dist.mass(x, -1) : dist.mass(x, 1);
  }
  return acc;
}

struct BayesResult {
  double error = 0.0;
  Hypothesis witness;
};

/// inf over all binary tables of err_D, with the witness sign_pm(p(x,1) - p(x,-1)).
inline BayesResult bayes_error(const DiscreteDistribution& dist) {
  std::vector<double> table(dist.universe_size());
  double err = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) {
    table[x] = sign_pm(dist.signed_mass(x));
    err += std::min(dist.mass(x, 1), dist.mass(x, -1));
  }
  return {err, Hypothesis::table(std::move(table))};
}

/// sup over all binary tables of Corr_D = sum_x |p(x,1) - p(x,-1)|.
inline double best_table_correlation(const DiscreteDistribution& dist) {
  double acc = 0.0;
  for (std::size_t x = 0; x < dist.universe_size(); ++x) acc += std::abs(dist.signed_mass(x));
  return acc;
}

// ---------------------------------------------------------------------------
// Generalization bound calculator

/// Truncated logarithm ln(max(x, e)).
inline double truncated_log(double x) { return std::log(std::max(x, std::numbers::e)); }

struct BoundParams {
  double d_hat = 1.0;  ///< fat-shattering surrogate, e.g. log2 |B|
  double gamma = 1.0;
  double eps0 = 0.0;
  double delta = 0.05;
  double m = 1.0;
  double C = 1.0;  ///< universal constant; unknown, so user-set
};

struct BetaBound {
  double complexity = 0.0;  ///< d/(theta^2 m) * Ln^{3/2}(theta^2 m / d)
  double confidence = 0.0;  ///< ln(ln m / delta) / m
  double beta = 0.0;        ///< complexity + confidence
  double value = 0.0;       ///< C * beta
};

inline BetaBound beta_bound(const BoundParams& p) {
  detail::require(p.d_hat > 0.0, "beta_bound: d_hat must be positive");
  detail::require(p.gamma > 0.0 && p.gamma <= 1.0, "beta_bound: gamma must lie in (0, 1]");
  detail::require(p.eps0 >= 0.0 && p.eps0 < 1.0, "beta_bound: eps0 must lie in [0, 1)");
  detail::require(p.gamma > p.eps0, "beta_bound: gamma must exceed eps0");
  detail::require(p.delta > 0.0 && p.delta < 1.0, "beta_bound: delta must lie in (0, 1)");
  detail::require(p.m >= 1.0, "beta_bound: m must be >= 1");
  detail::require(p.C > 0.0, "beta_bound: C must be positive");
  const double theta = p.gamma - p.eps0;
  const double ratio = theta * theta * p.m / p.d_hat;
  BetaBound out;
  out.complexity = std::pow(truncated_log(ratio), 1.5) / ratio;
  // ln(ln m / delta) is undefined at m = 1; the argument is floored at 1.
  out.confidence = std::log(std::max(std::log(p.m) / p.delta, 1.0)) / p.m;
  out.beta = out.complexity + out.confidence;
  out.value = p.C * out.beta;
  return out;
}

}  // namespace agboost
