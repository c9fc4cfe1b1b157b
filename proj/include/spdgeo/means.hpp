#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "spdgeo/error.hpp"
#include "spdgeo/matcore.hpp"

namespace spdgeo {

namespace detail {

inline constexpr double kLn2 = 0.69314718055994530942;

/// log|e^z - 1| without overflow or cancellation.
inline double log_abs_expm1(double z) {
  if (z > 0.0) return z + std::log(-std::expm1(-z));
  return std::log(-std::expm1(z));
}

inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(std::string("malformed ") + what + " '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// Operator monotone f with f(1) = 1 standing behind a monotone metric.
class StandardFunctionSpec {
 public:
  enum class Kind { Wyd, SqrtBinomial, LogMean, Arithmetic, Harmonic, Custom };

  /// (Wigner-Yanase-Dyson) f_p(x) = p(1-p)(x-1)^2 / ((x^p - 1)(x^(1-p) - 1)).
  static StandardFunctionSpec wyd(double p) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("WYD parameter must lie in (0,1)");
    return StandardFunctionSpec(Kind::Wyd, p);
  }
  static StandardFunctionSpec sqrt_binomial() { return StandardFunctionSpec(Kind::SqrtBinomial, 0); }
  static StandardFunctionSpec log_mean() { return StandardFunctionSpec(Kind::LogMean, 0); }
  static StandardFunctionSpec arithmetic() { return StandardFunctionSpec(Kind::Arithmetic, 0); }
  static StandardFunctionSpec harmonic() { return StandardFunctionSpec(Kind::Harmonic, 0); }
  static StandardFunctionSpec custom(std::string name, std::function<double(double)> f) {
    StandardFunctionSpec s(Kind::Custom, 0);
    s.custom_ = std::make_shared<const Custom>(Custom{std::move(name), std::move(f)});
    return s;
  }

  Kind kind() const { return kind_; }
  double parameter() const { return p_; }
  const std::string& custom_name() const { return custom_->name; }

  /// ln f(e^L).
  double log_at_log(double L) const {
    switch (kind_) {
      case Kind::Wyd: {
        if (L == 0.0) return 0.0;
        const double a = std::abs(L);
        const double v = std::log(p_ * (1.0 - p_)) + 2.0 * detail::log_abs_expm1(a) -
                         detail::log_abs_expm1(p_ * a) - detail::log_abs_expm1((1.0 - p_) * a);
        return L < 0.0 ? v + L : v;
      }
      case Kind::SqrtBinomial: {
        const double a = std::abs(L);
        const double v = a + 2.0 * std::log1p(std::exp(-0.5 * a)) - 2.0 * detail::kLn2;
        return L < 0.0 ? v + L : v;
      }
      case Kind::LogMean: {
        if (L == 0.0) return 0.0;
        const double a = std::abs(L);
        const double v = detail::log_abs_expm1(a) - std::log(a);
        return L < 0.0 ? v + L : v;
      }
      case Kind::Arithmetic: {
        const double a = std::abs(L);
        const double v = a + std::log1p(std::exp(-a)) - detail::kLn2;
        return L < 0.0 ? v + L : v;
      }
      case Kind::Harmonic: {
        const double a = std::abs(L);
        const double v = detail::kLn2 - std::log1p(std::exp(-a));
        return L < 0.0 ? v + L : v;
      }
      case Kind::Custom: return std::log(custom_->f(std::exp(L)));
    }
    return 0.0;
  }

  double operator()(double x) const {
    if (!(x > 0.0)) {
      if (x == 0.0) return value_at_zero_limit();
      throw DomainError("standard function evaluated at a negative point");
    }
    if (kind_ == Kind::Custom) return custom_->f(x);
    return std::exp(log_at_log(std::log(x)));
  }

 private:
  struct Custom {
    std::string name;
    std::function<double(double)> f;
  };
  StandardFunctionSpec(Kind k, double p) : kind_(k), p_(p) {}

  double value_at_zero_limit() const {
    switch (kind_) {
      case Kind::Wyd: return p_ * (1.0 - p_);
      case Kind::SqrtBinomial: return 0.25;
      case Kind::LogMean: return 0.0;
      case Kind::Arithmetic: return 0.5;
      case Kind::Harmonic: return 0.0;
      case Kind::Custom: return custom_->f(0.0);
    }
    return 0.0;
  }

  Kind kind_;
  double p_;
  std::shared_ptr<const Custom> custom_;
};

/// Symmetric homogeneous mean selector.
class MeanSpec {
 public:
  enum class Kind {
    Arithmetic, Geometric, Logarithmic, Harmonic, Root, Identric,
    Stolarsky, AlphaFamily, FromOperatorMonotone
  };

  static MeanSpec arithmetic() { return MeanSpec(Kind::Arithmetic, 0); }
  static MeanSpec geometric() { return MeanSpec(Kind::Geometric, 0); }
  static MeanSpec logarithmic() { return MeanSpec(Kind::Logarithmic, 0); }
  static MeanSpec harmonic() { return MeanSpec(Kind::Harmonic, 0); }
  /// ((sqrt x + sqrt y)/2)^2
  static MeanSpec root() { return MeanSpec(Kind::Root, 0); }
  static MeanSpec identric() { return MeanSpec(Kind::Identric, 0); }
  /// M_theta(x,y) = (r (x-y)/(x^r - y^r))^(2/theta), r = (2-theta)/2.
  static MeanSpec stolarsky(double theta) {
    if (!std::isfinite(theta)) throw DomainError("Stolarsky parameter must be finite");
    return MeanSpec(Kind::Stolarsky, theta);
  }
  /// N_alpha(x,y) = alpha (xy)^(alpha/2) (x-y)/(x^alpha - y^alpha).
  static MeanSpec alpha_family(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in [0,2]");
    return MeanSpec(Kind::AlphaFamily, alpha);
  }
  /// M(x,y) = y f(x/y).
  static MeanSpec from_operator_monotone(StandardFunctionSpec f) {
    MeanSpec m(Kind::FromOperatorMonotone, 0);
    m.f_ = std::make_shared<const StandardFunctionSpec>(std::move(f));
    return m;
  }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  const StandardFunctionSpec& function() const { return *f_; }

  /// ln M(e^L, 1) for L >= 0.
  double log_ratio_nonneg(double L) const {
    switch (kind_) {
      case Kind::Arithmetic: return L + std::log1p(std::exp(-L)) - detail::kLn2;
      case Kind::Geometric: return 0.5 * L;
      case Kind::Harmonic: return detail::kLn2 - std::log1p(std::exp(-L));
      case Kind::Root: return L + 2.0 * std::log1p(std::exp(-0.5 * L)) - 2.0 * detail::kLn2;
      case Kind::Logarithmic: return log_logarithmic(L);
      case Kind::Identric: return log_identric(L);
      case Kind::Stolarsky: return log_stolarsky(param_, L);
      case Kind::AlphaFamily: {
        if (param_ <= 1e-6) return log_logarithmic(L);
        if (L == 0.0) return 0.0;
        return std::log(param_) + 0.5 * param_ * L + detail::log_abs_expm1(L) -
               detail::log_abs_expm1(param_ * L);
      }
      case Kind::FromOperatorMonotone: return f_->log_at_log(L);
    }
    return 0.0;
  }

  /// ln M(e^L, 1) for any real L.
  double log_ratio(double L) const {
    return L < 0.0 ? log_ratio_nonneg(-L) + L : log_ratio_nonneg(L);
  }

  /// ln M(x, y).
  double log_eval(double x, double y) const {
    if (!(x > 0.0 && y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw DomainError("means are defined on positive finite reals");
    const double hi = std::max(x, y), lo = std::min(x, y);
    const double q = hi / lo;
    const double L = std::isfinite(q) ? std::log(q) : std::log(hi) - std::log(lo);
    return std::log(lo) + log_ratio_nonneg(L);
  }

  double operator()(double x, double y) const {
    if (!(x > 0.0 && y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
      throw DomainError("means are defined on positive finite reals");
    const double hi = std::max(x, y), lo = std::min(x, y);
    const double q = hi / lo;
    if (std::isfinite(q) && q < 1e300) return lo * std::exp(log_ratio_nonneg(std::log(q)));
    return std::exp(log_eval(x, y));
  }

  friend bool operator==(const MeanSpec& a, const MeanSpec& b) {
    if (a.kind_ != b.kind_) return false;
    if (a.kind_ == Kind::FromOperatorMonotone) {
      const auto& fa = *a.f_;
      const auto& fb = *b.f_;
      if (fa.kind() != fb.kind()) return false;
      if (fa.kind() == StandardFunctionSpec::Kind::Custom) return a.f_ == b.f_;
      return std::bit_cast<std::uint64_t>(fa.parameter()) ==
             std::bit_cast<std::uint64_t>(fb.parameter());
    }
    return std::bit_cast<std::uint64_t>(a.param_) == std::bit_cast<std::uint64_t>(b.param_);
  }

 private:
  MeanSpec(Kind k, double p) : kind_(k), param_(p) {}

  static double log_logarithmic(double L) {
    if (L == 0.0) return 0.0;
    return detail::log_abs_expm1(L) - std::log(L);
  }

  static double log_identric(double L) {
    if (L <= 1e-5) return 0.5 * L + L * L / 12.0;
    return L / (-std::expm1(-L)) - 1.0;
  }

  static double log_stolarsky(double theta, double L) {
    if (L == 0.0) return 0.0;
    if (L * std::max(1.0, std::abs(theta)) <= 1e-5) return 0.5 * L + (4.0 - theta) * L * L / 48.0;
    if (std::abs(theta) <= 1e-5) {
      // second-order expansion around the identric mean
      const double half = 0.5 * L;
      const double sh = std::sinh(half);
      const double d2 = -1.0 + L * L / (4.0 * sh * sh);
      const double d3 = 2.0 - L * L * L / (std::tanh(half) * 4.0 * sh * sh);
      return log_identric(L) + d2 * theta / 4.0 - d3 * theta * theta / 24.0;
    }
    const double r = 0.5 * (2.0 - theta);
    if (r == 0.0) return log_logarithmic(L);
    if (std::abs(theta) <= 1.0 && std::abs(theta) * L <= 2.0) {
      // ln((e^{rL} - 1)/(e^L - 1)) written as a log1p
      const double ratio = std::log1p(std::expm1(-0.5 * theta * L) / -std::expm1(-L));
      return 2.0 / theta * (std::log1p(-0.5 * theta) - ratio);
    }
    if (std::abs(theta) <= 1.0) {
      // (r - 1) L = -theta L / 2 taken out exactly
      return 2.0 / theta * (std::log1p(-0.5 * theta) + std::log(-std::expm1(-L)) - std::log(-std::expm1(-r * L))) + L;
    }
    const double log_base =
        std::log(std::abs(r)) + detail::log_abs_expm1(L) - detail::log_abs_expm1(r * L);
    return 2.0 / theta * log_base;
  }

  Kind kind_;
  double param_;
  std::shared_ptr<const StandardFunctionSpec> f_;
};

inline double mean_eval(const MeanSpec& m, double x, double y) { return m(x, y); }

inline double f_wyd(double p, double x) { return StandardFunctionSpec::wyd(p)(x); }

/// Kernel phi(x, y) = M(x, y)^theta.
struct KernelSpec {
  MeanSpec mean;
  double theta;

  double log_eval(double x, double y) const { return theta * mean.log_eval(x, y); }
  double operator()(double x, double y) const {
    if (x == y) {
      if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("kernel evaluated off the positive axis");
      return std::exp(theta * std::log(x));
    }
    return std::exp(log_eval(x, y));
  }
  friend bool operator==(const KernelSpec& a, const KernelSpec& b) {
    return a.mean == b.mean &&
           std::bit_cast<std::uint64_t>(a.theta) == std::bit_cast<std::uint64_t>(b.theta);
  }
};

/// phi_theta = M_theta^theta, the kernel whose geometry is Euclidean in the
/// coordinates x^((2-theta)/2).
inline KernelSpec theta_kernel(double theta) { return {MeanSpec::stolarsky(theta), theta}; }

inline double kernel_eval(const KernelSpec& k, double x, double y) { return k(x, y); }

/// Positive symmetric kernel, either a mean power or an arbitrary evaluator
/// of ln phi (used for pull-backs).
class Kernel {
 public:
  Kernel(KernelSpec spec) : spec_(std::move(spec)) {}  // NOLINT implicit on purpose

  static Kernel custom(std::string name, std::function<double(double, double)> log_phi) {
    Kernel k;
    k.name_ = std::move(name);
    k.log_phi_ = std::move(log_phi);
    return k;
  }

  const std::optional<KernelSpec>& spec() const { return spec_; }

  double log_eval(double x, double y) const {
    return spec_ ? spec_->log_eval(x, y) : log_phi_(x, y);
  }
  double operator()(double x, double y) const {
    return spec_ ? (*spec_)(x, y) : std::exp(log_phi_(x, y));
  }

  /// d/dx ln phi(x, y), by a Richardson-extrapolated central difference
  /// in ln x.
  double log_partial_x(double x, double y) const {
    const double h = 1e-3;
    auto central = [&](double s) {
      return (log_eval(x * std::exp(s), y) - log_eval(x * std::exp(-s), y)) / (2.0 * s);
    };
    return (4.0 * central(h / 2.0) - central(h)) / (3.0 * x);
  }

 private:
  Kernel() = default;
  std::optional<KernelSpec> spec_;
  std::string name_;
  std::function<double(double, double)> log_phi_;
};

/// 64 log-spaced points on [1e-4, 1e4].
inline std::vector<double> default_grid(int points = 64, double lo = 1e-4, double hi = 1e4) {
  std::vector<double> g(static_cast<std::size_t>(points));
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i)
    g[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / (points - 1));
  return g;
}

struct AxiomViolation {
  int axiom;  // 1 symmetry, 2 homogeneity, 3 monotonicity, 4 betweenness
  double x;
  double y;
  double excess;
};

struct MeanAxiomReport {
  std::vector<AxiomViolation> violations;
  bool ok() const { return violations.empty(); }
  bool violates(int axiom) const {
    for (const auto& v : violations)
      if (v.axiom == axiom) return true;
    return false;
  }
};

/// Checks symmetry, homogeneity, monotonicity and betweenness on all grid
/// pairs with relative slack 1e-12.
inline MeanAxiomReport check_mean_axioms(const std::function<double(double, double)>& m,
                                         const std::vector<double>& grid = default_grid()) {
  constexpr double tol = 1e-12;
  MeanAxiomReport rep;
  auto flag = [&](int ax, double x, double y, double excess) {
    rep.violations.push_back({ax, x, y, excess});
  };
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double x = grid[i], y = grid[j];
      const double v = m(x, y);
      const double scale = std::abs(v);
      if (double e = std::abs(v - m(y, x)); e > tol * scale) flag(1, x, y, e);
      for (double a : {0.5, 3.0, 10.0}) {
        if (double e = std::abs(m(a * x, a * y) - a * v); e > tol * a * scale) flag(2, x, y, e);
      }
      if (i + 1 < grid.size()) {
        const double next = m(grid[i + 1], y);
        if (next < v * (1.0 - tol)) flag(3, x, y, v - next);
      }
      const double lo = std::min(x, y), hi = std::max(x, y);
      if (v < lo * (1.0 - tol)) flag(4, x, y, lo - v);
      if (v > hi * (1.0 + tol)) flag(4, x, y, v - hi);
    }
  }
  return rep;
}

inline MeanAxiomReport check_mean_axioms(const MeanSpec& mean,
                                         const std::vector<double>& grid = default_grid()) {
  return check_mean_axioms([&](double x, double y) { return mean(x, y); }, grid);
}

enum class Dominance { Dominates, Dominated, Incomparable, Equal };

inline const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::Dominates: return "dominates";
    case Dominance::Dominated: return "dominated";
    case Dominance::Incomparable: return "incomparable";
    case Dominance::Equal: return "equal";
  }
  return "";
}

/// Compares phi1 and phi2 on all grid pairs with relative slack 1e-12.
/// Dominated means phi1 <= phi2 everywhere.
inline Dominance pointwise_dominates(const Kernel& k1, const Kernel& k2,
                                     const std::vector<double>& grid = default_grid()) {
  constexpr double slack = 1e-12;
  bool below = false, above = false;
  for (double x : grid) {
    for (double y : grid) {
      const double a = k1.log_eval(x, y), b = k2.log_eval(x, y);
      if (a < b - slack) below = true;
      if (a > b + slack) above = true;
    }
  }
  if (below && above) return Dominance::Incomparable;
  if (below) return Dominance::Dominated;
  if (above) return Dominance::Dominates;
  return Dominance::Equal;
}

/// Same comparison for the means themselves.
inline Dominance mean_dominates(const MeanSpec& m1, const MeanSpec& m2,
                                const std::vector<double>& grid = default_grid()) {
  return pointwise_dominates(KernelSpec{m1, 1.0}, KernelSpec{m2, 1.0}, grid);
}

struct PdVerdict {
  bool pass = true;
  int trial = -1;
  std::vector<double> points;
  double min_eigenvalue = 0.0;
  double max_eigenvalue = 0.0;
};

namespace detail {

inline PdVerdict gram_verdict(const RMatrix& g, std::vector<double> points, int trial) {
  Eigen::SelfAdjointEigenSolver<RMatrix> solver(g, Eigen::EigenvaluesOnly);
  PdVerdict v;
  v.min_eigenvalue = solver.eigenvalues()(0);
  v.max_eigenvalue = solver.eigenvalues()(g.rows() - 1);
  v.pass = v.min_eigenvalue >= -1e-10 * std::abs(v.max_eigenvalue);
  v.trial = trial;
  v.points = std::move(points);
  return v;
}

}  // namespace detail

/// Tests whether t -> (M1(e^t,1)/M2(e^t,1))^r is a positive definite
/// function through Gram matrices [g(t_i - t_j)].
///
/// Trial 0 uses `sample_points`; every further trial draws the same number
/// of points uniformly from their range, seeded by (seed, trial). The first
/// failing trial is returned as the witness.
inline PdVerdict ratio_positive_definite(const MeanSpec& m1, const MeanSpec& m2, double r,
                                         const std::vector<double>& sample_points, int trials,
                                         std::uint64_t seed = 0) {
  if (sample_points.size() < 2) throw PreconditionError("need at least two sample points");
  if (trials < 1) throw PreconditionError("need at least one trial");
  const double lo = *std::min_element(sample_points.begin(), sample_points.end());
  const double hi = *std::max_element(sample_points.begin(), sample_points.end());
  auto g = [&](double t) { return std::exp(r * (m1.log_ratio(t) - m2.log_ratio(t))); };
  PdVerdict last;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> pts = sample_points;
    if (trial > 0) {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(trial)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> unif(lo, hi);
      for (double& p : pts) p = unif(rng);
    }
    const Index n = static_cast<Index>(pts.size());
    RMatrix gram(n, n);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j)
        gram(i, j) = g(pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(j)]);
    last = detail::gram_verdict(gram, std::move(pts), trial);
    if (!last.pass) return last;
  }
  return last;
}

/// M(., 1) as a scalar map with an accurate numerical derivative.
inline ScalarMap mean_as_function(const MeanSpec& m) {
  auto f = [m](double x) { return m(x, 1.0); };
  auto df = [m](double x) {
    const double L = std::log(x);
    auto central = [&](double h) { return (m.log_ratio(L + h) - m.log_ratio(L - h)) / (2.0 * h); };
    const double slope = (4.0 * central(5e-4) - central(1e-3)) / 3.0;
    return m(x, 1.0) * slope / x;
  };
  return ScalarMap::custom("mean(x,1)", f, df, [](double x) { return x > 0.0; });
}

/// Loewner matrix [f^[1](x_i, x_j)] positivity test (operator monotonicity
/// of order n on the given points).
inline PdVerdict loewner_psd(const ScalarMap& f, const std::vector<double>& points) {
  if (points.empty()) throw PreconditionError("need at least one point");
  const Index n = static_cast<Index>(points.size());
  RMatrix l(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      l(i, j) = divided_difference(f, points[static_cast<std::size_t>(i)],
                                   points[static_cast<std::size_t>(j)]);
  return detail::gram_verdict(l, points, 0);
}

// ---------------------------------------------------------------------------
// Text grammar: MEAN[:param] for means, MEAN[:param]^THETA for kernels.

inline std::string format_mean(const MeanSpec& m) {
  using K = MeanSpec::Kind;
  switch (m.kind()) {
    case K::Arithmetic: return "arithmetic";
    case K::Geometric: return "geometric";
    case K::Logarithmic: return "logarithmic";
    case K::Harmonic: return "harmonic";
    case K::Root: return "root";
    case K::Identric: return "identric";
    case K::Stolarsky: return "stolarsky:" + detail::format_double(m.parameter());
    case K::AlphaFamily: return "alpha:" + detail::format_double(m.parameter());
    case K::FromOperatorMonotone: {
      const auto& f = m.function();
      using F = StandardFunctionSpec::Kind;
      switch (f.kind()) {
        case F::Wyd: return "wyd:" + detail::format_double(f.parameter());
        case F::SqrtBinomial: return "sqrtbinomial";
        case F::LogMean: return "logmeanf";
        case F::Arithmetic: return "arithf";
        case F::Harmonic: return "harmf";
        case F::Custom: throw ParseError("custom function '" + f.custom_name() + "' has no text form");
      }
    }
  }
  return "";
}

inline MeanSpec parse_mean(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  const bool has_param = colon != std::string_view::npos;
  const std::string_view param = has_param ? text.substr(colon + 1) : std::string_view{};
  auto no_param = [&](MeanSpec m) {
    if (has_param) throw ParseError("mean '" + std::string(name) + "' takes no parameter");
    return m;
  };
  auto need = [&]() {
    if (!has_param) throw ParseError("mean '" + std::string(name) + "' needs a parameter");
    return detail::parse_double(param, "mean parameter");
  };
  if (name == "arithmetic") return no_param(MeanSpec::arithmetic());
  if (name == "geometric") return no_param(MeanSpec::geometric());
  if (name == "logarithmic") return no_param(MeanSpec::logarithmic());
  if (name == "harmonic") return no_param(MeanSpec::harmonic());
  if (name == "root") return no_param(MeanSpec::root());
  if (name == "identric") return no_param(MeanSpec::identric());
  if (name == "stolarsky") return MeanSpec::stolarsky(need());
  if (name == "alpha") return MeanSpec::alpha_family(need());
  if (name == "wyd") return MeanSpec::from_operator_monotone(StandardFunctionSpec::wyd(need()));
  if (name == "sqrtbinomial")
    return no_param(MeanSpec::from_operator_monotone(StandardFunctionSpec::sqrt_binomial()));
  if (name == "logmeanf")
    return no_param(MeanSpec::from_operator_monotone(StandardFunctionSpec::log_mean()));
  if (name == "arithf")
    return no_param(MeanSpec::from_operator_monotone(StandardFunctionSpec::arithmetic()));
  if (name == "harmf")
    return no_param(MeanSpec::from_operator_monotone(StandardFunctionSpec::harmonic()));
  throw ParseError("unknown mean '" + std::string(name) + "'");
}

inline std::string format_kernel(const KernelSpec& k) {
  return format_mean(k.mean) + "^" + detail::format_double(k.theta);
}

inline KernelSpec parse_kernel(std::string_view text) {
  const auto caret = text.rfind('^');
  if (caret == std::string_view::npos) throw ParseError("kernel spec needs '^THETA'");
  return {parse_mean(text.substr(0, caret)),
          detail::parse_double(text.substr(caret + 1), "kernel exponent")};
}

}  // namespace spdgeo
