#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "spdgeo/error.hpp"
#include "spdgeo/matcore.hpp"
#include "spdgeo/means.hpp"
#include "spdgeo/metric.hpp"
#include "spdgeo/quadrature.hpp"

namespace spdgeo {

/// Closed-form geodesic families.
///
///   Theta(theta)   ((1-t)A^r + tB^r)^(1/r), r = (2-theta)/2, exp-log at theta = 2
///   Alpha(alpha)   (A^alpha #_t B^alpha)^(1/alpha)
///   FisherRao      A #_t B
///   CommutingSqrt  ((1-t)A^(1/2) + tB^(1/2))^2
class GeodesicFamily {
 public:
  enum class Kind { Theta, Alpha, FisherRao, CommutingSqrt };

  static GeodesicFamily theta(double theta) {
    if (!std::isfinite(theta)) throw DomainError("theta must be finite");
    return GeodesicFamily(Kind::Theta, theta);
  }
  static GeodesicFamily alpha(double alpha) {
    if (!(alpha > 0.0 && alpha <= 2.0)) throw DomainError("alpha must lie in (0,2]");
    return GeodesicFamily(Kind::Alpha, alpha);
  }
  static GeodesicFamily fisher_rao() { return GeodesicFamily(Kind::FisherRao, 1.0); }
  static GeodesicFamily commuting_sqrt() { return GeodesicFamily(Kind::CommutingSqrt, 0.0); }

  Kind kind() const { return kind_; }
  double parameter() const { return param_; }

  /// Kernel for which this family is the (HS) geodesic.
  KernelSpec kernel() const {
    switch (kind_) {
      case Kind::Theta: return theta_kernel(param_);
      case Kind::Alpha: return {MeanSpec::alpha_family(param_), 2.0};
      case Kind::FisherRao: return {MeanSpec::geometric(), 2.0};
      case Kind::CommutingSqrt: return theta_kernel(1.0);
    }
    return theta_kernel(2.0);
  }

  std::string name() const {
    switch (kind_) {
      case Kind::Theta: return "theta:" + detail::format_double(param_);
      case Kind::Alpha: return "alpha:" + detail::format_double(param_);
      case Kind::FisherRao: return "fisher";
      case Kind::CommutingSqrt: return "commuting";
    }
    return "";
  }

 private:
  GeodesicFamily(Kind k, double p) : kind_(k), param_(p) {}
  Kind kind_;
  double param_;
};

inline GeodesicFamily parse_family(std::string_view text) {
  if (text == "fisher") return GeodesicFamily::fisher_rao();
  if (text == "commuting") return GeodesicFamily::commuting_sqrt();
  const auto colon = text.find(':');
  if (colon != std::string_view::npos) {
    const auto head = text.substr(0, colon);
    const double v = detail::parse_double(text.substr(colon + 1), "family parameter");
    if (head == "theta") return GeodesicFamily::theta(v);
    if (head == "alpha") return GeodesicFamily::alpha(v);
  }
  throw ParseError("unknown geodesic family '" + std::string(text) + "'");
}

struct CurvePoint {
  CMatrix point;
  CMatrix velocity;
};

/// Differentiable curve t -> gamma(t) in the positive cone, evaluated
/// together with its velocity. Polylines are piecewise linear between
/// breakpoints and are integrated segment by segment.
class Curve {
 public:
  using Evaluator = std::function<CurvePoint(double)>;

  Curve(Index dim, Evaluator eval, std::vector<double> breakpoints = {0.0, 1.0},
        bool polyline = false)
      : dim_(dim), eval_(std::move(eval)), breaks_(std::move(breakpoints)), polyline_(polyline) {}

  CurvePoint operator()(double t) const { return eval_(t); }
  Index dim() const { return dim_; }
  const std::vector<double>& breakpoints() const { return breaks_; }
  bool is_polyline() const { return polyline_; }
  double start() const { return breaks_.front(); }
  double end() const { return breaks_.back(); }

 private:
  Index dim_;
  Evaluator eval_;
  std::vector<double> breaks_;
  bool polyline_;
};

struct Polyline {
  std::vector<CMatrix> nodes;
  std::vector<double> times;
};

inline Curve polyline_curve(const Polyline& poly) {
  if (poly.nodes.size() < 2) throw PreconditionError("a polyline needs at least two nodes");
  auto shared = std::make_shared<Polyline>(poly);
  if (shared->times.empty()) {
    const auto m = shared->nodes.size() - 1;
    for (std::size_t k = 0; k <= m; ++k) shared->times.push_back(static_cast<double>(k) / m);
  }
  if (shared->times.size() != shared->nodes.size())
    throw PreconditionError("polyline times and nodes differ in count");
  const Index n = shared->nodes.front().rows();
  for (const auto& x : shared->nodes)
    if (x.rows() != n || x.cols() != n) throw DimensionError("polyline nodes differ in size");
  for (std::size_t k = 1; k < shared->times.size(); ++k)
    if (!(shared->times[k] > shared->times[k - 1])) throw PreconditionError("polyline times must increase");
  return Curve(
      n,
      [shared](double t) {
        const auto& ts = shared->times;
        std::size_t k = 0;
        while (k + 2 < ts.size() && t > ts[k + 1]) ++k;
        const double h = ts[k + 1] - ts[k];
        const double s = (t - ts[k]) / h;
        const CMatrix& a = shared->nodes[k];
        const CMatrix& b = shared->nodes[k + 1];
        return CurvePoint{a + s * (b - a), (b - a) / h};
      },
      shared->times, true);
}

namespace detail {

inline CurvePoint apply_map_at(const ScalarMap& f, const CMatrix& x, const CMatrix& v) {
  const Spectrum s = decompose(x, kClusterTol);
  CurvePoint out;
  out.point = s.reconstruct(map_values(s, f));
  out.velocity = schur_in_frame(s, loewner_matrix(s, f), v);
  return out;
}

struct ThetaData {
  double r;
  CMatrix start;
  CMatrix step;
};

struct AlphaData {
  double alpha;
  CMatrix half;  // A^(alpha/2)
  Spectrum z;    // A^(-alpha/2) B^alpha A^(-alpha/2)
};

}  // namespace detail

/// The closed-form curve of a family joining A (t = 0) to B (t = 1).
inline Curve geodesic_curve(const GeodesicFamily& family, const SpdMatrix& a, const SpdMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("geodesic endpoints differ in size");
  const Index n = a.dim();
  switch (family.kind()) {
    case GeodesicFamily::Kind::Theta: {
      const double r = 0.5 * (2.0 - family.parameter());
      auto data = std::make_shared<detail::ThetaData>();
      data->r = r;
      const ScalarMap fwd = ScalarMap::box_cox(r);
      data->start = apply_scalar_function(a, fwd).matrix();
      data->step = apply_scalar_function(b, fwd).matrix() - data->start;
      return Curve(n, [data](double t) {
        return detail::apply_map_at(ScalarMap::inverse_box_cox(data->r),
                                    data->start + t * data->step, data->step);
      });
    }
    case GeodesicFamily::Kind::Alpha:
    case GeodesicFamily::Kind::FisherRao: {
      const double alpha = family.parameter();
      auto data = std::make_shared<detail::AlphaData>();
      data->alpha = alpha;
      data->half = apply_scalar_function(a, ScalarMap::power(0.5 * alpha)).matrix();
      const CMatrix inv_half = apply_scalar_function(a, ScalarMap::power(-0.5 * alpha)).matrix();
      const CMatrix b_alpha = alpha == 1.0 ? b.matrix()
                                           : apply_scalar_function(b, ScalarMap::power(alpha)).matrix();
      data->z = detail::decompose(detail::hermitian_part(inv_half * b_alpha * inv_half), kClusterTol);
      return Curve(n, [data](double t) {
        const Spectrum& z = data->z;
        RVector zt(z.dim()), ztl(z.dim());
        for (Index i = 0; i < z.dim(); ++i) {
          const double lz = std::log(z.eigenvalues(i));
          zt(i) = std::exp(t * lz);
          ztl(i) = zt(i) * lz;
        }
        const CMatrix y = detail::hermitian_part(data->half * z.reconstruct(zt) * data->half);
        const CMatrix dy = detail::hermitian_part(data->half * z.reconstruct(ztl) * data->half);
        if (data->alpha == 1.0) return CurvePoint{y, dy};
        return detail::apply_map_at(ScalarMap::power(1.0 / data->alpha), y, dy);
      });
    }
    case GeodesicFamily::Kind::CommutingSqrt: {
      const CMatrix ra = apply_scalar_function(a, ScalarMap::power(0.5)).matrix();
      const CMatrix rb = apply_scalar_function(b, ScalarMap::power(0.5)).matrix();
      const CMatrix d = rb - ra;
      return Curve(n, [ra, d](double t) {
        const CMatrix xi = ra + t * d;
        return CurvePoint{xi * xi, xi * d + d * xi};
      });
    }
  }
  throw PreconditionError("unknown geodesic family");
}

/// gamma(t)^{-1}.
inline Curve inverse_curve(const Curve& c) {
  return Curve(c.dim(), [c](double t) {
    const CurvePoint p = c(t);
    return detail::apply_map_at(ScalarMap::power(-1.0), p.point, p.velocity);
  }, c.breakpoints(), c.is_polyline());
}

/// scale * g(gamma(t)).
inline Curve mapped_curve(const Curve& c, const ScalarMap& g, double scale = 1.0) {
  return Curve(c.dim(), [c, g, scale](double t) {
    const CurvePoint base = c(t);
    CurvePoint p = detail::apply_map_at(g, base.point, base.velocity);
    p.point *= scale;
    p.velocity *= scale;
    return p;
  }, c.breakpoints(), c.is_polyline());
}

inline SpdMatrix geodesic_point(const GeodesicFamily& family, const SpdMatrix& a, const SpdMatrix& b,
                                double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("geodesic parameter must lie in [0,1]");
  return SpdMatrix(HermitianMatrix::symmetrized(geodesic_curve(family, a, b)(t).point));
}

inline double closed_form_distance(const GeodesicFamily& family, const SpdMatrix& a, const SpdMatrix& b,
                                   const NormSpec& norm = NormSpec::hilbert_schmidt()) {
  if (a.dim() != b.dim()) throw DimensionError("distance endpoints differ in size");
  switch (family.kind()) {
    case GeodesicFamily::Kind::Theta: {
      const ScalarMap f = ScalarMap::box_cox(0.5 * (2.0 - family.parameter()));
      return ui_norm(apply_scalar_function(b, f) - apply_scalar_function(a, f), norm);
    }
    case GeodesicFamily::Kind::Alpha:
    case GeodesicFamily::Kind::FisherRao: {
      const double alpha = family.parameter();
      const CMatrix inv_half = apply_scalar_function(a, ScalarMap::power(-0.5 * alpha)).matrix();
      const CMatrix b_alpha = alpha == 1.0 ? b.matrix()
                                           : apply_scalar_function(b, ScalarMap::power(alpha)).matrix();
      const HermitianMatrix z = HermitianMatrix::symmetrized(inv_half * b_alpha * inv_half);
      return ui_norm(apply_scalar_function(z, ScalarMap::log()), norm) / alpha;
    }
    case GeodesicFamily::Kind::CommutingSqrt: {
      const ScalarMap f = ScalarMap::power(0.5);
      return 2.0 * ui_norm(apply_scalar_function(b, f) - apply_scalar_function(a, f), norm);
    }
  }
  throw PreconditionError("unknown geodesic family");
}

inline constexpr int kClosedFormQuadrature = 64;
inline constexpr int kPolylineQuadrature = 8;

namespace detail {

inline QuadratureRule rule_for(const Curve& c, int q) {
  QuadratureRule rule;
  const auto& br = c.breakpoints();
  for (std::size_t k = 0; k + 1 < br.size(); ++k) {
    QuadratureRule part;
    if (c.is_polyline()) {
      part = composite_rule(br[k], br[k + 1], 1, q);
    } else if (q % 8 == 0) {
      part = composite_rule(br[k], br[k + 1], q / 8, 8);
    } else {
      part = composite_rule(br[k], br[k + 1], 1, q);
    }
    rule.nodes.insert(rule.nodes.end(), part.nodes.begin(), part.nodes.end());
    rule.weights.insert(rule.weights.end(), part.weights.begin(), part.weights.end());
  }
  return rule;
}

inline std::vector<double> abs_eigenvalues(const CMatrix& y) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(y), Eigen::EigenvaluesOnly);
  std::vector<double> s(static_cast<std::size_t>(y.rows()));
  for (Index i = 0; i < y.rows(); ++i) s[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  return s;
}

}  // namespace detail

/// Lengths of one curve under several kernels and norms, sharing the
/// eigendecompositions: result[k][m] is the length for kernels[k], norms[m].
///
/// Closed-form curves use composite 8-point Gauss-Legendre panels with
/// `quadrature_points` nodes in total (a single rule when not divisible by
/// 8); polylines use `quadrature_points` nodes per segment.
inline std::vector<std::vector<double>> curve_lengths(const std::vector<Kernel>& kernels, const Curve& curve,
                                                      const std::vector<NormSpec>& norms,
                                                      int quadrature_points) {
  if (quadrature_points < 1) throw DomainError("quadrature needs at least one point");
  const QuadratureRule rule = detail::rule_for(curve, quadrature_points);
  std::vector<std::vector<double>> out(kernels.size(), std::vector<double>(norms.size(), 0.0));
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const CurvePoint p = curve(rule.nodes[q]);
    const Spectrum s = detail::decompose(detail::hermitian_part(p.point), kClusterTol);
    if (!(s.eigenvalues(0) > 0.0))
      throw DomainError("curve leaves the positive definite cone");
    const CMatrix vt = s.to_frame(p.velocity);
    for (std::size_t k = 0; k < kernels.size(); ++k) {
      const KernelOperator op(kernels[k], s);
      CMatrix y = vt;
      y.array() *= op.coefficients(-0.5).cast<Complex>().array();
      std::vector<double> sv;
      for (std::size_t m = 0; m < norms.size(); ++m) {
        if (norms[m].kind() == NormSpec::Kind::HilbertSchmidt) {
          out[k][m] += rule.weights[q] * y.norm();
          continue;
        }
        if (sv.empty()) sv = detail::abs_eigenvalues(y);
        out[k][m] += rule.weights[q] * norms[m].from_singular_values(sv);
      }
    }
  }
  return out;
}

/// HS lengths of one curve under several kernels by adaptive bisection:
/// each panel's 8-point Gauss value is replaced by the sum over its halves
/// until the two agree, for every kernel, to rel_tol times the length
/// scaled by the panel's share of the parameter range (or to roundoff).
/// At most max_panels bisections are made.
inline std::vector<double> adaptive_curve_lengths(const std::vector<Kernel>& kernels, const Curve& curve,
                                                  double rel_tol = 1e-12, int max_depth = 48,
                                                  long max_panels = 4096) {
  if (!(rel_tol > 0.0)) throw DomainError("adaptive quadrature needs a positive tolerance");
  const QuadratureRule& gl = gauss_legendre(8);
  const std::size_t nk = kernels.size();
  auto panel = [&](double a, double b) {
    std::vector<double> sum(nk, 0.0);
    for (std::size_t q = 0; q < gl.nodes.size(); ++q) {
      const CurvePoint p = curve(a + (b - a) * gl.nodes[q]);
      const Spectrum s = detail::decompose(detail::hermitian_part(p.point), kClusterTol);
      if (!(s.eigenvalues(0) > 0.0)) throw DomainError("curve leaves the positive definite cone");
      const CMatrix vt = s.to_frame(p.velocity);
      for (std::size_t k = 0; k < nk; ++k) {
        CMatrix y = vt;
        y.array() *= KernelOperator(kernels[k], s).coefficients(-0.5).cast<Complex>().array();
        sum[k] += (b - a) * gl.weights[q] * y.norm();
      }
    }
    return sum;
  };

  struct Piece {
    double a, b;
    std::vector<double> value;
    int depth;
  };
  const auto& br = curve.breakpoints();
  const double span = curve.end() - curve.start();
  std::vector<Piece> work;
  std::vector<double> scale(nk, 0.0);
  for (std::size_t j = 0; j + 1 < br.size(); ++j) {
    for (int p = 0; p < 8; ++p) {
      const double a = br[j] + (br[j + 1] - br[j]) * p / 8.0, b = br[j] + (br[j + 1] - br[j]) * (p + 1) / 8.0;
      work.push_back({a, b, panel(a, b), 0});
      for (std::size_t k = 0; k < nk; ++k) scale[k] += work.back().value[k];
    }
  }
  std::vector<double> total(nk, 0.0);
  long splits = 0;
  while (!work.empty()) {
    Piece w = std::move(work.back());
    work.pop_back();
    const double m = 0.5 * (w.a + w.b);
    std::vector<double> left = panel(w.a, m), right = panel(m, w.b);
    bool done = w.depth >= max_depth || ++splits > max_panels;
    if (!done) {
      done = true;
      for (std::size_t k = 0; k < nk && done; ++k) {
        const double fine = left[k] + right[k];
        const double allowed = std::max(rel_tol * scale[k] * (w.b - w.a) / span,
                                        64.0 * std::numeric_limits<double>::epsilon() * fine);
        if (std::abs(fine - w.value[k]) > allowed) done = false;
      }
    }
    if (done) {
      for (std::size_t k = 0; k < nk; ++k) total[k] += left[k] + right[k];
    } else {
      work.push_back({w.a, m, std::move(left), w.depth + 1});
      work.push_back({m, w.b, std::move(right), w.depth + 1});
    }
  }
  return total;
}

inline double curve_length(const Kernel& kernel, const Curve& curve,
                           const NormSpec& norm = NormSpec::hilbert_schmidt(), int quadrature_points = 0) {
  if (quadrature_points == 0)
    quadrature_points = curve.is_polyline() ? kPolylineQuadrature : kClosedFormQuadrature;
  return curve_lengths({kernel}, curve, {norm}, quadrature_points)[0][0];
}

/// Weighted power mean Q_r(sum_j w_j P_r(A_j)), the theta-geodesic
/// barycentre; exp(sum_j w_j log A_j) at theta = 2.
inline SpdMatrix power_mean_multi(double theta, const std::vector<SpdMatrix>& mats,
                                  std::vector<double> weights = {}) {
  if (mats.empty()) throw PreconditionError("power mean of an empty list");
  if (weights.empty()) weights.assign(mats.size(), 1.0 / static_cast<double>(mats.size()));
  if (weights.size() != mats.size()) throw PreconditionError("weights and matrices differ in count");
  const double r = 0.5 * (2.0 - theta);
  const Index n = mats.front().dim();
  CMatrix acc = CMatrix::Zero(n, n);
  for (std::size_t j = 0; j < mats.size(); ++j) {
    if (mats[j].dim() != n) throw DimensionError("power mean inputs differ in size");
    acc += weights[j] * apply_scalar_function(mats[j], ScalarMap::box_cox(r)).matrix();
  }
  return SpdMatrix(apply_scalar_function(HermitianMatrix::symmetrized(acc), ScalarMap::inverse_box_cox(r)));
}

struct KarcherResult {
  SpdMatrix mean;
  int iterations;
  double gradient_norm;
};

/// Karcher (Fisher-Rao barycentre) mean of A_j^alpha, returned as its
/// alpha-th root. Fixed point X <- X^(1/2) exp(tau mean_j log(X^(-1/2) A_j^alpha X^(-1/2))) X^(1/2)
/// started at the log-Euclidean mean, halving tau whenever the objective
/// sum_j delta_FR(X, A_j^alpha)^2 would increase. Once changes of the
/// objective drop to roundoff, a step is taken if it shrinks the gradient.
inline KarcherResult karcher_mean(const std::vector<SpdMatrix>& mats, double alpha = 1.0, double tol = 1e-12,
                                  int max_iterations = 1000) {
  if (mats.empty()) throw PreconditionError("Karcher mean of an empty list");
  if (!(alpha > 0.0)) throw DomainError("alpha must be positive");
  const Index n = mats.front().dim();
  std::vector<SpdMatrix> pts;
  for (const auto& m : mats) {
    if (m.dim() != n) throw DimensionError("Karcher inputs differ in size");
    pts.emplace_back(alpha == 1.0 ? m.hermitian() : apply_scalar_function(m, ScalarMap::power(alpha)));
  }
  const double k = static_cast<double>(pts.size());

  auto tangent = [&](const SpdMatrix& x, double* objective) {
    const CMatrix ih = apply_scalar_function(x, ScalarMap::power(-0.5)).matrix();
    CMatrix g = CMatrix::Zero(n, n);
    double obj = 0.0;
    for (const auto& p : pts) {
      const HermitianMatrix l = apply_scalar_function(
          HermitianMatrix::symmetrized(ih * p.matrix() * ih), ScalarMap::log());
      obj += l.matrix().squaredNorm();
      g += l.matrix();
    }
    if (objective) *objective = obj;
    return HermitianMatrix::symmetrized(g / k);
  };

  SpdMatrix x = power_mean_multi(2.0, pts);
  double obj = 0.0;
  HermitianMatrix g = tangent(x, &obj);
  double tau = 1.0;
  for (int it = 0; it < max_iterations; ++it) {
    const double gn = g.matrix().norm();
    if (gn <= tol) return {SpdMatrix(apply_scalar_function(x, ScalarMap::power(1.0 / alpha))), it, gn};
    const CMatrix h = apply_scalar_function(x, ScalarMap::power(0.5)).matrix();
    bool moved = false;
    for (int halvings = 0; halvings < 40; ++halvings) {
      const CMatrix step = apply_scalar_function(tau * g, ScalarMap::exp()).matrix();
      SpdMatrix trial(HermitianMatrix::symmetrized(h * step * h));
      double trial_obj = 0.0;
      HermitianMatrix trial_g = tangent(trial, &trial_obj);
      const bool within_roundoff = trial_obj <= obj * (1.0 + 1e-13) && trial_g.matrix().norm() < gn;
      if (trial_obj <= obj || within_roundoff) {
        x = std::move(trial);
        obj = trial_obj;
        g = std::move(trial_g);
        moved = true;
        tau = std::min(1.0, 2.0 * tau);
        break;
      }
      tau *= 0.5;
    }
    if (!moved) {
      const double gn2 = g.matrix().norm();
      if (gn2 <= std::max(tol, 1e-13 * std::sqrt(obj / k)))
        return {SpdMatrix(apply_scalar_function(x, ScalarMap::power(1.0 / alpha))), it, gn2};
      throw ConvergenceError("Karcher iteration stalled", gn2);
    }
  }
  throw ConvergenceError("Karcher iteration did not converge", g.matrix().norm());
}

/// A #_t B = A^(1/2)(A^(-1/2) B A^(-1/2))^t A^(1/2).
inline SpdMatrix weighted_geometric_mean(const SpdMatrix& a, const SpdMatrix& b, double t = 0.5) {
  return geodesic_point(GeodesicFamily::fisher_rao(), a, b, t);
}

struct AlmResult {
  SpdMatrix mean;
  long iterations;
  double diameter;
};

/// Ando-Li-Mathias symmetrisation (A,B,C) <- (B#C, C#A, A#B) until the
/// Fisher-Rao diameter of the triple drops below tol.
inline AlmResult alm_3mean(const SpdMatrix& a, const SpdMatrix& b, const SpdMatrix& c, double tol = 1e-12,
                           long max_iterations = 1000000) {
  if (a.dim() != b.dim() || a.dim() != c.dim()) throw DimensionError("ALM inputs differ in size");
  SpdMatrix x = a, y = b, z = c;
  const auto fr = GeodesicFamily::fisher_rao();
  auto diameter = [&]() {
    return std::max({closed_form_distance(fr, x, y), closed_form_distance(fr, y, z),
                     closed_form_distance(fr, z, x)});
  };
  double d = diameter();
  for (long it = 0; it < max_iterations; ++it) {
    if (d <= tol) return {x, it, d};
    SpdMatrix nx = weighted_geometric_mean(y, z), ny = weighted_geometric_mean(z, x),
              nz = weighted_geometric_mean(x, y);
    x = std::move(nx);
    y = std::move(ny);
    z = std::move(nz);
    d = diameter();
  }
  throw ConvergenceError("ALM iteration did not reach the tolerance", d);
}

}  // namespace spdgeo
