#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "spdgeo/error.hpp"
#include "spdgeo/geodesic.hpp"
#include "spdgeo/matcore.hpp"
#include "spdgeo/means.hpp"
#include "spdgeo/parallel.hpp"
#include "spdgeo/quadrature.hpp"

namespace spdgeo {

struct PathSearchConfig {
  enum class Method { Lbfgs, NodeSearch };

  int segments = 16;
  int max_iterations = 500;
  double step_tol = 1e-10;
  int quadrature = 8;
  std::uint64_t seed = 0;
  Method method = Method::Lbfgs;
  /// Randomised node sweeps run after the quasi-Newton phase.
  int polish_sweeps = 2;
  int memory = 10;
};

struct PathSearchResult {
  double distance = 0.0;
  double initial_length = 0.0;
  Polyline path;
  bool converged = false;
  int iterations = 0;
  std::vector<double> history;
};

namespace detail {

inline constexpr double kInfeasible = std::numeric_limits<double>::infinity();

/// Length of the straight segment X0 -> X1 under phi, with optional HS
/// gradients with respect to both end nodes.
///
/// The integrand sqrt(<V, phi(L_D,R_D)^{-1} V>) is differentiated in the
/// eigenframe of D: the V-part is 2 phi^{-1} V and the D-part collects first
/// divided differences of 1/phi in its first argument.
inline double segment_length(const Kernel& kernel, const CMatrix& x0, const CMatrix& x1,
                             const QuadratureRule& rule, CMatrix* g0, CMatrix* g1) {
  const Index n = x0.rows();
  const CMatrix v = x1 - x0;
  double len = 0.0;
  RMatrix g(n, n), dlog(n, n);
  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double s = rule.nodes[q], w = rule.weights[q];
    const Spectrum sp = decompose(hermitian_part(x0 + s * v), kClusterTol);
    const RVector& lam = sp.eigenvalues;
    if (!(lam(0) > 1e-10 * std::abs(lam(n - 1)))) return kInfeasible;
    const CMatrix wt = sp.to_frame(v);
    double qv = 0.0;
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        const double c = std::exp(-kernel.log_eval(lam(i), lam(j)));
        g(i, j) = c;
        g(j, i) = c;
      }
    }
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) qv += g(i, j) * std::norm(wt(i, j));
    const double f = std::sqrt(qv);
    len += w * f;
    if (!g0 || !(qv > 0.0)) continue;

    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < n; ++j) dlog(i, j) = kernel.log_partial_x(lam(i), lam(j));
    CMatrix gd = CMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index k = 0; k < n; ++k) {
        const double li = lam(i), lk = lam(k);
        const bool close = i == k || std::abs(li - lk) <= kDividedDifferenceSwitch * std::max(li, lk);
        Complex acc(0.0, 0.0);
        for (Index j = 0; j < n; ++j) {
          double delta;
          if (i == k) {
            delta = -g(i, j) * dlog(i, j);
          } else if (close) {
            const double m = 0.5 * (li + lk);
            delta = -std::exp(-kernel.log_eval(m, lam(j))) * kernel.log_partial_x(m, lam(j));
          } else {
            delta = (g(i, j) - g(k, j)) / (li - lk);
          }
          acc += delta * wt(k, j) * std::conj(wt(i, j));
        }
        gd(i, k) = 2.0 * acc;
      }
    }
    gd = gd.conjugate().eval();
    CMatrix gv = wt;
    gv.array() *= (2.0 * g).cast<Complex>().array();
    const double c = w / (2.0 * f);
    *g0 += sp.from_frame(c * ((1.0 - s) * gd - gv));
    *g1 += sp.from_frame(c * (s * gd + gv));
  }
  return len;
}

/// Orthonormal real coordinates of Hermitian matrices under the HS product.
inline void pack(const CMatrix& x, double* out) {
  const Index n = x.rows();
  std::size_t p = 0;
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    out[p++] = x(i, i).real();
    for (Index j = i + 1; j < n; ++j) {
      out[p++] = r2 * x(i, j).real();
      out[p++] = r2 * x(i, j).imag();
    }
  }
}

inline CMatrix unpack(const double* in, Index n) {
  CMatrix x(n, n);
  std::size_t p = 0;
  const double r2 = std::sqrt(2.0);
  for (Index i = 0; i < n; ++i) {
    x(i, i) = in[p++];
    for (Index j = i + 1; j < n; ++j) {
      const double re = in[p++] / r2, im = in[p++] / r2;
      x(i, j) = Complex(re, im);
      x(j, i) = Complex(re, -im);
    }
  }
  return x;
}

class PathObjective {
 public:
  PathObjective(const Kernel& kernel, const CMatrix& a, const CMatrix& b, int segments, int quadrature)
      : kernel_(kernel), a_(a), b_(b), m_(segments), n_(a.rows()), rule_(gauss_legendre(quadrature)) {}

  std::size_t size() const { return static_cast<std::size_t>((m_ - 1) * n_ * n_); }
  Index dim() const { return n_; }

  std::vector<CMatrix> nodes(const RVector& x) const {
    std::vector<CMatrix> out;
    out.reserve(static_cast<std::size_t>(m_ + 1));
    out.push_back(a_);
    for (int k = 0; k < m_ - 1; ++k) out.push_back(unpack(x.data() + k * n_ * n_, n_));
    out.push_back(b_);
    return out;
  }

  RVector coordinates(const std::vector<CMatrix>& nodes) const {
    RVector x(static_cast<Index>(size()));
    for (int k = 1; k < m_; ++k) pack(nodes[static_cast<std::size_t>(k)], x.data() + (k - 1) * n_ * n_);
    return x;
  }

  /// Applies phi(L_X, R_X) blockwise at the current nodes: the inverse of
  /// the metric, which makes the quasi-Newton start well scaled.
  RVector precondition(const std::vector<CMatrix>& nodes, const RVector& v) const {
    RVector out(v.size());
    const Index b = n_ * n_;
    for (int k = 1; k < m_; ++k) {
      const Spectrum s = decompose(hermitian_part(nodes[static_cast<std::size_t>(k)]), kClusterTol);
      const KernelOperator op(kernel_, s);
      const CMatrix y = op.spectrum().from_frame(op.apply_in_frame(unpack(v.data() + (k - 1) * b, n_), 1.0));
      pack(hermitian_part(y), out.data() + (k - 1) * b);
    }
    return out;
  }

  double segment(const CMatrix& x0, const CMatrix& x1) const {
    return segment_length(kernel_, x0, x1, rule_, nullptr, nullptr);
  }

  /// Total length; fills grad (if non-null) with the coordinate gradient.
  double operator()(const RVector& x, RVector* grad) const {
    const auto nd = nodes(x);
    std::vector<double> parts(static_cast<std::size_t>(m_), 0.0);
    std::vector<CMatrix> g0(static_cast<std::size_t>(m_)), g1(static_cast<std::size_t>(m_));
    parallel_for(static_cast<std::size_t>(m_), [&](std::size_t k) {
      if (grad) {
        g0[k] = CMatrix::Zero(n_, n_);
        g1[k] = CMatrix::Zero(n_, n_);
      }
      parts[k] = segment_length(kernel_, nd[k], nd[k + 1], rule_, grad ? &g0[k] : nullptr,
                                grad ? &g1[k] : nullptr);
    });
    double total = 0.0;
    for (double p : parts) total += p;
    if (grad && std::isfinite(total)) {
      grad->resize(static_cast<Index>(size()));
      for (int k = 1; k < m_; ++k) {
        const CMatrix gk = hermitian_part(g1[static_cast<std::size_t>(k - 1)] + g0[static_cast<std::size_t>(k)]);
        pack(gk, grad->data() + (k - 1) * n_ * n_);
      }
    }
    return total;
  }

 private:
  Kernel kernel_;
  CMatrix a_, b_;
  int m_;
  Index n_;
  QuadratureRule rule_;
};

inline CMatrix floor_spectrum(const CMatrix& x) {
  Spectrum s = decompose(hermitian_part(x), kClusterTol);
  const double top = std::max(std::abs(s.eigenvalues(0)), std::abs(s.eigenvalues(s.dim() - 1)));
  const double floor = 1e-10 * top;
  bool changed = false;
  RVector lam = s.eigenvalues;
  for (Index i = 0; i < lam.size(); ++i)
    if (lam(i) < floor) {
      lam(i) = floor;
      changed = true;
    }
  return changed ? hermitian_part(s.reconstruct(lam)) : x;
}

/// Seeded node-wise trust-region search: each sweep proposes +-radius moves
/// of every interior node along a random unit Hermitian direction, keeps
/// improvements, and grows or shrinks each node's radius accordingly.
inline int node_search(const PathObjective& obj, std::vector<CMatrix>& nd, std::vector<double>& radius,
                       int sweeps, std::mt19937_64& rng, double step_tol, std::vector<double>* history) {
  const Index n = obj.dim();
  const std::size_t m = nd.size() - 1;
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> seg(m);
  for (std::size_t k = 0; k < m; ++k) seg[k] = obj.segment(nd[k], nd[k + 1]);
  int done = 0;
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double before = 0.0;
    for (double v : seg) before += v;
    for (std::size_t k = 1; k < m; ++k) {
      CMatrix dir(n, n);
      for (Index j = 0; j < n; ++j)
        for (Index i = 0; i < n; ++i) dir(i, j) = Complex(normal(rng), normal(rng));
      dir = hermitian_part(dir);
      dir /= dir.norm();
      bool improved = false;
      for (double sign : {1.0, -1.0}) {
        const CMatrix trial = floor_spectrum(nd[k] + sign * radius[k] * dir);
        const double left = obj.segment(nd[k - 1], trial);
        const double right = obj.segment(trial, nd[k + 1]);
        if (left + right < seg[k - 1] + seg[k]) {
          nd[k] = trial;
          seg[k - 1] = left;
          seg[k] = right;
          improved = true;
          break;
        }
      }
      radius[k] *= improved ? 1.5 : 0.5;
    }
    double after = 0.0;
    for (double v : seg) after += v;
    if (history) history->push_back(after);
    ++done;
    if (before - after <= step_tol * after && sweep > 0) break;
  }
  return done;
}

}  // namespace detail

/// Upper bound for delta_phi(A, B): the shortest polyline with
/// `segments` straight pieces, found by descent from the log-Euclidean
/// geodesic. Every accepted step strictly lowers the length, so the
/// returned distance never exceeds the initial one.
inline PathSearchResult numeric_shortest_distance(const Kernel& kernel, const SpdMatrix& a, const SpdMatrix& b,
                                                  const PathSearchConfig& cfg = {}) {
  if (a.dim() != b.dim()) throw DimensionError("endpoints differ in size");
  if (cfg.segments < 1) throw DomainError("need at least one segment");
  if (cfg.quadrature < 1) throw DomainError("need at least one quadrature point");
  const int m = cfg.segments;
  const Curve init = geodesic_curve(GeodesicFamily::theta(2.0), a, b);
  std::vector<CMatrix> nd;
  for (int k = 0; k <= m; ++k)
    nd.push_back(k == 0 ? a.matrix() : k == m ? b.matrix() : detail::hermitian_part(init(double(k) / m).point));

  PathSearchResult res;
  const detail::PathObjective obj(kernel, a.matrix(), b.matrix(), m, cfg.quadrature);
  std::mt19937_64 rng(cfg.seed);

  if (m == 1 || a.matrix() == b.matrix()) {
    if (m > 1) nd.assign(static_cast<std::size_t>(m + 1), a.matrix());
    res.distance = res.initial_length = obj.segment(nd[0], nd[1]);
    res.path.nodes = nd;
    res.converged = true;
    for (int k = 0; k <= m; ++k) res.path.times.push_back(static_cast<double>(k) / m);
    return res;
  }

  RVector x = obj.coordinates(nd);
  RVector grad;
  double f = obj(x, &grad);
  if (!std::isfinite(f)) throw NumericalError("initial path leaves the positive cone", static_cast<long>(a.dim()));
  res.initial_length = f;
  res.history.push_back(f);

  int iterations = 0;
  bool converged = false;
  if (cfg.method == PathSearchConfig::Method::Lbfgs) {
    std::vector<RVector> s_hist, y_hist;
    std::vector<double> rho;
    int quiet = 0;
    const double node_scale = x.norm() / std::sqrt(static_cast<double>(m - 1));
    while (iterations < cfg.max_iterations) {
      // two-loop recursion with the metric as initial inverse Hessian
      const std::vector<CMatrix> current = obj.nodes(x);
      RVector p = -grad;
      std::vector<double> alpha(s_hist.size());
      for (int i = static_cast<int>(s_hist.size()) - 1; i >= 0; --i) {
        const auto u = static_cast<std::size_t>(i);
        alpha[u] = rho[u] * s_hist[u].dot(p);
        p -= alpha[u] * y_hist[u];
      }
      p = obj.precondition(current, p);
      double step = 1.0;
      if (!s_hist.empty()) {
        const RVector hy = obj.precondition(current, y_hist.back());
        p *= s_hist.back().dot(y_hist.back()) / y_hist.back().dot(hy);
      } else {
        const double pn = p.norm();
        if (pn == 0.0) {
          converged = true;
          break;
        }
        step = std::min(1.0, 1e-2 * node_scale / pn);
      }
      for (std::size_t i = 0; i < s_hist.size(); ++i) {
        const double beta = rho[i] * y_hist[i].dot(p);
        p += s_hist[i] * (alpha[i] - beta);
      }
      double slope = grad.dot(p);
      if (!(slope < 0.0)) {
        p = -grad;
        slope = -grad.squaredNorm();
        step = std::min(1.0, 1e-2 * node_scale / std::sqrt(-slope));
        s_hist.clear();
        y_hist.clear();
        rho.clear();
      }
      bool accepted = false;
      RVector xn, gn_vec;
      double fn = f;
      for (int ls = 0; ls < 60; ++ls) {
        xn = x + step * p;
        fn = obj(xn, &gn_vec);
        if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope && fn < f) {
          accepted = true;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        if (!s_hist.empty()) {
          s_hist.clear();
          y_hist.clear();
          rho.clear();
          continue;
        }
        converged = true;
        break;
      }
      ++iterations;
      RVector sv = xn - x, yv = gn_vec - grad;
      const double sy = sv.dot(yv);
      if (sy > 1e-16 * sv.norm() * yv.norm()) {
        s_hist.push_back(sv);
        y_hist.push_back(yv);
        rho.push_back(1.0 / sy);
        if (static_cast<int>(s_hist.size()) > cfg.memory) {
          s_hist.erase(s_hist.begin());
          y_hist.erase(y_hist.begin());
          rho.erase(rho.begin());
        }
      }
      const double decrease = f - fn;
      x = std::move(xn);
      grad = std::move(gn_vec);
      f = fn;
      res.history.push_back(f);
      quiet = decrease <= cfg.step_tol * f ? quiet + 1 : 0;
      if (quiet >= 3) {
        converged = true;
        break;
      }
    }
    nd = obj.nodes(x);
    if (cfg.polish_sweeps > 0) {
      std::vector<double> radius(nd.size());
      for (std::size_t k = 0; k < nd.size(); ++k) radius[k] = 1e-4 * nd[k].norm();
      detail::node_search(obj, nd, radius, cfg.polish_sweeps, rng, cfg.step_tol, &res.history);
    }
  } else {
    std::vector<double> radius(nd.size());
    for (std::size_t k = 0; k < nd.size(); ++k) radius[k] = 1e-2 * nd[k].norm();
    iterations = detail::node_search(obj, nd, radius, cfg.max_iterations, rng, cfg.step_tol, &res.history);
    converged = iterations < cfg.max_iterations;
  }

  res.distance = 0.0;
  for (int k = 0; k < m; ++k)
    res.distance += obj.segment(nd[static_cast<std::size_t>(k)], nd[static_cast<std::size_t>(k + 1)]);
  res.path.nodes = std::move(nd);
  for (int k = 0; k <= m; ++k) res.path.times.push_back(static_cast<double>(k) / m);
  res.converged = converged;
  res.iterations = iterations;
  return res;
}

struct SlopeResult {
  double slope = 0.0;
  std::vector<double> steps;
  std::vector<double> quotients;
};

/// lim_{eps->0} delta_phi(D, D + eps H)/eps from numeric distances at the
/// given steps, extrapolated to eps = 0 by Neville's polynomial scheme.
inline SlopeResult directional_distance_slope(const Kernel& kernel, const SpdMatrix& d, const HermitianMatrix& h,
                                              std::vector<double> steps = {1e-2, 5e-3, 2.5e-3},
                                              const PathSearchConfig& cfg = {}) {
  if (h.dim() != d.dim()) throw DimensionError("direction and base point differ in size");
  if (steps.empty()) throw PreconditionError("need at least one step");
  SlopeResult out;
  out.steps = steps;
  if (h.matrix().norm() == 0.0) {
    out.quotients.assign(steps.size(), 0.0);
    return out;
  }
  for (double eps : steps) {
    if (!(eps > 0.0)) throw DomainError("steps must be positive");
    const SpdMatrix e(d.hermitian() + eps * h);
    out.quotients.push_back(numeric_shortest_distance(kernel, d, e, cfg).distance / eps);
  }
  std::vector<double> p = out.quotients;
  const std::size_t k = steps.size();
  for (std::size_t level = 1; level < k; ++level)
    for (std::size_t i = 0; i + level < k; ++i)
      p[i] = (steps[i + level] * p[i] - steps[i] * p[i + 1]) / (steps[i + level] - steps[i]);
  out.slope = p[0];
  return out;
}

}  // namespace spdgeo
