#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "spdgeo/error.hpp"

namespace spdgeo {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kClusterTol = 1e-8;
inline constexpr double kDividedDifferenceSwitch = 1e-6;

namespace detail {

inline double max_abs_entry(const CMatrix& a) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
  return m;
}

inline CMatrix hermitian_part(const CMatrix& a) {
  CMatrix h = 0.5 * (a + a.adjoint());
  for (Index i = 0; i < h.rows(); ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return h;
}

inline bool all_finite(const CMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
  return true;
}

}  // namespace detail

/// Square complex matrix equal to its conjugate transpose.
///
/// Construction rejects inputs whose anti-Hermitian part exceeds
/// 1e-12 * max(1, largest entry) and stores the exact Hermitian part.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const CMatrix& entries, double tol = kHermitianTol) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
      throw DimensionError("Hermitian matrix must be square and non-empty, got " +
                           std::to_string(entries.rows()) + "x" + std::to_string(entries.cols()));
    if (!detail::all_finite(entries)) throw DomainError("matrix has non-finite entries");
    const double scale = std::max(1.0, detail::max_abs_entry(entries));
    const double skew = detail::max_abs_entry(entries - entries.adjoint()) * 0.5;
    if (skew > tol * scale) {
      std::ostringstream os;
      os << "matrix is not Hermitian: anti-Hermitian part " << skew;
      throw DomainError(os.str());
    }
    m_ = detail::hermitian_part(entries);
  }

  explicit HermitianMatrix(const RMatrix& entries, double tol = kHermitianTol)
      : HermitianMatrix(CMatrix(entries.cast<Complex>()), tol) {}

  /// Hermitian part of an arbitrary square matrix, without validation.
  static HermitianMatrix symmetrized(const CMatrix& entries) {
    HermitianMatrix h;
    h.m_ = detail::hermitian_part(entries);
    return h;
  }

  static HermitianMatrix identity(Index n) { return symmetrized(CMatrix::Identity(n, n)); }
  static HermitianMatrix zero(Index n) { return symmetrized(CMatrix::Zero(n, n)); }
  static HermitianMatrix diagonal(const RVector& d) {
    return symmetrized(CMatrix(d.cast<Complex>().asDiagonal()));
  }

  Index dim() const { return m_.rows(); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(Index i, Index j) const { return m_(i, j); }

  friend HermitianMatrix operator+(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same(a, b);
    return raw(a.m_ + b.m_);
  }
  friend HermitianMatrix operator-(const HermitianMatrix& a, const HermitianMatrix& b) {
    check_same(a, b);
    return raw(a.m_ - b.m_);
  }
  friend HermitianMatrix operator*(double s, const HermitianMatrix& a) { return raw(s * a.m_); }
  friend HermitianMatrix operator-(const HermitianMatrix& a) { return raw(-a.m_); }

 private:
  HermitianMatrix() = default;
  static HermitianMatrix raw(CMatrix m) {
    HermitianMatrix h;
    h.m_ = std::move(m);
    return h;
  }
  static void check_same(const HermitianMatrix& a, const HermitianMatrix& b) {
    if (a.dim() != b.dim())
      throw DimensionError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                           std::to_string(b.dim()));
  }
  CMatrix m_;
};

/// Eigen-decomposition A = U diag(lambda) U* with eigenvalues ascending and
/// eigenvalues grouped into clusters of (numerically) equal values.
struct Spectrum {
  RVector eigenvalues;
  CMatrix frame;
  std::vector<std::vector<Index>> clusters;
  std::vector<Index> cluster_of;

  Index dim() const { return eigenvalues.size(); }

  CMatrix to_frame(const CMatrix& x) const { return frame.adjoint() * x * frame; }
  CMatrix from_frame(const CMatrix& y) const { return frame * y * frame.adjoint(); }
  CMatrix reconstruct(const RVector& values) const {
    return frame * values.cast<Complex>().asDiagonal() * frame.adjoint();
  }
  CMatrix projector(std::size_t k) const {
    CMatrix p = CMatrix::Zero(dim(), dim());
    for (Index i : clusters.at(k)) p += frame.col(i) * frame.col(i).adjoint();
    return p;
  }
  bool same_cluster(Index i, Index j) const { return cluster_of[i] == cluster_of[j]; }
};

namespace detail {

inline void build_clusters(Spectrum& s, double cluster_tol) {
  s.clusters.clear();
  s.cluster_of.assign(static_cast<std::size_t>(s.dim()), 0);
  Index start = 0;
  for (Index i = 0; i < s.dim(); ++i) {
    const double lam = s.eigenvalues(i);
    if (i == 0 ||
        lam - s.eigenvalues(start) > cluster_tol * std::max(1.0, std::abs(lam))) {
      s.clusters.emplace_back();
      start = i;
    }
    s.clusters.back().push_back(i);
    s.cluster_of[static_cast<std::size_t>(i)] = static_cast<Index>(s.clusters.size() - 1);
  }
}

inline Spectrum decompose(const CMatrix& a, double cluster_tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge", static_cast<long>(a.rows()),
                         max_abs_entry(a));
  }
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.frame = solver.eigenvectors();
  build_clusters(s, cluster_tol);
  return s;
}

}  // namespace detail

inline Spectrum spectral_decompose(const HermitianMatrix& a, double cluster_tol = kClusterTol) {
  if (!(cluster_tol >= 0.0)) throw DomainError("cluster tolerance must be non-negative");
  return detail::decompose(a.matrix(), cluster_tol);
}

/// Hermitian matrix with strictly positive spectrum. The spectrum computed
/// while certifying positivity is kept for reuse.
class SpdMatrix {
 public:
  explicit SpdMatrix(const HermitianMatrix& h, double cluster_tol = kClusterTol)
      : h_(h), spectrum_(spectral_decompose(h, cluster_tol)) {
    if (!(spectrum_.eigenvalues(0) > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "matrix is not positive definite: minimum eigenvalue " << spectrum_.eigenvalues(0);
      throw DomainError(os.str());
    }
  }
  explicit SpdMatrix(const CMatrix& entries) : SpdMatrix(HermitianMatrix(entries)) {}
  explicit SpdMatrix(const RMatrix& entries) : SpdMatrix(HermitianMatrix(entries)) {}

  static SpdMatrix identity(Index n) { return SpdMatrix(HermitianMatrix::identity(n)); }
  static SpdMatrix diagonal(const RVector& d) { return SpdMatrix(HermitianMatrix::diagonal(d)); }

  Index dim() const { return h_.dim(); }
  const HermitianMatrix& hermitian() const { return h_; }
  const CMatrix& matrix() const { return h_.matrix(); }
  const Spectrum& spectrum() const { return spectrum_; }
  double min_eigenvalue() const { return spectrum_.eigenvalues(0); }
  double max_eigenvalue() const { return spectrum_.eigenvalues(dim() - 1); }
  operator const HermitianMatrix&() const { return h_; }

 private:
  HermitianMatrix h_;
  Spectrum spectrum_;
};

/// Real function applied to spectra. The built-in maps know their own
/// derivatives and have cancellation-free divided differences.
///
/// box_cox(r) is x -> (x^r - 1)/r (log x at r = 0) and inverse_box_cox(r) its
/// inverse mu -> (1 + r mu)^(1/r) (exp at r = 0).
class ScalarMap {
 public:
  enum class Kind { Power, Log, Exp, BoxCox, InverseBoxCox, Custom };

  static ScalarMap power(double r) { return ScalarMap(Kind::Power, r); }
  static ScalarMap log() { return ScalarMap(Kind::Log, 0.0); }
  static ScalarMap exp() { return ScalarMap(Kind::Exp, 0.0); }
  static ScalarMap box_cox(double r) { return ScalarMap(Kind::BoxCox, r); }
  static ScalarMap inverse_box_cox(double r) { return ScalarMap(Kind::InverseBoxCox, r); }

  /// A user function. Without a derivative a fourth-order central difference
  /// is used; the domain predicate defaults to "everywhere".
  static ScalarMap custom(std::string name, std::function<double(double)> f,
                          std::function<double(double)> df = {},
                          std::function<bool(double)> domain = {}) {
    ScalarMap m(Kind::Custom, 0.0);
    m.name_ = std::move(name);
    m.f_ = std::move(f);
    m.df_ = std::move(df);
    m.domain_ = std::move(domain);
    return m;
  }

  Kind kind() const { return kind_; }
  double parameter() const { return r_; }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case Kind::Power: os << "power(" << r_ << ")"; break;
      case Kind::Log: os << "log"; break;
      case Kind::Exp: os << "exp"; break;
      case Kind::BoxCox: os << "box_cox(" << r_ << ")"; break;
      case Kind::InverseBoxCox: os << "inverse_box_cox(" << r_ << ")"; break;
      case Kind::Custom: os << name_; break;
    }
    return os.str();
  }

  bool defined_at(double x) const {
    if (!std::isfinite(x)) return false;
    switch (kind_) {
      case Kind::Power:
        if (x > 0.0) return true;
        return r_ >= 0.0 && std::floor(r_) == r_ && (x != 0.0 || r_ > 0.0);
      case Kind::Log:
      case Kind::BoxCox: return x > 0.0;
      case Kind::Exp: return true;
      case Kind::InverseBoxCox: return 1.0 + r_ * x > 0.0;
      case Kind::Custom: return domain_ ? domain_(x) : true;
    }
    return false;
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::Power: return std::pow(x, r_);
      case Kind::Log: return std::log(x);
      case Kind::Exp: return std::exp(x);
      case Kind::BoxCox: return r_ == 0.0 ? std::log(x) : std::expm1(r_ * std::log(x)) / r_;
      case Kind::InverseBoxCox:
        return r_ == 0.0 ? std::exp(x) : std::exp(std::log1p(r_ * x) / r_);
      case Kind::Custom: return f_(x);
    }
    return 0.0;
  }

  double derivative(double x) const {
    switch (kind_) {
      case Kind::Power: return r_ == 0.0 ? 0.0 : r_ * std::pow(x, r_ - 1.0);
      case Kind::Log: return 1.0 / x;
      case Kind::Exp: return std::exp(x);
      case Kind::BoxCox: return std::pow(x, r_ - 1.0);
      case Kind::InverseBoxCox:
        return r_ == 0.0 ? std::exp(x) : std::exp((1.0 / r_ - 1.0) * std::log1p(r_ * x));
      case Kind::Custom: return df_ ? df_(x) : numeric_derivative(x);
    }
    return 0.0;
  }

  std::optional<double> third_derivative(double x) const {
    switch (kind_) {
      case Kind::Power: return r_ * (r_ - 1.0) * (r_ - 2.0) * std::pow(x, r_ - 3.0);
      case Kind::Log: return 2.0 / (x * x * x);
      case Kind::Exp: return std::exp(x);
      case Kind::BoxCox: return (r_ - 1.0) * (r_ - 2.0) * std::pow(x, r_ - 3.0);
      case Kind::InverseBoxCox: {
        const double base = 1.0 + r_ * x;
        return (1.0 - r_) * (1.0 - 2.0 * r_) * (*this)(x) / (base * base * base);
      }
      case Kind::Custom: return std::nullopt;
    }
    return std::nullopt;
  }

  /// f^[1](x, y): the quotient (f(x)-f(y))/(x-y) when the points are
  /// separated by more than 1e-6 relative, otherwise f'(m) + f'''(m)(x-y)^2/24
  /// at the midpoint m.
  double divided_difference(double x, double y) const {
    const double d = x - y;
    const double scale = std::max(std::abs(x), std::abs(y));
    if (std::abs(d) <= kDividedDifferenceSwitch * scale) return near_diagonal(x, y);
    switch (kind_) {
      case Kind::Power:
        if (x > 0.0 && y > 0.0) {
          const double q = d / y;
          return std::pow(y, r_ - 1.0) * std::expm1(r_ * std::log1p(q)) / q;
        }
        break;
      case Kind::Log: return std::log1p(d / y) / d;
      case Kind::Exp: return std::exp(y) * std::expm1(d) / d;
      case Kind::BoxCox: {
        const double q = d / y;
        if (r_ == 0.0) return std::log1p(q) / d;
        return std::pow(y, r_ - 1.0) * std::expm1(r_ * std::log1p(q)) / (r_ * q);
      }
      case Kind::InverseBoxCox: {
        if (r_ == 0.0) return std::exp(y) * std::expm1(d) / d;
        const double step = std::log1p(r_ * d / (1.0 + r_ * y)) / r_;
        return (*this)(y) * std::expm1(step) / d;
      }
      case Kind::Custom: break;
    }
    return ((*this)(x) - (*this)(y)) / d;
  }

  /// Same as divided_difference but forced onto the derivative branch, used
  /// for eigenvalues that belong to one cluster.
  double near_diagonal(double x, double y) const {
    const double m = 0.5 * (x + y);
    double v = derivative(m);
    if (auto f3 = third_derivative(m)) v += *f3 * (x - y) * (x - y) / 24.0;
    return v;
  }

 private:
  ScalarMap(Kind k, double r) : kind_(k), r_(r) {}

  double numeric_derivative(double x) const {
    const double h = 1e-3 * (x != 0.0 ? std::abs(x) : 1.0);
    auto central = [&](double s) { return (f_(x + s) - f_(x - s)) / (2.0 * s); };
    return (4.0 * central(h / 2.0) - central(h)) / 3.0;
  }

  Kind kind_;
  double r_;
  std::string name_;
  std::function<double(double)> f_;
  std::function<double(double)> df_;
  std::function<bool(double)> domain_;
};

namespace detail {

inline RVector map_values(const Spectrum& s, const ScalarMap& f) {
  RVector v(s.dim());
  for (Index i = 0; i < s.dim(); ++i) {
    const double lam = s.eigenvalues(i);
    if (!f.defined_at(lam)) {
      std::ostringstream os;
      os.precision(17);
      os << f.name() << " is undefined at eigenvalue " << lam;
      throw DomainError(os.str());
    }
    v(i) = f(lam);
  }
  return v;
}

/// Matrix of first divided differences of f over the spectrum.
inline RMatrix loewner_matrix(const Spectrum& s, const ScalarMap& f) {
  const Index n = s.dim();
  RMatrix l(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const double a = s.eigenvalues(i), b = s.eigenvalues(j);
      const double v = (i == j) ? f.derivative(a)
                       : s.same_cluster(i, j) ? f.near_diagonal(a, b)
                                              : f.divided_difference(a, b);
      l(i, j) = v;
      l(j, i) = v;
    }
  }
  return l;
}

inline CMatrix schur_in_frame(const Spectrum& s, const RMatrix& coeff, const CMatrix& x) {
  CMatrix y = s.to_frame(x);
  y.array() *= coeff.cast<Complex>().array();
  return s.from_frame(y);
}

}  // namespace detail

inline HermitianMatrix apply_scalar_function(const Spectrum& s, const ScalarMap& f) {
  return HermitianMatrix::symmetrized(s.reconstruct(detail::map_values(s, f)));
}

inline HermitianMatrix apply_scalar_function(const HermitianMatrix& a, const ScalarMap& f) {
  return apply_scalar_function(spectral_decompose(a), f);
}

inline HermitianMatrix apply_scalar_function(const SpdMatrix& a, const ScalarMap& f) {
  return apply_scalar_function(a.spectrum(), f);
}

inline double divided_difference(const ScalarMap& f, double x, double y) {
  if (!f.defined_at(x) || !f.defined_at(y)) throw DomainError(f.name() + " undefined at a node");
  if (x == y) return f.derivative(x);
  return f.divided_difference(x, y);
}

/// Daleckii-Krein formula Df(A)[H] = U (f^[1](lambda_i, lambda_j) o U*HU) U*.
inline HermitianMatrix frechet_derivative(const ScalarMap& f, const Spectrum& s,
                                          const HermitianMatrix& h) {
  if (h.dim() != s.dim()) throw DimensionError("direction and base point differ in size");
  detail::map_values(s, f);
  return HermitianMatrix::symmetrized(
      detail::schur_in_frame(s, detail::loewner_matrix(s, f), h.matrix()));
}

inline HermitianMatrix frechet_derivative(const ScalarMap& f, const HermitianMatrix& a,
                                          const HermitianMatrix& h) {
  return frechet_derivative(f, spectral_decompose(a), h);
}

inline HermitianMatrix frechet_derivative(const ScalarMap& f, const SpdMatrix& a,
                                          const HermitianMatrix& h) {
  return frechet_derivative(f, a.spectrum(), h);
}

/// Unitarily invariant norm selector. Schatten(2) is normalised to the
/// Hilbert-Schmidt norm and Schatten(inf) to the operator norm.
class NormSpec {
 public:
  enum class Kind { HilbertSchmidt, Operator, Schatten, KyFan };

  static NormSpec hilbert_schmidt() { return NormSpec(Kind::HilbertSchmidt, 2.0, 0); }
  static NormSpec operator_norm() { return NormSpec(Kind::Operator, 0.0, 0); }
  static NormSpec schatten(double p) {
    if (std::isnan(p) || p < 1.0) throw DomainError("Schatten exponent must be >= 1");
    if (std::isinf(p)) return operator_norm();
    if (p == 2.0) return hilbert_schmidt();
    return NormSpec(Kind::Schatten, p, 0);
  }
  static NormSpec ky_fan(int k) {
    if (k < 1) throw DomainError("Ky Fan index must be >= 1");
    return NormSpec(Kind::KyFan, 0.0, k);
  }

  Kind kind() const { return kind_; }
  double p() const { return p_; }
  int k() const { return k_; }

  std::string name() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
      case Kind::HilbertSchmidt: return "hs";
      case Kind::Operator: return "op";
      case Kind::Schatten: os << "schatten:" << p_; return os.str();
      case Kind::KyFan: os << "kyfan:" << k_; return os.str();
    }
    return "";
  }

  /// Norm of a vector of singular values (any order, non-negative).
  double from_singular_values(std::vector<double> s) const {
    std::sort(s.begin(), s.end(), std::greater<>());
    switch (kind_) {
      case Kind::HilbertSchmidt: {
        double acc = 0.0;
        for (double v : s) acc += v * v;
        return std::sqrt(acc);
      }
      case Kind::Operator: return s.empty() ? 0.0 : s.front();
      case Kind::Schatten: {
        const double top = s.empty() ? 0.0 : s.front();
        if (top == 0.0) return 0.0;
        double acc = 0.0;
        for (double v : s) acc += std::pow(v / top, p_);
        return top * std::pow(acc, 1.0 / p_);
      }
      case Kind::KyFan: {
        if (static_cast<std::size_t>(k_) > s.size())
          throw DomainError("Ky Fan index " + std::to_string(k_) + " exceeds dimension " +
                            std::to_string(s.size()));
        double acc = 0.0;
        for (int i = 0; i < k_; ++i) acc += s[static_cast<std::size_t>(i)];
        return acc;
      }
    }
    return 0.0;
  }

 private:
  NormSpec(Kind k, double p, int kf) : kind_(k), p_(p), k_(kf) {}
  Kind kind_;
  double p_;
  int k_;
};

inline double ui_norm(const HermitianMatrix& x, const NormSpec& norm) {
  if (norm.kind() == NormSpec::Kind::HilbertSchmidt) return x.matrix().norm();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(x.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigensolver failed in norm evaluation", static_cast<long>(x.dim()));
  std::vector<double> s(static_cast<std::size_t>(x.dim()));
  for (Index i = 0; i < x.dim(); ++i) s[static_cast<std::size_t>(i)] = std::abs(solver.eigenvalues()(i));
  return norm.from_singular_values(std::move(s));
}

/// Norm of a general (not necessarily Hermitian) square matrix.
inline double ui_norm(const CMatrix& x, const NormSpec& norm) {
  if (norm.kind() == NormSpec::Kind::HilbertSchmidt) return x.norm();
  Eigen::JacobiSVD<CMatrix> svd(x);
  std::vector<double> s(svd.singularValues().data(),
                        svd.singularValues().data() + svd.singularValues().size());
  return norm.from_singular_values(std::move(s));
}

/// Re Tr(X* Y).
inline double hs_inner(const CMatrix& x, const CMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw DimensionError("inner product of matrices of different sizes");
  return (x.conjugate().array() * y.array()).sum().real();
}

inline double hs_inner(const HermitianMatrix& x, const HermitianMatrix& y) {
  return hs_inner(x.matrix(), y.matrix());
}

/// sum_k P_k X P_k over the spectral clusters.
inline HermitianMatrix pinch(const Spectrum& s, const HermitianMatrix& x) {
  if (x.dim() != s.dim()) throw DimensionError("pinching dimension mismatch");
  CMatrix y = s.to_frame(x.matrix());
  for (Index i = 0; i < s.dim(); ++i)
    for (Index j = 0; j < s.dim(); ++j)
      if (!s.same_cluster(i, j)) y(i, j) = 0.0;
  return HermitianMatrix::symmetrized(s.from_frame(y));
}

inline CMatrix commutator(const CMatrix& a, const CMatrix& b) { return a * b - b * a; }

/// Haar-distributed unitary from the QR factorisation of a complex Gaussian
/// matrix (real orthogonal when `complex_entries` is false).
template <class Rng>
CMatrix random_unitary(Index n, Rng& rng, bool complex_entries = true) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = complex_entries ? normal(rng) : 0.0;
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

/// Deterministic SPD sample: log-uniform eigenvalues in [e^-s, e^s] and a
/// Haar frame, both drawn from a 64-bit Mersenne twister seeded with `seed`.
inline SpdMatrix random_spd(Index n, std::uint64_t seed, double log_spread = 2.0,
                            bool complex_entries = true) {
  if (n < 1) throw DimensionError("dimension must be positive");
  if (!(log_spread >= 0.0) || !std::isfinite(log_spread))
    throw DomainError("log spread must be a finite non-negative number");
  std::mt19937_64 rng(seed);
  CMatrix u = random_unitary(n, rng, complex_entries);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  RVector lam(n);
  for (Index i = 0; i < n; ++i) lam(i) = std::exp(log_spread * unif(rng));
  return SpdMatrix(HermitianMatrix::symmetrized(u * lam.cast<Complex>().asDiagonal() * u.adjoint()));
}

/// Hermitian sample with independent Gaussian entries, normalised to unit
/// Hilbert-Schmidt norm.
inline HermitianMatrix random_hermitian(Index n, std::uint64_t seed, bool complex_entries = true) {
  if (n < 1) throw DimensionError("dimension must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix g(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      g(i, j) = Complex(normal(rng), complex_entries ? normal(rng) : 0.0);
  CMatrix h = detail::hermitian_part(g);
  h /= h.norm();
  return HermitianMatrix::symmetrized(h);
}

}  // namespace spdgeo
