#pragma once

#include <cmath>
#include <string>

#include "spdgeo/error.hpp"
#include "spdgeo/matcore.hpp"
#include "spdgeo/means.hpp"

namespace spdgeo {

/// phi(L_D, R_D) and its powers, acting in the eigenframe of D by a Schur
/// product with [phi(lambda_i, lambda_j)^p].
class KernelOperator {
 public:
  KernelOperator(const Kernel& kernel, const Spectrum& spectrum)
      : spectrum_(spectrum), log_coeff_(spectrum.dim(), spectrum.dim()) {
    const Index n = spectrum.dim();
    for (Index i = 0; i < n; ++i) {
      if (!(spectrum.eigenvalues(i) > 0.0))
        throw DomainError("kernel operators need a positive definite base point");
    }
    for (Index i = 0; i < n; ++i) {
      for (Index j = i; j < n; ++j) {
        const double v = kernel.log_eval(spectrum.eigenvalues(i), spectrum.eigenvalues(j));
        if (!std::isfinite(v)) throw NumericalError("kernel coefficient is not finite", static_cast<long>(n));
        log_coeff_(i, j) = v;
        log_coeff_(j, i) = v;
      }
    }
  }

  KernelOperator(const Kernel& kernel, const SpdMatrix& d) : KernelOperator(kernel, d.spectrum()) {}

  const Spectrum& spectrum() const { return spectrum_; }
  const RMatrix& log_coefficients() const { return log_coeff_; }
  RMatrix coefficients(double p) const { return (p * log_coeff_).array().exp().matrix(); }

  /// Schur weights applied to U*XU, returned in the eigenframe.
  CMatrix apply_in_frame(const CMatrix& x, double p) const {
    CMatrix y = spectrum_.to_frame(x);
    y.array() *= coefficients(p).cast<Complex>().array();
    return y;
  }

  HermitianMatrix apply(const HermitianMatrix& x, double p) const {
    if (x.dim() != spectrum_.dim()) throw DimensionError("kernel operator dimension mismatch");
    return HermitianMatrix::symmetrized(spectrum_.from_frame(apply_in_frame(x.matrix(), p)));
  }

  /// <H, phi^{-1} K>, real part of the sesquilinear form.
  double inverse_form(const HermitianMatrix& h, const HermitianMatrix& k) const {
    const CMatrix a = spectrum_.to_frame(h.matrix());
    const CMatrix b = spectrum_.to_frame(k.matrix());
    const RMatrix w = coefficients(-1.0);
    double acc = 0.0;
    for (Index j = 0; j < a.cols(); ++j)
      for (Index i = 0; i < a.rows(); ++i) acc += w(i, j) * (std::conj(a(i, j)) * b(i, j)).real();
    return acc;
  }

 private:
  Spectrum spectrum_;
  RMatrix log_coeff_;
};

/// phi(L_D, R_D)^p X for p in {-1, -1/2, 1/2, 1}.
inline HermitianMatrix kernel_apply(const Kernel& kernel, const SpdMatrix& d,
                                    const HermitianMatrix& x, double p) {
  if (p != -1.0 && p != -0.5 && p != 0.5 && p != 1.0)
    throw DomainError("kernel power must be one of -1, -1/2, 1/2, 1");
  if (x.dim() != d.dim()) throw DimensionError("kernel_apply dimension mismatch");
  return KernelOperator(kernel, d).apply(x, p);
}

/// K_D^phi(H, K) = Re Tr(H* phi(L_D,R_D)^{-1} K).
inline double metric_eval(const Kernel& kernel, const SpdMatrix& d, const HermitianMatrix& h,
                          const HermitianMatrix& k) {
  if (h.dim() != d.dim() || k.dim() != d.dim()) throw DimensionError("metric_eval dimension mismatch");
  const KernelOperator op(kernel, d);
  return 0.5 * (op.inverse_form(h, k) + op.inverse_form(k, h));
}

/// H = H_c + H_q with H_c commuting with D (its on-cluster blocks) and
/// H_q = i[D, K] for the Hermitian generator K, which has no on-cluster blocks.
struct TangentSplit {
  HermitianMatrix commuting;
  HermitianMatrix off_diagonal;
  HermitianMatrix generator;
};

inline TangentSplit tangent_split(const SpdMatrix& d, const HermitianMatrix& h,
                                  double cluster_tol = kClusterTol) {
  if (h.dim() != d.dim()) throw DimensionError("tangent_split dimension mismatch");
  const Spectrum s = cluster_tol == kClusterTol ? d.spectrum()
                                                : spectral_decompose(d.hermitian(), cluster_tol);
  const CMatrix ht = s.to_frame(h.matrix());
  const Index n = s.dim();
  CMatrix hc = CMatrix::Zero(n, n), hq = CMatrix::Zero(n, n), k = CMatrix::Zero(n, n);
  const Complex minus_i(0.0, -1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (s.same_cluster(i, j)) {
        hc(i, j) = ht(i, j);
      } else {
        hq(i, j) = ht(i, j);
        k(i, j) = minus_i * ht(i, j) / (s.eigenvalues(i) - s.eigenvalues(j));
      }
    }
  }
  return {HermitianMatrix::symmetrized(s.from_frame(hc)), HermitianMatrix::symmetrized(s.from_frame(hq)),
          HermitianMatrix::symmetrized(s.from_frame(k))};
}

/// psi(x, y) = phi(G(x), G(y)) / G^[1](x, y)^2, the kernel of the metric
/// pulled back through A -> G(A).
inline Kernel pullback_kernel(const Kernel& phi, const ScalarMap& g) {
  for (double x : default_grid(17)) {
    if (g.defined_at(x) && g.derivative(x) == 0.0)
      throw DomainError("pull-back map has vanishing derivative at " + std::to_string(x));
  }
  return Kernel::custom("pullback(" + g.name() + ")", [phi, g](double x, double y) {
    const double dd = divided_difference(g, x, y);
    if (dd == 0.0 || !std::isfinite(dd))
      throw DomainError("pull-back map has vanishing divided difference");
    return phi.log_eval(g(x), g(y)) - 2.0 * std::log(std::abs(dd));
  });
}

inline HermitianMatrix i_commutator(const HermitianMatrix& d, const HermitianMatrix& k) {
  return HermitianMatrix::symmetrized(Complex(0.0, 1.0) * commutator(d.matrix(), k.matrix()));
}

/// f(0) for the function behind a monotone metric. Built-in functions know
/// their limit; custom ones are probed at 1e-12 with one Richardson step.
inline double standard_value_at_zero(const StandardFunctionSpec& f) {
  if (f.kind() != StandardFunctionSpec::Kind::Custom) return f(0.0);
  const double h = 1e-12;
  return 2.0 * f(h) - f(2.0 * h);
}

inline KernelSpec standard_kernel(const StandardFunctionSpec& f) {
  return {MeanSpec::from_operator_monotone(f), 1.0};
}

/// Metric-adjusted skew information (f(0)/2) K^f_D(i[D,K], i[D,K]).
inline double skew_information(const StandardFunctionSpec& f, const SpdMatrix& d,
                               const HermitianMatrix& k) {
  const double f0 = standard_value_at_zero(f);
  if (!(f0 > 1e-12)) throw PreconditionError("skew information needs a regular function (f(0) > 0)");
  const HermitianMatrix c = i_commutator(d.hermitian(), k);
  return 0.5 * f0 * metric_eval(standard_kernel(f), d, c, c);
}

/// -1/2 Tr([D^p, K][D^(1-p), K]).
inline double wyd_direct(double p, const SpdMatrix& d, const HermitianMatrix& k) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("WYD parameter must lie in (0,1)");
  if (k.dim() != d.dim()) throw DimensionError("wyd_direct dimension mismatch");
  const CMatrix dp = apply_scalar_function(d, ScalarMap::power(p)).matrix();
  const CMatrix dq = apply_scalar_function(d, ScalarMap::power(1.0 - p)).matrix();
  const CMatrix a = commutator(dp, k.matrix());
  const CMatrix b = commutator(dq, k.matrix());
  return -0.5 * (a * b).trace().real();
}

/// <K, J_D^f K> with J_D^f = phi_f(L_D, R_D), phi_f(x, y) = y f(x/y).
inline double generalized_variance(const StandardFunctionSpec& f, const SpdMatrix& d,
                                   const HermitianMatrix& k) {
  return hs_inner(k, kernel_apply(standard_kernel(f), d, k, 1.0));
}

}  // namespace spdgeo
