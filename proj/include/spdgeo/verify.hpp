#pragma once

#include <chrono>
#include <climits>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "spdgeo/error.hpp"
#include "spdgeo/geodesic.hpp"
#include "spdgeo/io.hpp"
#include "spdgeo/matcore.hpp"
#include "spdgeo/means.hpp"
#include "spdgeo/metric.hpp"
#include "spdgeo/shortest.hpp"

namespace spdgeo {

struct CheckSpec {
  std::string name;
  std::uint64_t seed = 0;
  int dimension = 3;
  int samples = 200;
  /// Overrides of the check's named tolerances and parameters.
  std::map<std::string, double> tolerances;
  /// Re-run a single sample index, as recorded in a witness.
  std::optional<int> replay_sample;
};

/// Every observation contributes a margin (tolerance minus violation, or a
/// strict gap); the check passes iff the smallest margin is >= 0.
struct CheckReport {
  std::string name;
  bool pass = false;
  double worst_margin = std::numeric_limits<double>::infinity();
  nlohmann::json witness;
  double elapsed = 0.0;
  std::uint64_t seed = 0;
  int dimension = 0;
  int samples = 0;
  std::map<std::string, double> tolerances;
  nlohmann::json info = nlohmann::json::object();
};

inline nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["pass"] = r.pass;
  j["worst_margin"] = std::isfinite(r.worst_margin) ? nlohmann::json(r.worst_margin) : nlohmann::json();
  j["witness"] = r.witness;
  j["elapsed"] = r.elapsed;
  j["seed"] = r.seed;
  j["dimension"] = r.dimension;
  j["samples"] = r.samples;
  j["tolerances"] = r.tolerances;
  j["info"] = r.info;
  return j;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline nlohmann::json matrix_json(const CMatrix& m) { return nlohmann::json::parse(matrix_to_json(m)); }
inline nlohmann::json matrix_json(const SpdMatrix& m) { return matrix_json(m.matrix()); }
inline nlohmann::json matrix_json(const HermitianMatrix& m) { return matrix_json(m.matrix()); }

class CheckContext {
 public:
  CheckContext(const CheckSpec& spec, std::map<std::string, double> defaults)
      : spec_(spec), tol_(std::move(defaults)) {
    for (const auto& [key, value] : spec.tolerances) {
      if (!tol_.count(key)) throw PreconditionError("check " + spec.name + " has no tolerance '" + key + "'");
      tol_[key] = value;
    }
  }

  double tol(const std::string& key) const { return tol_.at(key); }
  const std::map<std::string, double>& tolerances() const { return tol_; }
  Index dim() const { return spec_.dimension; }

  std::uint64_t sample_seed(int idx) const {
    return splitmix64(spec_.seed ^ splitmix64(fnv1a(spec_.name) + static_cast<std::uint64_t>(idx)));
  }

  std::vector<int> sample_indices(int cap = INT_MAX) const {
    if (spec_.replay_sample) return {*spec_.replay_sample};
    std::vector<int> idx;
    for (int i = 0; i < std::min(spec_.samples, cap); ++i) idx.push_back(i);
    return idx;
  }

  double log_spread() const { return tol("log_spread"); }

  SpdMatrix spd(std::uint64_t s, int k) const {
    return random_spd(dim(), splitmix64(s + static_cast<std::uint64_t>(k)), log_spread());
  }

  /// Independent frames, redrawn until ||[A, B]||_HS >= 1e-3.
  std::pair<SpdMatrix, SpdMatrix> noncommuting_pair(std::uint64_t s) const {
    for (int attempt = 0;; ++attempt) {
      SpdMatrix a = spd(s, 2 * attempt), b = spd(s, 2 * attempt + 1);
      if (commutator(a.matrix(), b.matrix()).norm() >= 1e-3) return {std::move(a), std::move(b)};
      if (attempt > 100) throw NumericalError("could not draw a non-commuting pair", static_cast<long>(dim()));
    }
  }

  /// Shared Haar frame with independent log-uniform spectra.
  std::pair<SpdMatrix, SpdMatrix> commuting_pair(std::uint64_t s) const {
    std::mt19937_64 rng(splitmix64(s));
    const CMatrix u = random_unitary(dim(), rng);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    RVector la(dim()), lb(dim());
    for (Index i = 0; i < dim(); ++i) la(i) = std::exp(log_spread() * unif(rng));
    for (Index i = 0; i < dim(); ++i) lb(i) = std::exp(log_spread() * unif(rng));
    auto make = [&](const RVector& l) {
      return SpdMatrix(HermitianMatrix::symmetrized(u * l.cast<Complex>().asDiagonal() * u.adjoint()));
    };
    return {make(la), make(lb)};
  }

  void observe(double margin, int sample, const std::function<nlohmann::json()>& what) {
    if (std::isnan(margin)) margin = -std::numeric_limits<double>::infinity();
    ++observations_;
    if (margin < worst_) {
      worst_ = margin;
      witness_ = nlohmann::json::object();
      witness_["check"] = spec_.name;
      witness_["seed"] = spec_.seed;
      witness_["dimension"] = spec_.dimension;
      if (sample >= 0) {
        witness_["sample"] = sample;
        witness_["sample_seed"] = sample_seed(sample);
      }
      witness_["margin"] = std::isfinite(margin) ? nlohmann::json(margin) : nlohmann::json("-inf");
      witness_["detail"] = what();
    }
  }

  nlohmann::json& info() { return info_; }
  double worst() const { return worst_; }
  long observations() const { return observations_; }
  const nlohmann::json& witness() const { return witness_; }

 private:
  const CheckSpec& spec_;
  std::map<std::string, double> tol_;
  double worst_ = std::numeric_limits<double>::infinity();
  long observations_ = 0;
  nlohmann::json witness_;
  nlohmann::json info_ = nlohmann::json::object();
};

inline double rel_gap(double value, double reference) {
  return std::abs(value - reference) / std::max(std::abs(reference), 1e-300);
}

/// Lengths of a curve under several kernels (HS norm).
inline std::vector<double> hs_lengths(const std::vector<Kernel>& kernels, const Curve& c, int q) {
  const auto all = curve_lengths(kernels, c, {NormSpec::hilbert_schmidt()}, q);
  std::vector<double> out;
  for (const auto& row : all) out.push_back(row[0]);
  return out;
}

/// Euclidean (HS) lengths of F o gamma for several scalar maps F, from the
/// Loewner matrices of F in the frame of gamma(t).
inline std::vector<double> image_lengths(const std::vector<ScalarMap>& maps, const Curve& c, int q) {
  const QuadratureRule rule = rule_for(c, q);
  std::vector<double> out(maps.size(), 0.0);
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const CurvePoint p = c(rule.nodes[k]);
    const Spectrum s = decompose(hermitian_part(p.point), kClusterTol);
    const CMatrix vt = s.to_frame(p.velocity);
    for (std::size_t m = 0; m < maps.size(); ++m) {
      CMatrix y = vt;
      y.array() *= loewner_matrix(s, maps[m]).cast<Complex>().array();
      out[m] += rule.weights[k] * y.norm();
    }
  }
  return out;
}

inline nlohmann::json pair_json(const SpdMatrix& a, const SpdMatrix& b) {
  return {{"A", matrix_json(a)}, {"B", matrix_json(b)}};
}

inline PathSearchConfig oracle_config(const CheckContext& ctx) {
  PathSearchConfig cfg;
  cfg.segments = static_cast<int>(ctx.tol("segments"));
  cfg.max_iterations = static_cast<int>(ctx.tol("max_iterations"));
  return cfg;
}

// ---------------------------------------------------------------------------

inline void check_thm2_1(CheckContext& ctx) {
  const std::vector<double> thetas{-2.0, 0.0, 1.0, 2.0, 3.0, 4.0};
  const int q = static_cast<int>(ctx.tol("quadrature"));
  std::vector<Kernel> kernels;
  std::vector<ScalarMap> maps;
  for (double th : thetas) {
    kernels.emplace_back(theta_kernel(th));
    maps.push_back(ScalarMap::box_cox(0.5 * (2.0 - th)));
  }
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    std::vector<std::pair<std::string, Curve>> curves{{"fisher", geodesic_curve(GeodesicFamily::fisher_rao(), a, b)}};
    for (double th : thetas)
      curves.emplace_back("theta:" + format_double(th), geodesic_curve(GeodesicFamily::theta(th), a, b));
    for (std::size_t c = 0; c < curves.size(); ++c) {
      const auto lengths = hs_lengths(kernels, curves[c].second, q);
      const auto images = image_lengths(maps, curves[c].second, q);
      for (std::size_t k = 0; k < thetas.size(); ++k) {
        const double gap = rel_gap(lengths[k], images[k]);
        ctx.observe(ctx.tol("rel") - gap, idx, [&] {
          auto j = pair_json(a, b);
          j["curve"] = curves[c].first;
          j["theta"] = thetas[k];
          j["kernel_length"] = lengths[k];
          j["euclidean_length"] = images[k];
          return j;
        });
        if (c == k + 1) {
          const double d = closed_form_distance(GeodesicFamily::theta(thetas[k]), a, b);
          ctx.observe(ctx.tol("rel") - rel_gap(lengths[k], d), idx, [&] {
            auto j = pair_json(a, b);
            j["theta"] = thetas[k];
            j["length"] = lengths[k];
            j["closed_form"] = d;
            return j;
          });
        }
      }
    }
  }
}

inline void check_lem2_2(CheckContext& ctx) {
  std::vector<double> thetas;
  for (int k = -80; k <= 80; ++k) thetas.push_back(0.5 * k);
  for (double extra : {-1e-3, 1e-3, 1.999, 2.001, 3.999, 4.001}) thetas.push_back(extra);
  std::sort(thetas.begin(), thetas.end());
  const double far = ctx.tol("limit_theta");
  double gap200 = 0.0;
  for (int idx : ctx.sample_indices()) {
    std::mt19937_64 rng(ctx.sample_seed(idx));
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    double lx = 0.0, ly = 0.0;
    do {
      lx = unif(rng);
      ly = unif(rng);
    } while (std::abs(lx - ly) < 0.05);
    const double x = std::exp(lx), y = std::exp(ly);
    double prev = MeanSpec::stolarsky(thetas.front()).log_eval(x, y);
    for (std::size_t k = 1; k < thetas.size(); ++k) {
      const double cur = MeanSpec::stolarsky(thetas[k]).log_eval(x, y);
      const double drop = prev - cur;
      ctx.observe(drop > 0.0 ? drop : drop - std::numeric_limits<double>::min(), idx, [&] {
        return nlohmann::json{{"x", x}, {"y", y}, {"theta_lo", thetas[k - 1]}, {"theta_hi", thetas[k]},
                              {"log_mean_lo", prev}, {"log_mean_hi", cur}};
      });
      prev = cur;
    }
    const double hi = std::max(x, y), lo = std::min(x, y);
    const double m_neg = MeanSpec::stolarsky(-far)(x, y), m_pos = MeanSpec::stolarsky(far)(x, y);
    ctx.observe(ctx.tol("limit_rel") - rel_gap(m_neg, hi), idx, [&] {
      return nlohmann::json{{"x", x}, {"y", y}, {"theta", -far}, {"mean", m_neg}, {"max", hi}};
    });
    ctx.observe(ctx.tol("limit_rel") - rel_gap(m_pos, lo), idx, [&] {
      return nlohmann::json{{"x", x}, {"y", y}, {"theta", far}, {"mean", m_pos}, {"min", lo}};
    });
    gap200 = std::max({gap200, rel_gap(MeanSpec::stolarsky(-200.0)(x, y), hi),
                       rel_gap(MeanSpec::stolarsky(200.0)(x, y), lo)});
  }
  ctx.info()["limit_gap_at_theta_200"] = gap200;
}

inline void check_prop2_3(CheckContext& ctx) {
  const std::vector<double> thetas{-1.0, 0.0, 1.0, 2.0, 3.0, 5.0};
  const std::vector<MeanSpec> means{MeanSpec::arithmetic(), MeanSpec::logarithmic(), MeanSpec::harmonic(),
                                    MeanSpec::identric(),   MeanSpec::root(),        MeanSpec::geometric()};
  const int q = static_cast<int>(ctx.tol("quadrature"));
  std::vector<Kernel> forward, backward;
  std::vector<std::string> labels;
  for (double th : thetas) {
    forward.emplace_back(theta_kernel(th));
    backward.emplace_back(theta_kernel(4.0 - th));
    labels.push_back("theta:" + format_double(th));
  }
  for (const auto& m : means) {
    forward.emplace_back(KernelSpec{m, 2.0});
    backward.emplace_back(KernelSpec{m, 2.0});
    labels.push_back(format_mean(m) + "^2");
  }
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    const std::vector<std::pair<std::string, Curve>> curves{
        {"theta:0", geodesic_curve(GeodesicFamily::theta(0.0), a, b)},
        {"theta:2", geodesic_curve(GeodesicFamily::theta(2.0), a, b)},
        {"fisher", geodesic_curve(GeodesicFamily::fisher_rao(), a, b)}};
    for (const auto& [cname, c] : curves) {
      const auto l1 = hs_lengths(forward, c, q);
      const auto l2 = hs_lengths(backward, inverse_curve(c), q);
      for (std::size_t k = 0; k < l1.size(); ++k) {
        ctx.observe(ctx.tol("rel") - rel_gap(l2[k], l1[k]), idx, [&] {
          auto j = pair_json(a, b);
          j["curve"] = cname;
          j["kernel"] = labels[k];
          j["length"] = l1[k];
          j["reflected_length"] = l2[k];
          return j;
        });
      }
    }
  }
}

inline void check_rem2_4(CheckContext& ctx) {
  const int q = static_cast<int>(ctx.tol("quadrature"));
  // (theta, theta'): Psi(A) = c A^s carries phi_theta' lengths to phi_theta lengths.
  const std::vector<std::pair<double, double>> pairs{{0.0, 4.0}, {1.0, 3.0}, {-2.0, 1.0}, {0.0, 3.0}, {3.0, 6.0}};
  const std::vector<double> powers{0.5, 2.0, -1.0};
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    const std::vector<std::pair<std::string, Curve>> curves{
        {"fisher", geodesic_curve(GeodesicFamily::fisher_rao(), a, b)},
        {"theta:1", geodesic_curve(GeodesicFamily::theta(1.0), a, b)}};
    for (const auto& [cname, c] : curves) {
      for (const auto& [th, thp] : pairs) {
        const double r = 0.5 * (2.0 - th), rp = 0.5 * (2.0 - thp);
        const double s = rp / r, scale = std::pow(std::abs(r / rp), 1.0 / r);
        const double base = hs_lengths({theta_kernel(thp)}, c, q)[0];
        const double image = hs_lengths({theta_kernel(th)}, mapped_curve(c, ScalarMap::power(s), scale), q)[0];
        ctx.observe(ctx.tol("rel") - rel_gap(image, base), idx, [&] {
          auto j = pair_json(a, b);
          j["curve"] = cname;
          j["theta"] = th;
          j["theta_prime"] = thp;
          j["length"] = base;
          j["image_length"] = image;
          return j;
        });
      }
      const double base = hs_lengths({theta_kernel(2.0)}, c, q)[0];
      for (double alpha : powers) {
        const double image = hs_lengths({theta_kernel(2.0)}, mapped_curve(c, ScalarMap::power(alpha)), q)[0];
        ctx.observe(ctx.tol("rel") - rel_gap(image, std::abs(alpha) * base), idx, [&] {
          auto j = pair_json(a, b);
          j["curve"] = cname;
          j["power"] = alpha;
          j["length"] = base;
          j["image_length"] = image;
          return j;
        });
      }
    }
  }
}

inline void check_lem2_5(CheckContext& ctx) {
  const MeanSpec h = MeanSpec::harmonic();
  std::vector<double> xs;
  for (double x : default_grid(64))
    if (x != 1.0) xs.push_back(x);
  for (double x : {0.8, 0.95, 1.05, 1.25}) xs.push_back(x);

  // theta = 10: M_10 > H away from the diagonal.
  const MeanSpec m10 = MeanSpec::stolarsky(10.0);
  for (double x : xs) {
    const double gap = m10.log_eval(x, 1.0) - h.log_eval(x, 1.0);
    ctx.observe(gap > 0.0 ? gap : gap - std::numeric_limits<double>::min(), -1, [&] {
      return nlohmann::json{{"theta", 10.0}, {"x", x}, {"log_gap", gap}};
    });
  }

  // theta > 10: M_theta < H on a punctured neighbourhood of 1, M_theta > H far out.
  nlohmann::json radii = nlohmann::json::object();
  for (double th : {10.5, 11.0, 12.0, 16.0, 20.0}) {
    const MeanSpec m = MeanSpec::stolarsky(th);
    double found = 0.0, worst = -std::numeric_limits<double>::infinity();
    for (double delta = 0.5; delta > 1e-4 && found == 0.0; delta *= 0.5) {
      double least = std::numeric_limits<double>::infinity();
      for (int j = 0; j <= 12; ++j) {
        for (double sign : {-1.0, 1.0}) {
          const double L = sign * delta * std::pow(0.5, j);
          const double gap = (h.log_eval(std::exp(L), 1.0) - m.log_eval(std::exp(L), 1.0)) / std::pow(L, 4);
          least = std::min(least, gap);
        }
      }
      worst = std::max(worst, least);
      if (least > 0.0) found = delta;
    }
    radii[format_double(th)] = found;
    ctx.observe(found > 0.0 ? found : worst, -1,
                [&] { return nlohmann::json{{"theta", th}, {"neighbourhood", found}, {"best_scaled_gap", worst}}; });
    const double far = m.log_eval(1e8, 1.0) - h.log_eval(1e8, 1.0);
    ctx.observe(far, -1, [&] { return nlohmann::json{{"theta", th}, {"x", 1e8}, {"log_gap", far}}; });
  }
  ctx.info()["below_harmonic_radius"] = radii;

  // Second-order coefficient of ln M_theta - ln H at x = e^L: (10 - theta)/48.
  const double L = 1e-3;
  for (double th : {0.0, 4.0, 8.0, 12.0, 20.0}) {
    const double c = (MeanSpec::stolarsky(th).log_eval(std::exp(L), 1.0) - h.log_eval(std::exp(L), 1.0)) / (L * L);
    const double expect = (10.0 - th) / 48.0;
    ctx.observe(ctx.tol("coef_rel") - rel_gap(c, expect), -1,
                [&] { return nlohmann::json{{"theta", th}, {"coefficient", c}, {"expected", expect}}; });
  }
}

inline void check_thm3_1(CheckContext& ctx) {
  const Index n = ctx.dim();
  const double rn = std::sqrt(static_cast<double>(n));
  const CMatrix id = CMatrix::Identity(n, n);
  auto ray = [&](double lo, double hi) {
    std::vector<double> br{lo};
    const int decades = std::max(1, static_cast<int>(std::ceil(std::log10(hi / lo))));
    for (int k = 1; k <= decades; ++k) br.push_back(lo * std::pow(hi / lo, double(k) / decades));
    br.back() = hi;
    return Curve(n, [id](double t) { return CurvePoint{t * id, id}; }, br);
  };
  // Scalar antiderivative of sqrt(n) t^(-theta/2) on [lo, hi].
  auto exact = [&](double th, double lo, double hi) {
    const double e = 1.0 - 0.5 * th;
    if (e == 0.0) return rn * std::log(hi / lo);
    return rn * (std::pow(hi, e) - std::pow(lo, e)) / e;
  };
  const int q = static_cast<int>(ctx.tol("quadrature"));
  nlohmann::json rows = nlohmann::json::array();
  auto probe = [&](double th, double lo, double hi) {
    const double len = curve_length(theta_kernel(th), ray(lo, hi), NormSpec::hilbert_schmidt(), q);
    const double ref = exact(th, lo, hi);
    ctx.observe(ctx.tol("rel") - rel_gap(len, ref), -1, [&] {
      return nlohmann::json{{"theta", th}, {"lo", lo}, {"hi", hi}, {"length", len}, {"antiderivative", ref}};
    });
    rows.push_back({th, lo, hi, len});
    return len;
  };
  for (double th : {-2.0, 0.0, 1.0, 1.5}) {
    // finite as a -> 0: lengths converge to sqrt(n)/(1 - theta/2)
    const double limit = rn / (1.0 - 0.5 * th);
    for (double a : {1e-2, 1e-4, 1e-6}) {
      const double len = probe(th, a, 1.0);
      ctx.observe(len < limit ? 1.0 : -1.0, -1, [&] { return nlohmann::json{{"theta", th}, {"a", a}, {"length", len}}; });
    }
    probe(th, 1.0, 1e4);
  }
  for (double th : {2.5, 3.0, 4.0, 6.0}) {
    const double limit = rn / (0.5 * th - 1.0);
    for (double b : {1e2, 1e4, 1e6}) {
      const double len = probe(th, 1.0, b);
      ctx.observe(len < limit ? 1.0 : -1.0, -1, [&] { return nlohmann::json{{"theta", th}, {"b", b}, {"length", len}}; });
    }
    probe(th, 1e-4, 1.0);
  }
  for (double a : {1e-2, 1e-4, 1e-6}) {
    probe(2.0, a, 1.0);
    probe(2.0, 1.0, 1.0 / a);
  }
  ctx.info()["ray_lengths"] = rows;
}

inline void check_lem3_2(CheckContext& ctx) {
  const std::vector<std::pair<std::string, Kernel>> kernels{
      {"geometric^2", KernelSpec{MeanSpec::geometric(), 2.0}},
      {"logarithmic^2", KernelSpec{MeanSpec::logarithmic(), 2.0}},
      {"arithmetic^2", KernelSpec{MeanSpec::arithmetic(), 2.0}}};
  const PathSearchConfig cfg = oracle_config(ctx);
  const SpdMatrix id = SpdMatrix::identity(ctx.dim());
  for (int idx : ctx.sample_indices(10)) {
    const SpdMatrix a = ctx.spd(ctx.sample_seed(idx), 0);
    const double exact = apply_scalar_function(a, ScalarMap::log()).matrix().norm();
    for (const auto& [label, k] : kernels) {
      const PathSearchResult r = numeric_shortest_distance(k, a, id, cfg);
      auto what = [&] {
        return nlohmann::json{{"A", matrix_json(a)}, {"kernel", label}, {"numeric", r.distance},
                              {"log_norm", exact}, {"converged", r.converged}};
      };
      ctx.observe(ctx.tol("rel") - (r.distance - exact) / exact, idx, what);
      ctx.observe(r.distance - exact + ctx.tol("lower"), idx, what);
    }
  }
}

inline void check_thm3_3(CheckContext& ctx) {
  const std::vector<double> alphas{0.25, 0.5, 1.0, 1.5, 2.0};
  const int q = static_cast<int>(ctx.tol("quadrature"));
  for (int idx : ctx.sample_indices()) {
    const std::uint64_t s = ctx.sample_seed(idx);
    const auto [a, b] = ctx.noncommuting_pair(s);
    for (double alpha : alphas) {
      const auto fam = GeodesicFamily::alpha(alpha);
      const double len = curve_length(fam.kernel(), geodesic_curve(fam, a, b), NormSpec::hilbert_schmidt(), q);
      const double d = closed_form_distance(fam, a, b);
      ctx.observe(ctx.tol("rel") - rel_gap(len, d), idx, [&] {
        auto j = pair_json(a, b);
        j["alpha"] = alpha;
        j["length"] = len;
        j["closed_form"] = d;
        return j;
      });
    }
    const Curve c1 = geodesic_curve(GeodesicFamily::alpha(1.0), a, b);
    const Curve fr = geodesic_curve(GeodesicFamily::fisher_rao(), a, b);
    for (double t : {0.25, 0.5, 0.75}) {
      const double diff = (c1(t).point - fr(t).point).norm() / fr(t).point.norm();
      ctx.observe(ctx.tol("coincide") - diff, idx, [&] {
        auto j = pair_json(a, b);
        j["t"] = t;
        j["difference"] = diff;
        return j;
      });
    }
    // psi_alpha = N_alpha^2 is the pull-back of the Fisher-Rao kernel by A -> A^alpha, up to alpha^2.
    std::mt19937_64 rng(splitmix64(s ^ 0x5bd1e995ULL));
    std::uniform_real_distribution<double> unif(-3.0, 3.0);
    for (int p = 0; p < 8; ++p) {
      const double x = std::exp(unif(rng)), y = std::exp(unif(rng));
      for (double alpha : alphas) {
        const Kernel pb = pullback_kernel(KernelSpec{MeanSpec::geometric(), 2.0}, ScalarMap::power(alpha));
        const double lhs = pb.log_eval(x, y) + 2.0 * std::log(alpha);
        const double rhs = KernelSpec{MeanSpec::alpha_family(alpha), 2.0}.log_eval(x, y);
        ctx.observe(ctx.tol("pullback") - std::abs(lhs - rhs), idx,
                    [&] { return nlohmann::json{{"x", x}, {"y", y}, {"alpha", alpha}, {"log_pullback", lhs},
                                                {"log_psi", rhs}}; });
      }
    }
  }
}

inline void check_lie_trotter(CheckContext& ctx) {
  double final_gap = 0.0;
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    const double le = closed_form_distance(GeodesicFamily::theta(2.0), a, b);
    std::vector<double> ds;
    for (int k = 0; k <= 7; ++k) ds.push_back(closed_form_distance(GeodesicFamily::alpha(std::ldexp(2.0, -k)), a, b));
    for (std::size_t k = 1; k < ds.size(); ++k) {
      ctx.observe(ctx.tol("monotone") * std::max(1.0, ds[k - 1]) - (ds[k] - ds[k - 1]), idx, [&] {
        auto j = pair_json(a, b);
        j["alpha_hi"] = std::ldexp(2.0, -static_cast<int>(k - 1));
        j["alpha_lo"] = std::ldexp(2.0, -static_cast<int>(k));
        j["distance_hi"] = ds[k - 1];
        j["distance_lo"] = ds[k];
        return j;
      });
    }
    const double gap = rel_gap(ds.back(), le);
    final_gap = std::max(final_gap, gap);
    ctx.observe(ctx.tol("limit_rel") - gap, idx, [&] {
      auto j = pair_json(a, b);
      j["distance"] = ds.back();
      j["log_euclidean"] = le;
      return j;
    });
  }
  ctx.info()["largest_gap_at_alpha_1_64"] = final_gap;
}

struct OrderedPair {
  std::string label;
  KernelSpec first, second;
  Dominance expected;
};

inline void check_thm4_1(CheckContext& ctx) {
  const std::vector<OrderedPair> pairs{
      {"H^1 vs G^1", {MeanSpec::harmonic(), 1.0}, {MeanSpec::geometric(), 1.0}, Dominance::Dominated},
      {"G^2 vs L^2", {MeanSpec::geometric(), 2.0}, {MeanSpec::logarithmic(), 2.0}, Dominance::Dominated},
      {"L^1 vs A^1", {MeanSpec::logarithmic(), 1.0}, {MeanSpec::arithmetic(), 1.0}, Dominance::Dominated},
      {"I^1 vs A^1", {MeanSpec::identric(), 1.0}, {MeanSpec::arithmetic(), 1.0}, Dominance::Dominated},
      {"root^-1 vs L^-1", {MeanSpec::root(), -1.0}, {MeanSpec::logarithmic(), -1.0}, Dominance::Dominated},
      {"A^3 vs G^3", {MeanSpec::arithmetic(), 3.0}, {MeanSpec::geometric(), 3.0}, Dominance::Dominates},
      {"psi_2 vs psi_1/2", {MeanSpec::alpha_family(2.0), 2.0}, {MeanSpec::alpha_family(0.5), 2.0},
       Dominance::Dominated},
      {"H^12 vs phi_12", {MeanSpec::harmonic(), 12.0}, theta_kernel(12.0), Dominance::Incomparable}};
  const int q = static_cast<int>(ctx.tol("quadrature"));

  for (const auto& p : pairs) {
    const Dominance got = pointwise_dominates(p.first, p.second);
    ctx.observe(got == p.expected ? 1.0 : -1.0, -1, [&] {
      return nlohmann::json{{"pair", p.label}, {"expected", to_string(p.expected)}, {"got", to_string(got)}};
    });
    if (p.first.theta == p.second.theta && p.first.theta != 0.0) {
      Dominance means = mean_dominates(p.first.mean, p.second.mean);
      if (p.first.theta < 0.0 && means == Dominance::Dominated) means = Dominance::Dominates;
      else if (p.first.theta < 0.0 && means == Dominance::Dominates) means = Dominance::Dominated;
      ctx.observe(means == got ? 1.0 : -1.0, -1, [&] {
        return nlohmann::json{{"pair", p.label}, {"kernel_order", to_string(got)}, {"mean_order", to_string(means)}};
      });
    }
  }

  // Incomparable kernels give incomparable metrics: at D = diag(x, y, 1, ...)
  // the off-diagonal unit direction sees 2/phi(x, y).
  {
    const auto& p = pairs.back();
    bool seen_below = false, seen_above = false;
    for (double x : default_grid(16)) {
      if (seen_below && seen_above) break;
      const double y = 1.0 / std::sqrt(x) + 0.5;
      if (std::abs(x - y) < 1e-3 || std::abs(x - 1.0) < 1e-3 || std::abs(y - 1.0) < 1e-3) continue;
      RVector dg = RVector::Ones(ctx.dim());
      dg(0) = x;
      dg(1) = y;
      const SpdMatrix d = SpdMatrix::diagonal(dg);
      CMatrix hm = CMatrix::Zero(ctx.dim(), ctx.dim());
      hm(0, 1) = hm(1, 0) = 1.0;
      const HermitianMatrix h(hm);
      const double k1 = metric_eval(p.first, d, h, h), k2 = metric_eval(p.second, d, h, h);
      if (k1 < k2 * (1.0 - 1e-9)) seen_below = true;
      if (k1 > k2 * (1.0 + 1e-9)) seen_above = true;
    }
    ctx.observe(seen_below && seen_above ? 1.0 : -1.0, -1,
                [&] { return nlohmann::json{{"pair", p.label}, {"metric_below", seen_below}, {"metric_above", seen_above}}; });
  }

  for (int idx : ctx.sample_indices()) {
    const std::uint64_t s = ctx.sample_seed(idx);
    const auto [a, b] = ctx.noncommuting_pair(s);
    const SpdMatrix d = ctx.spd(s, 1000);
    const HermitianMatrix h = random_hermitian(ctx.dim(), splitmix64(s + 1001));
    const std::vector<std::pair<std::string, Curve>> curves{
        {"fisher", geodesic_curve(GeodesicFamily::fisher_rao(), a, b)},
        {"theta:1", geodesic_curve(GeodesicFamily::theta(1.0), a, b)}};
    for (const auto& p : pairs) {
      if (p.expected != Dominance::Dominated && p.expected != Dominance::Dominates) continue;
      const double sign = p.expected == Dominance::Dominated ? 1.0 : -1.0;
      // (i) => (iii): phi1 <= phi2 gives K^phi1 >= K^phi2 and longer curves.
      const double k1 = metric_eval(p.first, d, h, h), k2 = metric_eval(p.second, d, h, h);
      ctx.observe(sign * (k1 - k2) / k2 + ctx.tol("order"), idx, [&] {
        return nlohmann::json{{"pair", p.label}, {"D", matrix_json(d)}, {"H", matrix_json(h)},
                              {"metric_first", k1}, {"metric_second", k2}};
      });
      for (const auto& [cname, c] : curves) {
        const auto l = hs_lengths({p.first, p.second}, c, q);
        ctx.observe(sign * (l[0] - l[1]) / l[1] + ctx.tol("order"), idx, [&] {
          auto j = pair_json(a, b);
          j["pair"] = p.label;
          j["curve"] = cname;
          j["length_first"] = l[0];
          j["length_second"] = l[1];
          return j;
        });
      }
    }
    // (i) => (iv) with closed forms on both sides: psi_beta <= psi_alpha <= L^2.
    const double d2 = closed_form_distance(GeodesicFamily::alpha(2.0), a, b);
    const double dh = closed_form_distance(GeodesicFamily::alpha(0.5), a, b);
    const double le = closed_form_distance(GeodesicFamily::theta(2.0), a, b);
    for (const auto& [hi, lo, label] : {std::tuple{d2, dh, "psi_2 vs psi_1/2"}, std::tuple{dh, le, "psi_1/2 vs L^2"}}) {
      ctx.observe((hi - lo) / lo + ctx.tol("order"), idx, [&] {
        auto j = pair_json(a, b);
        j["pair"] = label;
        j["distance_first"] = hi;
        j["distance_second"] = lo;
        return j;
      });
    }
  }
}

inline void check_lem4_2(CheckContext& ctx) {
  const std::vector<std::pair<std::string, Kernel>> kernels{{"geometric^2", KernelSpec{MeanSpec::geometric(), 2.0}},
                                                            {"phi_1", theta_kernel(1.0)}};
  PathSearchConfig cfg = oracle_config(ctx);
  for (int idx : ctx.sample_indices(10)) {
    const std::uint64_t s = ctx.sample_seed(idx);
    const SpdMatrix d = ctx.spd(s, 0);
    const HermitianMatrix h = random_hermitian(ctx.dim(), splitmix64(s + 1));
    for (const auto& [label, k] : kernels) {
      const SlopeResult r = directional_distance_slope(k, d, h, {1e-2, 5e-3, 2.5e-3}, cfg);
      const double expect = kernel_apply(k, d, h, -0.5).matrix().norm();
      ctx.observe(ctx.tol("rel") - rel_gap(r.slope, expect), idx, [&] {
        return nlohmann::json{{"kernel", label}, {"D", matrix_json(d)}, {"H", matrix_json(h)}, {"slope", r.slope},
                              {"quotients", r.quotients}, {"expected", expect}};
      });
    }
  }
}

/// Ranges of Example-style comparisons between M^theta and phi_theta:
/// delta_{M^theta} <= delta_{phi_theta} outside [lo, hi], >= inside.
struct MeanRange {
  std::string label;
  MeanSpec mean;
  double lo, hi;
  bool upper_open;  // false: the ">=" range ends at hi and nothing is claimed beyond
};

inline void check_ex4_7(CheckContext& ctx) {
  const std::vector<MeanRange> families{{"arithmetic", MeanSpec::arithmetic(), -2.0, 0.0, true},
                                        {"root", MeanSpec::root(), 0.0, 1.0, true},
                                        {"logarithmic", MeanSpec::logarithmic(), 0.0, 2.0, true},
                                        {"geometric", MeanSpec::geometric(), 0.0, 4.0, true},
                                        {"harmonic", MeanSpec::harmonic(), 0.0, 10.0, false}};
  const std::vector<double> thetas{-6.0, -4.0, -3.0, -2.0, -1.5, -1.0, -0.5, 0.0, 0.5,
                                   1.0,  1.5,  2.0,  3.0,  4.0,  5.0,  6.0,  8.0, 10.0};
  const double tol = ctx.tol("order"), strict = ctx.tol("strict"), length_rel = ctx.tol("length_rel");

  for (double th : {12.0, 16.0}) {
    const Dominance got = pointwise_dominates(KernelSpec{MeanSpec::harmonic(), th}, theta_kernel(th));
    ctx.observe(got == Dominance::Incomparable ? 1.0 : -1.0, -1,
                [&] { return nlohmann::json{{"harmonic_theta", th}, {"order", to_string(got)}}; });
  }

  double least_gap = std::numeric_limits<double>::infinity();
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    for (double th : thetas) {
      const auto fam = GeodesicFamily::theta(th);
      const double delta = closed_form_distance(fam, a, b);
      std::vector<Kernel> kernels{theta_kernel(th)};
      for (const auto& f : families) kernels.emplace_back(KernelSpec{f.mean, th});
      const auto len = adaptive_curve_lengths(kernels, geodesic_curve(fam, a, b), length_rel);
      for (std::size_t k = 0; k < families.size(); ++k) {
        const auto& f = families[k];
        const double lm = len[k + 1];
        const bool inside = th >= f.lo && th <= f.hi;
        const bool outside = th <= f.lo || (th >= f.hi && f.upper_open);
        auto what = [&](const char* relation) {
          auto j = pair_json(a, b);
          j["mean"] = f.label;
          j["theta"] = th;
          j["relation"] = relation;
          j["length_on_phi_geodesic"] = lm;
          j["phi_distance"] = delta;
          return j;
        };
        // delta_{M^theta} <= L_{M^theta}(gamma_theta) <= delta_{phi_theta}
        if (outside) ctx.observe(tol - (lm - delta) / delta, idx, [&] { return what("le"); });
        // L_{M^theta}(gamma_theta) >= L_{phi_theta}(gamma_theta) = delta_{phi_theta}
        if (inside) ctx.observe(tol - (delta - lm) / delta, idx, [&] { return what("ge"); });
        const bool boundary = th == f.lo || th == f.hi;
        if ((inside || outside) && !boundary) {
          const double gap = std::abs(lm - delta);
          least_gap = std::min(least_gap, gap);
          ctx.observe(gap - strict, idx, [&] { return what("strict"); });
        }
      }
      if (th == 1.0) {
        // H >= G >= L >= 2||A^1/2 - B^1/2|| >= A along gamma_1.
        const double chain[] = {len[5], len[4], len[3], delta, len[1]};
        for (int c = 0; c + 1 < 5; ++c) {
          ctx.observe(tol - (chain[c + 1] - chain[c]) / delta, idx, [&] {
            auto j = pair_json(a, b);
            j["chain_position"] = c;
            j["upper"] = chain[c];
            j["lower"] = chain[c + 1];
            return j;
          });
        }
      }
    }
    // Closed forms on both sides at theta = 2: EMI and its harmonic analogue.
    const double le = closed_form_distance(GeodesicFamily::theta(2.0), a, b);
    const double fr = closed_form_distance(GeodesicFamily::fisher_rao(), a, b);
    const double h2 = closed_form_distance(GeodesicFamily::alpha(2.0), a, b);
    ctx.observe((fr - le) / le + tol, idx, [&] {
      auto j = pair_json(a, b);
      j["relation"] = "emi";
      j["fisher_rao"] = fr;
      j["log_euclidean"] = le;
      return j;
    });
    ctx.observe((h2 - fr) / fr + tol, idx, [&] {
      auto j = pair_json(a, b);
      j["relation"] = "harmonic_square_over_fisher_rao";
      j["harmonic_square"] = h2;
      j["fisher_rao"] = fr;
      return j;
    });
  }
  ctx.info()["least_strict_gap"] = std::isfinite(least_gap) ? nlohmann::json(least_gap) : nlohmann::json();
}

inline void check_thm4_8(CheckContext& ctx) {
  const std::vector<std::pair<std::string, MeanSpec>> means{{"harmonic", MeanSpec::harmonic()},
                                                           {"geometric", MeanSpec::geometric()},
                                                           {"logarithmic", MeanSpec::logarithmic()},
                                                           {"root", MeanSpec::root()},
                                                           {"arithmetic", MeanSpec::arithmetic()}};
  const PathSearchConfig cfg = oracle_config(ctx);
  const int q = static_cast<int>(ctx.tol("quadrature"));
  for (int idx : ctx.sample_indices(static_cast<int>(ctx.tol("sample_cap")))) {
    const auto [a, b] = ctx.commuting_pair(ctx.sample_seed(idx));
    const double exact = closed_form_distance(GeodesicFamily::commuting_sqrt(), a, b);
    const Curve gamma = geodesic_curve(GeodesicFamily::commuting_sqrt(), a, b);
    std::vector<double> values;
    for (const auto& [label, m] : means) {
      const KernelSpec k{m, 1.0};
      const double len = curve_length(k, gamma, NormSpec::hilbert_schmidt(), q);
      ctx.observe(ctx.tol("curve") - rel_gap(len, exact), idx, [&] {
        auto j = pair_json(a, b);
        j["mean"] = label;
        j["curve_length"] = len;
        j["closed_form"] = exact;
        return j;
      });
      const PathSearchResult r = numeric_shortest_distance(k, a, b, cfg);
      values.push_back(r.distance);
      ctx.observe(ctx.tol("rel") - rel_gap(r.distance, exact), idx, [&] {
        auto j = pair_json(a, b);
        j["mean"] = label;
        j["numeric"] = r.distance;
        j["closed_form"] = exact;
        j["converged"] = r.converged;
        return j;
      });
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    ctx.observe(ctx.tol("spread") - (*hi - *lo) / *lo, idx, [&] {
      auto j = pair_json(a, b);
      j["numeric"] = values;
      return j;
    });
  }
}

inline void check_prop5_2(CheckContext& ctx) {
  struct Ratio {
    std::string label;
    MeanSpec smaller, larger;
  };
  const std::vector<Ratio> chain{
      {"H<<G", MeanSpec::harmonic(), MeanSpec::geometric()},
      {"G<<L", MeanSpec::geometric(), MeanSpec::logarithmic()},
      {"L<<root", MeanSpec::logarithmic(), MeanSpec::root()},
      {"root<<A", MeanSpec::root(), MeanSpec::arithmetic()},
      {"N2<<N1", MeanSpec::alpha_family(2.0), MeanSpec::alpha_family(1.0)},
      {"N2<<N0.5", MeanSpec::alpha_family(2.0), MeanSpec::alpha_family(0.5)},
      {"N2<<N0.25", MeanSpec::alpha_family(2.0), MeanSpec::alpha_family(0.25)},
      {"N1<<N0.5", MeanSpec::alpha_family(1.0), MeanSpec::alpha_family(0.5)},
      {"N1<<N0.25", MeanSpec::alpha_family(1.0), MeanSpec::alpha_family(0.25)},
      {"N0.5<<N0.25", MeanSpec::alpha_family(0.5), MeanSpec::alpha_family(0.25)}};
  std::vector<double> points;
  for (int k = 0; k < 8; ++k) points.push_back(-5.0 + 10.0 * k / 7.0);
  const int trials = static_cast<int>(std::min<long>(ctx.sample_indices().size(), 100000));
  const std::uint64_t seed = ctx.sample_seed(0);
  const double slack = ctx.tol("gram");
  auto verdict_json = [](const std::string& label, double r, const PdVerdict& v) {
    return nlohmann::json{{"ratio", label}, {"power", r}, {"trial", v.trial}, {"points", v.points},
                          {"min_eigenvalue", v.min_eigenvalue}, {"max_eigenvalue", v.max_eigenvalue}};
  };
  for (const auto& c : chain) {
    for (double r : {0.5, 1.0, 2.0}) {
      const PdVerdict v = ratio_positive_definite(c.smaller, c.larger, r, points, std::max(1, trials), seed);
      ctx.observe(v.min_eigenvalue / std::abs(v.max_eigenvalue) + slack, -1, [&] { return verdict_json(c.label, r, v); });
    }
  }
  // The reverse ratio A/G is not positive definite: a failing Gram trial must exist.
  const PdVerdict v = ratio_positive_definite(MeanSpec::arithmetic(), MeanSpec::geometric(), 1.0, points,
                                              std::max(1, trials), seed);
  ctx.observe(v.pass ? -1.0 : -v.min_eigenvalue / std::abs(v.max_eigenvalue) - slack, -1,
              [&] { return verdict_json("A/G", 1.0, v); });
  ctx.info()["reverse_witness"] = verdict_json("A/G", 1.0, v);
}

inline void check_prop5_4(CheckContext& ctx) {
  const std::vector<NormSpec> norms{NormSpec::schatten(1.0), NormSpec::hilbert_schmidt(), NormSpec::operator_norm(),
                                    NormSpec::ky_fan(2)};
  const std::vector<double> thetas{-4.0, -2.0, 0.0, 1.0, 1.9, 2.0, 2.1, 3.0, 4.0, 6.0};
  const std::vector<double> compare{-2.0, 0.0, 1.0, 2.0, 3.0, 4.0, 6.0};
  const int q = static_cast<int>(ctx.tol("quadrature"));
  const double tol = ctx.tol("monotone");
  long violations = 0, comparisons = 0;
  for (int idx : ctx.sample_indices()) {
    const auto [a, b] = ctx.noncommuting_pair(ctx.sample_seed(idx));
    const SpdMatrix a_inv(apply_scalar_function(a, ScalarMap::power(-1.0)));
    for (const auto& norm : norms) {
      std::vector<double> d, d_inv;
      for (double th : thetas) {
        d.push_back(closed_form_distance(GeodesicFamily::theta(th), a, b, norm));
        d_inv.push_back(closed_form_distance(GeodesicFamily::theta(th), a, a_inv, norm));
      }
      for (std::size_t k = 1; k < thetas.size(); ++k) {
        // decreasing up to 2, increasing from 2 on
        const double step_inv = thetas[k] <= 2.0 ? d_inv[k - 1] - d_inv[k] : d_inv[k] - d_inv[k - 1];
        ctx.observe(step_inv + tol * std::max(1.0, d_inv[k]), idx, [&] {
          nlohmann::json j{{"A", matrix_json(a)}, {"pair", "inverse"}, {"norm", norm.name()}};
          j["theta_lo"] = thetas[k - 1];
          j["theta_hi"] = thetas[k];
          return j;
        });
        const double step = thetas[k] <= 2.0 ? d[k - 1] - d[k] : d[k] - d[k - 1];
        ++comparisons;
        if (step + tol * std::max(1.0, d[k]) < 0.0) ++violations;
        ctx.observe(step + tol * std::max(1.0, d[k]), idx, [&] {
          auto j = pair_json(a, b);
          j["norm"] = norm.name();
          j["theta_lo"] = thetas[k - 1];
          j["theta_hi"] = thetas[k];
          j["distance_lo"] = d[k - 1];
          j["distance_hi"] = d[k];
          return j;
        });
      }
      const double fr = closed_form_distance(GeodesicFamily::fisher_rao(), a, b, norm);
      const double le = closed_form_distance(GeodesicFamily::theta(2.0), a, b, norm);
      ctx.observe((fr - le) / le + ctx.tol("order"), idx, [&] {
        auto j = pair_json(a, b);
        j["norm"] = norm.name();
        j["fisher_rao"] = fr;
        j["log_euclidean"] = le;
        return j;
      });
    }
    for (double th : compare) {
      const auto fam = GeodesicFamily::theta(th);
      const auto len = curve_lengths({theta_kernel(th), KernelSpec{MeanSpec::geometric(), th}},
                                     geodesic_curve(fam, a, b), norms, q);
      for (std::size_t m = 0; m < norms.size(); ++m) {
        const double delta = closed_form_distance(fam, a, b, norms[m]);
        const double lg = len[1][m];
        auto what = [&](const char* relation) {
          auto j = pair_json(a, b);
          j["norm"] = norms[m].name();
          j["theta"] = th;
          j["relation"] = relation;
          j["geometric_length"] = lg;
          j["phi_distance"] = delta;
          j["phi_length"] = len[0][m];
          return j;
        };
        if (th <= 0.0 || th >= 4.0) ctx.observe(ctx.tol("order") - (lg - delta) / delta, idx, [&] { return what("le"); });
        if (th >= 0.0 && th <= 4.0) ctx.observe(ctx.tol("order") - (delta - lg) / delta, idx, [&] { return what("ge"); });
        ctx.observe(ctx.tol("length") - rel_gap(len[0][m], delta), idx, [&] { return what("phi_geodesic_length"); });
      }
    }
  }
  ctx.info()["monotone_violations"] = violations;
  ctx.info()["monotone_comparisons"] = comparisons;
}

inline void check_skew(CheckContext& ctx) {
  std::vector<double> ps;
  for (int k = 1; k <= 10; ++k) ps.push_back(0.05 * k);
  for (int idx : ctx.sample_indices()) {
    const std::uint64_t s = ctx.sample_seed(idx);
    const SpdMatrix d = ctx.spd(s, 0);
    const HermitianMatrix k = random_hermitian(ctx.dim(), splitmix64(s + 1));
    std::vector<double> vals;
    for (double p : ps) {
      const double direct = wyd_direct(p, d, k);
      const double metric = skew_information(StandardFunctionSpec::wyd(p), d, k);
      vals.push_back(direct);
      ctx.observe(ctx.tol("agree") - rel_gap(metric, direct), idx, [&] {
        return nlohmann::json{{"D", matrix_json(d)}, {"K", matrix_json(k)}, {"p", p}, {"direct", direct},
                              {"metric_adjusted", metric}};
      });
    }
    for (std::size_t j = 1; j < vals.size(); ++j) {
      ctx.observe(vals[j] - vals[j - 1] + ctx.tol("monotone") * std::abs(vals[j]), idx, [&] {
        return nlohmann::json{{"D", matrix_json(d)}, {"K", matrix_json(k)}, {"p_lo", ps[j - 1]}, {"p_hi", ps[j]},
                              {"value_lo", vals[j - 1]}, {"value_hi", vals[j]}};
      });
    }
  }
}

/// Operator-norm analogue of the slope lemma: reported, never asserted.
inline void check_rem5_3(CheckContext& ctx) {
  const Kernel k = KernelSpec{MeanSpec::geometric(), 2.0};
  PathSearchConfig cfg;
  cfg.segments = 8;
  const double eps = 1e-2;
  nlohmann::json rows = nlohmann::json::array();
  for (int idx : ctx.sample_indices(10)) {
    const std::uint64_t s = ctx.sample_seed(idx);
    const SpdMatrix d = ctx.spd(s, 0);
    const HermitianMatrix h = random_hermitian(ctx.dim(), splitmix64(s + 1));
    const SpdMatrix e(d.hermitian() + eps * h);
    const double target = ui_norm(kernel_apply(k, d, h, -0.5), NormSpec::operator_norm());
    const Polyline straight{{d.matrix(), e.matrix()}, {0.0, 1.0}};
    const double seg = curve_length(k, polyline_curve(straight), NormSpec::operator_norm()) / eps;
    const PathSearchResult r = numeric_shortest_distance(k, d, e, cfg);
    const double hs_path = curve_length(k, polyline_curve(r.path), NormSpec::operator_norm()) / eps;
    rows.push_back({{"sample", idx}, {"straight_ratio", seg / target}, {"hs_optimal_path_ratio", hs_path / target}});
  }
  ctx.info()["epsilon"] = eps;
  ctx.info()["ratios"] = rows;
  ctx.observe(0.0, -1, [] { return nlohmann::json{{"informational", true}}; });
}

struct CatalogEntry {
  const char* name;
  void (*run)(CheckContext&);
  std::map<std::string, double> defaults;
};

inline const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"thm2_1_pullback", check_thm2_1, {{"rel", 1e-7}, {"quadrature", 256}}},
      {"lem2_2_monotone", check_lem2_2, {{"limit_rel", 1e-2}, {"limit_theta", 2e4}}},
      {"prop2_3_reflection", check_prop2_3, {{"rel", 1e-7}, {"quadrature", 64}}},
      {"rem2_4_power", check_rem2_4, {{"rel", 1e-6}, {"quadrature", 64}}},
      {"lem2_5_crossover", check_lem2_5, {{"coef_rel", 1e-3}}},
      {"thm3_1_completeness", check_thm3_1, {{"rel", 1e-8}, {"quadrature", 64}}},
      {"lem3_2_distance_to_identity", check_lem3_2,
       {{"rel", 1e-3}, {"lower", 1e-9}, {"segments", 32}, {"max_iterations", 1000}}},
      {"thm3_3_alpha", check_thm3_3, {{"rel", 1e-7}, {"quadrature", 256}, {"coincide", 1e-10}, {"pullback", 1e-10}}},
      {"lie_trotter", check_lie_trotter, {{"monotone", 1e-10}, {"limit_rel", 1e-3}}},
      {"thm4_1_equivalence", check_thm4_1, {{"order", 1e-10}, {"quadrature", 64}}},
      {"lem4_2_slope", check_lem4_2, {{"rel", 1e-3}, {"segments", 8}, {"max_iterations", 500}}},
      {"ex4_7_table", check_ex4_7, {{"order", 1e-10}, {"strict", 1e-8}, {"length_rel", 1e-12}}},
      {"thm4_8_commuting", check_thm4_8,
       {{"rel", 1e-3}, {"spread", 2e-3}, {"curve", 1e-7}, {"quadrature", 64}, {"segments", 32},
        {"max_iterations", 1000}, {"sample_cap", 10}}},
      {"prop5_2_pd", check_prop5_2, {{"gram", 1e-10}}},
      {"prop5_4_theta_norms", check_prop5_4, {{"monotone", 1e-10}, {"order", 1e-10}, {"length", 1e-7}, {"quadrature", 64}}},
      {"skew_ordering", check_skew, {{"agree", 1e-9}, {"monotone", 1e-12}}},
      {"rem5_3_opnorm_slope", check_rem5_3, {}},
  };
  return entries;
}

}  // namespace detail

inline std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& e : detail::catalog()) out.emplace_back(e.name);
  return out;
}

inline CheckReport run_check(const CheckSpec& spec) {
  const detail::CatalogEntry* entry = nullptr;
  for (const auto& e : detail::catalog())
    if (spec.name == e.name) entry = &e;
  if (!entry) throw PreconditionError("unknown check '" + spec.name + "'");
  if (spec.samples < 1) throw PreconditionError("a check needs at least one sample");
  if (spec.dimension < 1) throw DimensionError("check dimension must be positive");
  if (spec.replay_sample && *spec.replay_sample < 0) throw PreconditionError("replay sample must be non-negative");

  auto defaults = entry->defaults;
  defaults.emplace("log_spread", 2.0);
  detail::CheckContext ctx(spec, defaults);
  const auto t0 = std::chrono::steady_clock::now();
  entry->run(ctx);
  CheckReport r;
  r.name = spec.name;
  r.worst_margin = ctx.worst();
  r.pass = ctx.observations() > 0 && r.worst_margin >= 0.0;
  r.witness = ctx.witness();
  r.elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  r.seed = spec.seed;
  r.dimension = spec.dimension;
  r.samples = spec.samples;
  r.tolerances = ctx.tolerances();
  r.info = ctx.info();
  return r;
}

inline std::vector<CheckReport> run_all(std::uint64_t seed, int dimension, int samples = 200) {
  if (dimension < 2) throw PreconditionError("the suite needs dimension >= 2");
  std::vector<CheckReport> out;
  for (const auto& name : check_names()) {
    CheckSpec spec;
    spec.name = name;
    spec.seed = seed;
    spec.dimension = dimension;
    spec.samples = samples;
    out.push_back(run_check(spec));
  }
  return out;
}

inline bool all_pass(const std::vector<CheckReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const CheckReport& r) { return r.pass; });
}

}  // namespace spdgeo
