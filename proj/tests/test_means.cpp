#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "spdgeo/means.hpp"

using namespace spdgeo;

namespace {

const double kE = std::exp(1.0);

std::vector<double> ratio_points() {
  std::vector<double> pts;
  for (int i = 0; i < 900; ++i) pts.push_back(std::exp(-13.0 + 26.0 * i / 899.0));
  for (int i = 0; i < 50; ++i) {
    const double s = std::exp(std::log(1e-9) + (std::log(1e-2) - std::log(1e-9)) * i / 49.0);
    pts.push_back(1.0 + s);
    pts.push_back(1.0 - s);
  }
  return pts;
}

double log_mean_oracle(double x, double y) {
  if (x == y) return x;
  const double q = x / y;
  const double l = q > 0.5 && q < 2 ? std::log1p((x - y) / y) : std::log(q);
  return (x - y) / l;
}

}  // namespace

TEST(MeanEval, Examples) {
  EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(4), 1, 4), 2.0, 1e-15);
  EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(2), 1, kE), kE - 1.0, 1e-15);
  EXPECT_NEAR(mean_eval(MeanSpec::identric(), 1, kE), 1.7895723968418334511, 2e-16);
  EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(0), 1, kE), 1.7895723968418334511, 2e-16);
  EXPECT_NEAR(mean_eval(MeanSpec::alpha_family(2), 1, 3), 1.5, 1e-15);
  for (double th : {-7.0, -2.0, 0.0, 1e-7, 1.0, 2.0, 2.0 + 1e-7, 3.5, 4.0, 12.0})
    for (double x : {1e-3, 0.7, 5.0, 3e4}) EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(th), x, x) / x, 1.0, 1e-15);
}

TEST(MeanEval, RejectsNonPositive) {
  EXPECT_THROW(mean_eval(MeanSpec::arithmetic(), 0, 1), DomainError);
  EXPECT_THROW(mean_eval(MeanSpec::stolarsky(3), -1, 1), DomainError);
}

TEST(MeanEval, NamedMeansAreStolarskyMembers) {
  struct Row {
    double theta;
    MeanSpec named;
  };
  const Row rows[] = {{-2, MeanSpec::arithmetic()}, {1, MeanSpec::root()},       {2, MeanSpec::logarithmic()},
                      {4, MeanSpec::geometric()},   {0, MeanSpec::identric()}};
  for (const auto& row : rows)
    for (double x : {1e-4, 0.3, 1.0 + 1e-8, 2.0, 77.0})
      EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(row.theta), x, 1) / mean_eval(row.named, x, 1), 1.0, 1e-13)
          << row.theta << " " << x;
}

TEST(MeanEval, InterpolationIdentities) {
  const auto pts = ratio_points();
  ASSERT_EQ(pts.size(), 1000u);
  double worst = 0;
  for (double x : pts) {
    const double closed[] = {(x + 1) / 2, std::pow((std::sqrt(x) + 1) / 2, 2), log_mean_oracle(x, 1),
                             std::sqrt(x)};
    const double thetas[] = {-2, 1, 2, 4};
    for (int k = 0; k < 4; ++k) {
      const double v = mean_eval(MeanSpec::stolarsky(thetas[k]), x, 1);
      worst = std::max(worst, std::abs(v - closed[k]) / closed[k]);
      EXPECT_LE(std::abs(v - closed[k]), 1e-12 * closed[k]) << thetas[k] << " " << x;
    }
  }
  RecordProperty("worst_relative_error", std::to_string(worst));
}

TEST(MeanEval, RootMeanAtFarRatios) {
  for (double x : {1e-12, 1e-6, 3.8e-6, 1e6, 1e12}) {
    const double s = (std::sqrt(x) + std::sqrt(3.7)) / 2;
    EXPECT_LE(std::abs(MeanSpec::stolarsky(1)(x, 3.7) - s * s), 2e-15 * s * s) << x;
  }
  // theta = 1/2: M = (3/4 (x - 1) / (x^(3/4) - 1))^4, on both sides of |theta| L = 2
  for (double x : {std::exp(3.9), std::exp(4.1), 1e-9, 1e9}) {
    const double m = std::pow(0.75 * (x - 1) / (std::pow(x, 0.75) - 1), 4);
    EXPECT_LE(std::abs(MeanSpec::stolarsky(0.5)(x, 1) - m), 4e-15 * m) << x;
  }
}

TEST(MeanEval, AxiomsOfNamedMeans) {
  for (const MeanSpec& m : {MeanSpec::arithmetic(), MeanSpec::geometric(), MeanSpec::logarithmic(),
                            MeanSpec::harmonic(), MeanSpec::root(), MeanSpec::identric(), MeanSpec::stolarsky(-5),
                            MeanSpec::stolarsky(7), MeanSpec::alpha_family(0.5),
                            MeanSpec::from_operator_monotone(StandardFunctionSpec::wyd(0.3))}) {
    const auto pts = ratio_points();
    for (std::size_t i = 0; i < pts.size(); i += 7) {
      const double x = pts[i], y = 0.37;
      const double v = m(x, y);
      EXPECT_NEAR(v, m(y, x), 1e-13 * v) << format_mean(m);
      EXPECT_NEAR(m(3 * x, 3 * y), 3 * v, 1e-13 * 3 * v) << format_mean(m);
      EXPECT_GE(v, std::min(x, y) * (1 - 1e-13)) << format_mean(m);
      EXPECT_LE(v, std::max(x, y) * (1 + 1e-13)) << format_mean(m);
    }
  }
}

TEST(StolarskyFamily, StrictlyDecreasingInTheta) {
  for (double x : {1.5, 3.0, 55.0, 1e-3}) {
    double prev = INFINITY;
    for (int i = 0; i < 50; ++i) {
      const double th = -20.0 + 40.0 * i / 49.0;
      const double v = mean_eval(MeanSpec::stolarsky(th), x, 1);
      EXPECT_LT(v, prev) << x << " " << th;
      prev = v;
    }
  }
}

TEST(StolarskyFamily, ExtremeThetaLimits) {
  for (double x : {1.5, 3.0, 55.0}) {
    EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(-2e4), x, 1) / x, 1.0, 1e-2);
    EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(2e4), x, 1), 1.0, 1e-2);
    // The gap at |theta| = 200 is several percent (logarithmic decay).
    EXPECT_GT(1.0 - mean_eval(MeanSpec::stolarsky(-200), x, 1) / x, 1e-2);
  }
}

TEST(StolarskyFamily, ContinuousAtRemovableSingularities) {
  for (double x : {0.1, 1.7, 40.0}) {
    for (double th0 : {0.0, 2.0}) {
      const double v = mean_eval(MeanSpec::stolarsky(th0), x, 1);
      for (double d : {1e-9, -1e-9, 1e-7, -1e-7})
        EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(th0 + d), x, 1), v, 1e-6 * v) << th0 << " " << d;
      for (double side : {1.0, -1.0}) {
        const double inner = mean_eval(MeanSpec::stolarsky(th0 + side * 0.999999e-5), x, 1);
        const double outer = mean_eval(MeanSpec::stolarsky(th0 + side * 1.000001e-5), x, 1);
        EXPECT_NEAR(inner, outer, 1e-10 * v) << th0 << " " << side;
      }
    }
  }
  for (double th : {-3.0, 0.0, 1.0, 2.0, 5.0})
    for (double x : {0.2, 9.0}) EXPECT_NEAR(mean_eval(MeanSpec::stolarsky(th), x, x * (1 + 1e-9)), x, 1e-6 * x);
}

TEST(AlphaFamily, LimitsAndOrdering) {
  for (double x : {0.01, 0.5, 2.0, 100.0}) {
    EXPECT_NEAR(mean_eval(MeanSpec::alpha_family(1), x, 1), std::sqrt(x), 1e-14 * std::sqrt(x));
    EXPECT_NEAR(mean_eval(MeanSpec::alpha_family(2), x, 1), 2 * x / (x + 1), 1e-14);
    EXPECT_NEAR(mean_eval(MeanSpec::alpha_family(1e-7), x, 1) / log_mean_oracle(x, 1), 1.0, 1e-10);
    EXPECT_NEAR(mean_eval(MeanSpec::alpha_family(0), x, 1) / log_mean_oracle(x, 1), 1.0, 1e-14);
  }
  for (double x : {1.01, 2.0, 30.0}) {
    double prev = INFINITY;
    for (double a : {0.01, 0.1, 0.25, 0.5, 1.0, 1.5, 2.0}) {
      const double v = mean_eval(MeanSpec::alpha_family(a), x, 1);
      EXPECT_LT(v, prev);
      EXPECT_GE(v, 1.0);
      EXPECT_LE(v, x);
      prev = v;
    }
  }
  for (double a : {0.25, 1.0, 2.0}) {
    double prev = 0;
    for (int i = 0; i < 100; ++i) {
      const double v = mean_eval(MeanSpec::alpha_family(a), std::exp(-6 + 0.12 * i), 1);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
  EXPECT_THROW(MeanSpec::alpha_family(2.5), DomainError);
}

TEST(HarmonicCrossover, ThetaTenStaysAboveTwelveDipsBelow) {
  for (double x : default_grid(64, 1e-3, 1e3)) {
    if (std::abs(x - 1) < 1e-12) continue;
    EXPECT_GT(mean_eval(MeanSpec::stolarsky(10), x, 1), mean_eval(MeanSpec::harmonic(), x, 1)) << x;
  }
  double delta = 0;
  for (double d = 1e-3; d < 10; d *= 1.05) {
    const bool below = mean_eval(MeanSpec::stolarsky(12), 1 + d, 1) < mean_eval(MeanSpec::harmonic(), 1 + d, 1) &&
                       mean_eval(MeanSpec::stolarsky(12), 1 / (1 + d), 1) <
                           mean_eval(MeanSpec::harmonic(), 1 / (1 + d), 1);
    if (!below) break;
    delta = d;
  }
  EXPECT_GT(delta, 1e-3);
  RecordProperty("theta12_below_harmonic_up_to", std::to_string(delta));
}

TEST(KernelEval, Examples) {
  EXPECT_DOUBLE_EQ(kernel_eval({MeanSpec::geometric(), 2}, 2, 8), 16.0);
  EXPECT_DOUBLE_EQ(kernel_eval({MeanSpec::logarithmic(), 0}, 0.3, 7), 1.0);
  EXPECT_NEAR(kernel_eval({MeanSpec::arithmetic(), -2}, 1, 3), 0.25, 1e-15);
  for (double th : {-2.5, 0.5, 3.0})
    EXPECT_EQ(kernel_eval({MeanSpec::root(), th}, 1.9, 1.9), std::exp(th * std::log(1.9)));
  const KernelSpec k{MeanSpec::stolarsky(3), 3};
  EXPECT_EQ(kernel_eval(k, 0.4, 5.0), kernel_eval(k, 5.0, 0.4));
}

TEST(Wyd, Examples) {
  EXPECT_NEAR(f_wyd(0.5, 4), 2.25, 1e-15);
  for (double p : {0.1, 0.3, 0.5, 0.9}) EXPECT_DOUBLE_EQ(f_wyd(p, 1), 1.0);
  for (double x : {0.01, 0.8, 1 + 1e-9, 3.0, 500.0}) {
    EXPECT_NEAR(f_wyd(1.0 / 3, x), f_wyd(2.0 / 3, x), 1e-14 * f_wyd(1.0 / 3, x));
    EXPECT_NEAR(x * f_wyd(0.2, 1 / x), f_wyd(0.2, x), 1e-12 * f_wyd(0.2, x));
  }
  EXPECT_THROW(f_wyd(0, 2), DomainError);
  EXPECT_THROW(f_wyd(1, 2), DomainError);
}

TEST(Wyd, KernelMatchesStandardFunction) {
  for (double p : {0.1, 0.25, 0.5, 0.8})
    for (double x : default_grid(33, 1e-3, 1e3)) {
      const KernelSpec k{MeanSpec::from_operator_monotone(StandardFunctionSpec::wyd(p)), 1};
      EXPECT_NEAR(kernel_eval(k, x, 1), f_wyd(p, x), 1e-12 * f_wyd(p, x));
    }
}

TEST(StandardFunctions, Normalised) {
  for (const auto& f : {StandardFunctionSpec::wyd(0.3), StandardFunctionSpec::sqrt_binomial(),
                        StandardFunctionSpec::log_mean(), StandardFunctionSpec::arithmetic(),
                        StandardFunctionSpec::harmonic()}) {
    EXPECT_NEAR(f(1.0), 1.0, 1e-15);
    for (double x : {0.05, 0.5, 4.0, 80.0}) EXPECT_NEAR(x * f(1 / x), f(x), 1e-10 * f(x));
  }
}

TEST(CheckMeanAxioms, Examples) {
  EXPECT_TRUE(check_mean_axioms(MeanSpec::stolarsky(3), default_grid(50, 1e-3, 1e3)).ok());
  EXPECT_TRUE(check_mean_axioms(MeanSpec::geometric()).ok());
  const auto rep = check_mean_axioms([](double x, double) { return x; }, default_grid(20, 1e-2, 1e2));
  EXPECT_FALSE(rep.ok());
  EXPECT_TRUE(rep.violates(1));
  const auto bad = check_mean_axioms([](double x, double y) { return 2 * std::max(x, y); }, default_grid(10));
  EXPECT_TRUE(bad.violates(4));
}

TEST(PointwiseDominates, Examples) {
  EXPECT_EQ(pointwise_dominates(KernelSpec{MeanSpec::geometric(), 1}, KernelSpec{MeanSpec::arithmetic(), 1}),
            Dominance::Dominated);
  EXPECT_EQ(pointwise_dominates(KernelSpec{MeanSpec::harmonic(), -1}, KernelSpec{MeanSpec::arithmetic(), -1}),
            Dominance::Dominates);
  EXPECT_EQ(pointwise_dominates(KernelSpec{MeanSpec::root(), 3}, KernelSpec{MeanSpec::root(), 3}), Dominance::Equal);
  EXPECT_EQ(pointwise_dominates(KernelSpec{MeanSpec::geometric(), 1}, KernelSpec{MeanSpec::arithmetic(), 2}),
            Dominance::Incomparable);
}

TEST(PointwiseDominates, EqualPositiveDegreeFollowsMeanOrder) {
  const MeanSpec chain[] = {MeanSpec::harmonic(), MeanSpec::geometric(), MeanSpec::logarithmic(), MeanSpec::root(),
                            MeanSpec::arithmetic()};
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j) {
      EXPECT_EQ(mean_dominates(chain[i], chain[j]), Dominance::Dominated);
      for (double th : {0.5, 2.0, 3.0})
        EXPECT_EQ(pointwise_dominates(KernelSpec{chain[i], th}, KernelSpec{chain[j], th}), Dominance::Dominated);
      EXPECT_EQ(pointwise_dominates(KernelSpec{chain[i], -1.5}, KernelSpec{chain[j], -1.5}), Dominance::Dominates);
    }
}

TEST(RatioPositiveDefinite, Examples) {
  std::vector<double> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(-5 + 10.0 * i / 7);
  EXPECT_TRUE(ratio_positive_definite(MeanSpec::geometric(), MeanSpec::logarithmic(), 1, pts, 100, 1).pass);
  EXPECT_TRUE(ratio_positive_definite(MeanSpec::root(), MeanSpec::root(), 2.5, pts, 20, 1).pass);
  const PdVerdict bad = ratio_positive_definite(MeanSpec::arithmetic(), MeanSpec::geometric(), 1, pts, 100, 1);
  EXPECT_FALSE(bad.pass);
  EXPECT_LT(bad.min_eigenvalue, -1e-10 * bad.max_eigenvalue);
  EXPECT_EQ(bad.points.size(), 8u);
}

TEST(RatioPositiveDefinite, WitnessDetectedOnThreePoints) {
  // g(t) = cosh(t/2) on {-2, 0, 2}: the Gram matrix has a negative eigenvalue.
  const PdVerdict v = ratio_positive_definite(MeanSpec::arithmetic(), MeanSpec::geometric(), 1, {-2, 0, 2}, 1);
  EXPECT_FALSE(v.pass);
  const double c1 = std::cosh(1.0), c2 = std::cosh(2.0);
  const double symmetric = 0.5 * (2 + c2 - std::sqrt(c2 * c2 + 8 * c1 * c1));
  EXPECT_NEAR(v.min_eigenvalue, std::min(symmetric, 1 - c2), 1e-12);
}

TEST(RatioPositiveDefinite, OrderedChains) {
  std::vector<double> pts;
  for (int i = 0; i < 8; ++i) pts.push_back(-4 + 8.0 * i / 7);
  const MeanSpec chain[] = {MeanSpec::harmonic(), MeanSpec::geometric(), MeanSpec::logarithmic(), MeanSpec::root(),
                            MeanSpec::arithmetic()};
  for (int i = 0; i + 1 < 5; ++i)
    EXPECT_TRUE(ratio_positive_definite(chain[i], chain[i + 1], 1, pts, 100, 7).pass) << i;
  const double alphas[] = {0.25, 0.5, 1, 2};
  for (int i = 0; i + 1 < 4; ++i)
    EXPECT_TRUE(ratio_positive_definite(MeanSpec::alpha_family(alphas[i + 1]), MeanSpec::alpha_family(alphas[i]), 1,
                                        pts, 100, 7)
                    .pass);
}

TEST(LoewnerPsd, Examples) {
  EXPECT_TRUE(loewner_psd(mean_as_function(MeanSpec::stolarsky(4)), default_grid(6, 0.1, 10)).pass);
  EXPECT_TRUE(loewner_psd(ScalarMap::power(0.5), default_grid(6, 0.1, 10)).pass);
  EXPECT_FALSE(loewner_psd(ScalarMap::power(2), {1, 2, 3}).pass);
}

TEST(LoewnerPsd, ThetaEightWitnessBySeededSearch) {
  const ScalarMap f = mean_as_function(MeanSpec::stolarsky(8));
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-8, 8);
  std::uniform_int_distribution<int> k(2, 8);
  bool found = false;
  for (int trial = 0; trial < 2000 && !found; ++trial) {
    std::vector<double> pts(static_cast<std::size_t>(k(rng)));
    for (double& p : pts) p = std::exp(u(rng));
    found = !loewner_psd(f, pts).pass;
  }
  EXPECT_TRUE(found);
  for (double th : {-2.0, 0.0, 2.0, 4.0, 6.0}) {
    const ScalarMap g = mean_as_function(MeanSpec::stolarsky(th));
    EXPECT_TRUE(loewner_psd(g, default_grid(6, 1e-2, 1e2)).pass) << th;
  }
}

TEST(Grammar, RoundTripIsBitExact) {
  const double awkward[] = {3.5, 0.1, 1.0 / 3, std::nextafter(2.0, 3.0), -1e-300, 6.02214076e23};
  for (double v : awkward) {
    const KernelSpec k{MeanSpec::stolarsky(v), v};
    EXPECT_TRUE(parse_kernel(format_kernel(k)) == k) << format_kernel(k);
  }
  for (const char* s : {"stolarsky:3.5^1", "geometric^2", "alpha:0.5^2", "wyd:0.25^1", "harmonic^-1",
                        "identric^0", "root^1", "logarithmic^1", "arithmetic^-2", "sqrtbinomial^1"}) {
    EXPECT_EQ(format_kernel(parse_kernel(s)), s);
  }
  EXPECT_THROW(parse_kernel("geometric"), ParseError);
  EXPECT_THROW(parse_kernel("nomean^2"), ParseError);
  EXPECT_THROW(parse_kernel("geometric:2^2"), ParseError);
  EXPECT_THROW(parse_kernel("stolarsky^2"), ParseError);
  EXPECT_THROW(parse_kernel("stolarsky:x^2"), ParseError);
  EXPECT_THROW(parse_mean("wyd:1.5"), DomainError);
}
