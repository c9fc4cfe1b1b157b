// Walks through the main entry points on one pair of random 3x3 matrices.
#include <cstdio>

#include "spdgeo/spdgeo.hpp"

using namespace spdgeo;

int main() {
  const SpdMatrix a = random_spd(3, 1), b = random_spd(3, 2);

  const SpdMatrix mid = geodesic_point(GeodesicFamily::fisher_rao(), a, b, 0.5);
  std::printf("geometric mean A#B:\n%s\n", matrix_to_json(mid.matrix()).c_str());

  std::printf("%-16s %12s\n", "family", "distance");
  for (const char* name : {"fisher", "theta:0", "theta:1", "theta:2", "theta:4", "alpha:0.5", "alpha:2"}) {
    const GeodesicFamily fam = parse_family(name);
    std::printf("%-16s %12.9f\n", name, closed_form_distance(fam, a, b));
  }

  // A numeric shortest path should reproduce the closed form.
  PathSearchConfig cfg;
  cfg.segments = 16;
  const PathSearchResult r = numeric_shortest_distance(KernelSpec{MeanSpec::geometric(), 2.0}, a, b, cfg);
  std::printf("numeric geometric^2 distance %.9f (closed form %.9f)\n", r.distance,
              closed_form_distance(GeodesicFamily::fisher_rao(), a, b));

  // Lengths of the theta = 1 geodesic under metrics built from classical means.
  const Curve gamma = geodesic_curve(GeodesicFamily::theta(1.0), a, b);
  for (const char* k : {"harmonic^1", "geometric^1", "logarithmic^1", "arithmetic^1"})
    std::printf("%-14s length %.9f\n", k, curve_length(parse_kernel(k), gamma));

  const KarcherResult g = karcher_mean({a, b, random_spd(3, 3)});
  std::printf("karcher mean of three, %d iterations, gradient %.2e\n", g.iterations, g.gradient_norm);
}
