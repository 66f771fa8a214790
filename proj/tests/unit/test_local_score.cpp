#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mapstruct/local_score.hpp"
#include "oracles.hpp"

using namespace mapstruct;

namespace {

StructureMask full_mask(int side) {
  return StructureMask{side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side, 1)};
}

std::vector<double> two_gaussians(std::uint64_t seed, int n, double m1, double m2, double sd,
                                  double w1 = 0.5) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> a(m1, sd);
  std::normal_distribution<double> b(m2, sd);
  std::bernoulli_distribution pick(w1);
  std::vector<double> x(n);
  for (auto& v : x) v = pick(gen) ? a(gen) : b(gen);
  return x;
}

}  // namespace

TEST_CASE("structure mask needs at least one direction") {
  try {
    structure_mask(DominantDirections{}, 16, 0.5);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoStructure);
  }
}

TEST_CASE("full mask reconstructs the input exactly") {
  const BinaryMap m = oracle::random_bits(13, 13, 0.4, 8);
  const NominalMap n = reconstruct_nominal(dft2(m), full_mask(13), m);
  for (std::size_t i = 0; i < m.size(); ++i) CHECK(std::abs(n.scores[i] - m[i]) < 1e-9);
}

TEST_CASE("DC-only mask gives the occupied fraction everywhere") {
  const BinaryMap m = oracle::random_bits(10, 10, 0.3, 2);
  const NominalMap n = reconstruct_nominal(dft2(m), fold({}, 10, 1.0), m);
  const double frac = static_cast<double>(count_occupied(m)) / 100.0;
  for (double v : n.scores.values()) CHECK(v == doctest::Approx(frac));
  // A constant field has no spread to normalize; every score maps to 0.
  for (double v : n.normalized.values()) CHECK(v == 0.0);
}

TEST_CASE("masked reconstruction matches direct summation") {
  const BinaryMap m = oracle::random_bits(12, 12, 0.35, 21);
  const double angles[] = {0.0, 90.0, 45.0};
  const StructureMask mask = fold(angles, 12, 3.0);
  const NominalMap n = reconstruct_nominal(dft2(m), mask, m);

  RealField f(12, 12);
  for (std::size_t i = 0; i < m.size(); ++i) f[i] = m[i];
  auto coeffs = oracle::naive_dft2(f);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (!mask.bits[i]) coeffs[i] = 0.0;
  }
  const auto ref = oracle::naive_idft2(coeffs, 12);
  for (std::size_t i = 0; i < ref.size(); ++i) {
    CHECK(std::abs(n.scores[i] - ref[i].real()) < 1e-9);
    CHECK(std::abs(ref[i].imag()) < 1e-9);
  }
}

TEST_CASE("scores favour cells on the masked direction") {
  BinaryMap m(40, 40);
  for (int x = 2; x < 38; ++x) m(x, 20) = 1;
  m(10, 5) = m(11, 5) = m(30, 33) = m(31, 34) = 1;
  const double spectral[] = {90.0};
  const NominalMap n = reconstruct_nominal(dft2(m), fold(spectral, 40, 0.5), m);
  double wall = 0.0;
  for (int x = 2; x < 38; ++x) wall += n.normalized(x, 20);
  wall /= 36.0;
  const double clutter =
      (n.normalized(10, 5) + n.normalized(11, 5) + n.normalized(30, 33) + n.normalized(31, 34)) / 4;
  CHECK(wall > clutter);

  const auto occ = occupied_scores(n, m);
  CHECK(occ.size() == count_occupied(m));
  CHECK(*std::min_element(occ.begin(), occ.end()) == 0.0);
  CHECK(*std::max_element(occ.begin(), occ.end()) == 1.0);
}

TEST_CASE("EM recovers two separated components") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = two_gaussians(seed, 2000, 0.2, 0.8, 0.05);
    const GmmFit g = fit_gmm(x);
    CHECK(g.converged);
    CHECK(std::abs(g.structure.mean - 0.8) < 0.02);
    CHECK(std::abs(g.clutter.mean - 0.2) < 0.02);
    CHECK(std::abs(std::sqrt(g.structure.variance) - 0.05) < 0.01);
    CHECK(std::abs(g.tau - 0.5) < 0.05);
    for (std::size_t i = 1; i < g.log_likelihood.size(); ++i) {
      CHECK(g.log_likelihood[i] >= g.log_likelihood[i - 1] - 1e-12);
    }
  }
}

TEST_CASE("EM stops at the iteration cap and flags it") {
  const auto x = two_gaussians(3, 500, 0.45, 0.55, 0.1);
  EmConfig cfg;
  cfg.max_iterations = 2;
  const GmmFit g = fit_gmm(x, cfg);
  CHECK(g.iterations == 2);
  CHECK_FALSE(g.converged);
}

TEST_CASE("EM preconditions and variance collapse") {
  const std::vector<double> few(5, 0.5);
  CHECK_THROWS_AS(fit_gmm(few), Error);

  std::vector<double> x(100, 1.0);
  for (int i = 0; i < 50; ++i) x[i] = 0.1 * (i % 7);
  const GmmFit g = fit_gmm(x);
  CHECK(g.variance_collapsed);
  CHECK(g.structure.variance >= 1e-12);
}

TEST_CASE("threshold sits where the weighted densities cross") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = two_gaussians(seed, 2000, 0.2, 0.8, 0.05, 0.3 + 0.04 * seed);
    const GmmFit g = fit_gmm(x);
    const ScoreThreshold t = gmm_threshold(g);
    CHECK_FALSE(t.fallback);
    CHECK(t.s > g.clutter.mean);
    CHECK(t.s < g.structure.mean);
    const double residual = g.tau * g.structure.density(t.s) - (1 - g.tau) * g.clutter.density(t.s);
    CHECK(std::abs(residual) < 1e-9);
    const double ref = oracle::bisect_density_crossing(g.tau, g.structure.mean, g.structure.variance,
                                                       g.clutter.mean, g.clutter.variance,
                                                       g.clutter.mean, g.structure.mean);
    CHECK(t.s == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("threshold falls back to the midpoint without a crossing") {
  GmmFit g;
  g.structure = {1.0, 1.0, 0.99};
  g.clutter = {0.0, 0.01, 0.01};
  g.tau = 0.99;
  const ScoreThreshold t = gmm_threshold(g);
  CHECK(t.fallback);
  CHECK(t.s == doctest::Approx(0.5));

  g.clutter.mean = 1.0 - 1e-9;
  try {
    gmm_threshold(g);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNoSeparation);
  }
}

TEST_CASE("declutter keeps occupied cells scoring above the threshold") {
  BinaryMap m(3, 2);
  m(0, 0) = m(1, 0) = m(2, 1) = 1;
  NominalMap n{RealField(3, 2), RealField(3, 2)};
  n.normalized(0, 0) = 0.9;
  n.normalized(1, 0) = 0.5;
  n.normalized(2, 1) = 0.2;
  n.normalized(0, 1) = 1.0;  // free cell: never kept
  const BinaryMap out = declutter(m, n, 0.5);
  CHECK(out(0, 0) == 1);
  CHECK(out(1, 0) == 0);  // strictly greater
  CHECK(out(2, 1) == 0);
  CHECK(out(0, 1) == 0);
  CHECK_THROWS_AS(declutter(m, NominalMap{RealField(2, 2), RealField(2, 2)}, 0.5), Error);
}
