#include "mapstruct/local_score.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace mapstruct {

StructureMask structure_mask(const DominantDirections& directions, int side,
                             double half_width_deg) {
  if (directions.empty()) {
    throw Error(ErrorCode::kNoStructure, "no dominant directions to build a structure mask");
  }
  const auto angles = directions.spectral_angles();
  return fold(angles, side, half_width_deg);
}

NominalMap reconstruct_nominal(const Spectrum& spectrum, const StructureMask& mask,
                               const BinaryMap& input) {
  if (input.width() != spectrum.side || input.height() != spectrum.side) {
    throw Error(ErrorCode::kInvalidArgument, "input map does not match spectrum size");
  }
  NominalMap out{idft2(apply_mask(spectrum, mask)), RealField(spectrum.side, spectrum.side)};

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (!input[i]) continue;
    lo = std::min(lo, out.scores[i]);
    hi = std::max(hi, out.scores[i]);
  }
  const double range = hi - lo;
  if (!(range > 0.0)) return out;
  for (std::size_t i = 0; i < out.scores.size(); ++i) {
    out.normalized[i] = std::clamp((out.scores[i] - lo) / range, 0.0, 1.0);
  }
  return out;
}

std::vector<double> occupied_scores(const NominalMap& nominal, const BinaryMap& input) {
  std::vector<double> out;
  for (std::size_t i = 0; i < input.size(); ++i) {
    if (input[i]) out.push_back(nominal.normalized[i]);
  }
  return out;
}

double GaussianComponent::density(double x) const {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

namespace {

double percentile(std::vector<double> sorted_copy, double q) {
  std::sort(sorted_copy.begin(), sorted_copy.end());
  const double pos = q * static_cast<double>(sorted_copy.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted_copy.size() - 1);
  return sorted_copy[lo] + (pos - static_cast<double>(lo)) * (sorted_copy[hi] - sorted_copy[lo]);
}

double log_density(double x, const GaussianComponent& c) {
  const double d = x - c.mean;
  return -0.5 * d * d / c.variance - 0.5 * std::log(2.0 * std::numbers::pi * c.variance);
}

}  // namespace

GmmFit fit_gmm(std::span<const double> samples, const EmConfig& config) {
  const std::size_t n = samples.size();
  if (n < config.min_samples || n < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "EM needs at least " + std::to_string(config.min_samples) + " samples");
  }
  std::vector<double> xs(samples.begin(), samples.end());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sample_var = ss / static_cast<double>(n - 1);

  GmmFit fit;
  std::array<GaussianComponent, 2> comp{
      GaussianComponent{percentile(xs, 0.25), sample_var, 0.5},
      GaussianComponent{percentile(xs, 0.75), sample_var, 0.5},
  };
  auto clamp_variance = [&](GaussianComponent& c) {
    if (!(c.variance >= config.variance_floor)) {
      c.variance = config.variance_floor;
      fit.variance_collapsed = true;
    }
  };
  clamp_variance(comp[0]);
  clamp_variance(comp[1]);

  std::vector<double> resp(n);  // responsibility of component 1
  auto e_step = [&]() {
    const double lw0 = std::log(comp[0].weight);
    const double lw1 = std::log(comp[1].weight);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double a = lw0 + log_density(xs[i], comp[0]);
      const double b = lw1 + log_density(xs[i], comp[1]);
      const double m = std::max(a, b);
      const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
      resp[i] = std::exp(b - lse);
      ll += lse;
    }
    return ll / static_cast<double>(n);
  };

  double ll = e_step();
  fit.log_likelihood.push_back(ll);
  for (int iter = 0; iter < config.max_iterations; ++iter) {
    double r1 = 0.0, s0 = 0.0, s1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r1 += resp[i];
      s0 += (1.0 - resp[i]) * xs[i];
      s1 += resp[i] * xs[i];
    }
    const double r0 = static_cast<double>(n) - r1;
    // A component that lost all support keeps its previous parameters.
    if (r0 > 0.0) comp[0].mean = s0 / r0;
    if (r1 > 0.0) comp[1].mean = s1 / r1;
    double v0 = 0.0, v1 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d0 = xs[i] - comp[0].mean;
      const double d1 = xs[i] - comp[1].mean;
      v0 += (1.0 - resp[i]) * d0 * d0;
      v1 += resp[i] * d1 * d1;
    }
    if (r0 > 0.0) comp[0].variance = v0 / r0;
    if (r1 > 0.0) comp[1].variance = v1 / r1;
    clamp_variance(comp[0]);
    clamp_variance(comp[1]);
    comp[1].weight = std::clamp(r1 / static_cast<double>(n), 0.0, 1.0);
    comp[0].weight = 1.0 - comp[1].weight;
    fit.iterations = iter + 1;
    if (comp[0].weight <= 0.0 || comp[1].weight <= 0.0) break;

    const double next = e_step();
    fit.log_likelihood.push_back(next);
    const double gain = next - ll;
    ll = next;
    if (gain < config.tolerance) {
      fit.converged = true;
      break;
    }
  }

  const bool second_is_structure = comp[1].mean >= comp[0].mean;
  fit.structure = second_is_structure ? comp[1] : comp[0];
  fit.clutter = second_is_structure ? comp[0] : comp[1];
  fit.tau = fit.structure.weight;
  return fit;
}

ScoreThreshold gmm_threshold(const GmmFit& fit) {
  const auto& st = fit.structure;
  const auto& cl = fit.clutter;
  if (std::abs(st.mean - cl.mean) < 1e-6) {
    throw Error(ErrorCode::kNoSeparation, "mixture components are not separated");
  }
  if (!(fit.tau > 0.0 && fit.tau < 1.0)) {
    throw Error(ErrorCode::kNoSeparation, "a mixture component has zero weight");
  }
  const double lo = std::min(st.mean, cl.mean);
  const double hi = std::max(st.mean, cl.mean);
  const double mid = 0.5 * (lo + hi);

  // f(s) = log(tau N_s(s)) - log((1 - tau) N_c(s)), a quadratic in s.
  const double k = std::log(fit.tau / (1.0 - fit.tau)) + 0.5 * std::log(cl.variance / st.variance);
  const double a = 1.0 / (2.0 * cl.variance) - 1.0 / (2.0 * st.variance);
  const double b = st.mean / st.variance - cl.mean / cl.variance;
  const double c = cl.mean * cl.mean / (2.0 * cl.variance) -
                   st.mean * st.mean / (2.0 * st.variance) + k;
  auto f = [&](double s) { return (a * s + b) * s + c; };
  auto df = [&](double s) { return 2.0 * a * s + b; };

  std::vector<double> roots;
  const double scale = std::max(std::abs(b), 1.0 / std::min(st.variance, cl.variance));
  if (std::abs(a) * std::max(hi * hi, 1.0) <= 1e-14 * scale) {
    if (b != 0.0) roots.push_back(-c / b);
  } else {
    const double disc = b * b - 4.0 * a * c;
    if (disc >= 0.0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      if (q != 0.0) roots.push_back(c / q);
      roots.push_back(q / a);
    }
  }

  ScoreThreshold out{mid, true};
  double best = std::numeric_limits<double>::infinity();
  for (double r : roots) {
    if (r >= lo && r <= hi && std::abs(r - mid) < best) {
      best = std::abs(r - mid);
      out = {r, false};
    }
  }
  if (!out.fallback) {
    for (int i = 0; i < 3; ++i) {
      const double d = df(out.s);
      if (d == 0.0) break;
      const double next = out.s - f(out.s) / d;
      if (!(next >= lo && next <= hi)) break;
      out.s = next;
    }
  }
  return out;
}

DeclutteredMap declutter(const BinaryMap& input, const NominalMap& nominal, double s) {
  if (input.width() != nominal.normalized.width() ||
      input.height() != nominal.normalized.height()) {
    throw Error(ErrorCode::kInvalidArgument, "nominal map does not match input");
  }
  BinaryMap out(input.width(), input.height());
  for (std::size_t i = 0; i < input.size(); ++i) {
    out[i] = (input[i] && nominal.normalized[i] > s) ? 1 : 0;
  }
  return out;
}

}  // namespace mapstruct
