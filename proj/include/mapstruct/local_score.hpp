#pragma once

#include <span>
#include <vector>

#include "mapstruct/raster.hpp"
#include "mapstruct/spectral.hpp"
#include "mapstruct/structure.hpp"

namespace mapstruct {

// Throws kNoStructure when no direction was detected.
StructureMask structure_mask(const DominantDirections& directions, int side,
                             double half_width_deg);

struct NominalMap {
  RealField scores;      // real part of the masked inverse transform
  RealField normalized;  // min-max over occupied input cells, clamped to [0,1]
};

NominalMap reconstruct_nominal(const Spectrum& spectrum, const StructureMask& mask,
                               const BinaryMap& input);

// Normalized scores of the occupied cells in row-major order.
std::vector<double> occupied_scores(const NominalMap& nominal, const BinaryMap& input);

struct GaussianComponent {
  double mean = 0.0;
  double variance = 1.0;
  double weight = 0.5;

  double density(double x) const;
};

struct GmmFit {
  GaussianComponent structure;  // larger mean
  GaussianComponent clutter;
  double tau = 0.5;  // structure weight
  int iterations = 0;
  bool converged = false;
  bool variance_collapsed = false;
  // Mean per-sample log-likelihood before each M-step and after the last one.
  std::vector<double> log_likelihood;
};

struct EmConfig {
  double tolerance = 1e-6;  // on the mean per-sample log-likelihood
  int max_iterations = 200;
  double variance_floor = 1e-12;
  std::size_t min_samples = 20;
};

// Two-component 1D Gaussian mixture by EM. Means start at the 25th/75th
// percentiles, both variances at the sample variance, weights at 1/2.
GmmFit fit_gmm(std::span<const double> samples, const EmConfig& config = {});

struct ScoreThreshold {
  double s = 0.0;
  bool fallback = false;  // no crossing between the means; midpoint used
};

// Score at which tau * N_structure(s) == (1 - tau) * N_clutter(s), taking
// the crossing between the two means. Throws kNoSeparation if the means are
// closer than 1e-6.
ScoreThreshold gmm_threshold(const GmmFit& fit);

// Occupied cells that survive clutter removal; always a subset of the input.
using DeclutteredMap = BinaryMap;

// Keeps an occupied input cell iff its normalized score is > s.
DeclutteredMap declutter(const BinaryMap& input, const NominalMap& nominal, double s);

}  // namespace mapstruct
