#pragma once

#include <complex>
#include <span>
#include <vector>

#include "mapstruct/raster.hpp"

namespace mapstruct {

// Centered 2D DFT of a square real field. The zero frequency sits at
// (center, center) with center = side / 2; coefficient (x, y) holds
// frequency (x - center, y - center).
struct Spectrum {
  int side = 0;
  std::vector<std::complex<double>> coeffs;

  int center() const noexcept { return side / 2; }
  std::complex<double>& at(int x, int y) { return coeffs[static_cast<std::size_t>(y) * side + x]; }
  const std::complex<double>& at(int x, int y) const {
    return coeffs[static_cast<std::size_t>(y) * side + x];
  }
};

// Largest radius for which a full circle of samples stays on the grid.
inline int max_radius(int side) { return side / 2 - 1; }

Spectrum dft2(const BinaryMap& map);
Spectrum dft2(const RealField& field);

// Throws kDegenerate when the result has a non-negligible imaginary part,
// which signals a spectrum that is not conjugate-symmetric (a broken mask).
RealField idft2(const Spectrum& spectrum, double imag_tolerance = 1e-9);

// Amplitude sampled on an (angle, radius) grid around the spectrum center.
// Angles are measured from the +x (column) axis toward +y (row).
struct PolarAmplitude {
  int angle_bins = 0;
  int radius_bins = 0;
  std::vector<double> values;  // values[a * radius_bins + (r - 1)], radius r = 1..radius_bins

  double at(int angle, int radius) const {
    return values[static_cast<std::size_t>(angle) * radius_bins + (radius - 1)];
  }
  double angle_deg(int angle) const { return 360.0 * angle / angle_bins; }
};

// radius_bins <= 0 selects every integer radius up to max_radius(side);
// larger requests are clipped to the inscribed circle.
PolarAmplitude unfold(const Spectrum& spectrum, int angle_bins = 720, int radius_bins = 0);

// Cumulative amplitude per direction over [0, 360).
struct DirectionalProfile {
  std::vector<double> values;

  int bins() const noexcept { return static_cast<int>(values.size()); }
  double bin_width_deg() const { return 360.0 / bins(); }
};

DirectionalProfile directional_profile(const PolarAmplitude& polar);

struct StructureMask {
  int side = 0;
  std::vector<std::uint8_t> bits;

  bool at(int x, int y) const { return bits[static_cast<std::size_t>(y) * side + x] != 0; }
  std::size_t count() const;
  bool point_symmetric() const;
};

// Inverse of the unfolding: selects every spectrum cell whose direction from
// the center lies within half_width_deg of one of the angles (or its
// 180-degree mirror) and whose radius is in (0, max_radius]. DC is always
// selected.
StructureMask fold(std::span<const double> angles_deg, int side, double half_width_deg);

Spectrum apply_mask(const Spectrum& spectrum, const StructureMask& mask);

// log(1 + |coeff|), for debug images.
RealField log_amplitude(const Spectrum& spectrum);
// log(1 + A_p) laid out as angle (rows) x radius (columns).
RealField log_polar(const PolarAmplitude& polar);

}  // namespace mapstruct
