#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "mapstruct/geometry.hpp"
#include "mapstruct/raster.hpp"

// Slow, direct reference implementations used to check the library.
namespace oracle {

using mapstruct::Point2;
using mapstruct::RealField;

// Centered forward transform by direct summation: entry (x, y) holds
// frequency (x - side/2, y - side/2).
std::vector<std::complex<double>> naive_dft2(const RealField& f);

// Inverse of naive_dft2 by direct summation.
std::vector<std::complex<double>> naive_idft2(const std::vector<std::complex<double>>& coeffs,
                                              int side);

// Prominence from superlevel sets: the highest level at which the peak's
// connected component (on a ring) reaches a strictly higher sample. A peak
// with no higher sample drops to the global minimum.
double brute_prominence(const std::vector<double>& x, int index);

// Cells whose center lies in the 10-point star, tested as a union of
// triangles fanned from the star's center.
std::vector<std::pair<int, int>> star_cells(int size, double rotation_deg);

// Root of tau * N(s; m1, v1) - (1 - tau) * N(s; m2, v2) in [lo, hi] by
// bisection on a sign change.
double bisect_density_crossing(double tau, double m1, double v1, double m2, double v2, double lo,
                               double hi);

double normal_density(double x, double mean, double variance);

// Random binary raster with the given fill probability.
mapstruct::BinaryMap random_bits(int width, int height, double p, std::uint64_t seed);

}  // namespace oracle
