#include "mapstruct/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>

namespace mapstruct {
namespace {

// FFTW's planner is not reentrant; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (!data) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;

  fftw_complex* data;
};

void transform(fftw_complex* buf, int side, int sign) {
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(side, side, buf, buf, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

template <typename Field>
Spectrum forward(const Field& field) {
  if (field.width() != field.height()) {
    throw Error(ErrorCode::kInvalidArgument, "dft2 needs a square map; pad first");
  }
  const int n = field.width();
  const int h = n / 2;
  FftwBuffer buf(field.size());
  for (std::size_t i = 0; i < field.size(); ++i) {
    buf.data[i][0] = static_cast<double>(field[i]);
    buf.data[i][1] = 0.0;
  }
  transform(buf.data, n, FFTW_FORWARD);

  Spectrum out{n, std::vector<std::complex<double>>(field.size())};
  for (int v = 0; v < n; ++v) {
    const int cy = (v + h) % n;
    for (int u = 0; u < n; ++u) {
      const int cx = (u + h) % n;
      const auto& c = buf.data[static_cast<std::size_t>(v) * n + u];
      out.at(cx, cy) = {c[0], c[1]};
    }
  }
  return out;
}

// Direction of (dx, dy) folded into [0, 180), computed identically for a
// vector and its negation so that masks are exactly point-symmetric.
double half_plane_angle_deg(int dx, int dy) {
  if (dy < 0 || (dy == 0 && dx < 0)) {
    dx = -dx;
    dy = -dy;
  }
  double a = std::atan2(static_cast<double>(dy), static_cast<double>(dx)) * 180.0 /
             std::numbers::pi;
  if (a >= 180.0) a -= 180.0;
  return a;
}

double axial_distance_deg(double a, double b) {
  double d = std::fmod(std::abs(a - b), 180.0);
  return std::min(d, 180.0 - d);
}

}  // namespace

Spectrum dft2(const BinaryMap& map) { return forward(map); }
Spectrum dft2(const RealField& field) { return forward(field); }

RealField idft2(const Spectrum& spectrum, double imag_tolerance) {
  const int n = spectrum.side;
  if (n <= 0 || spectrum.coeffs.size() != static_cast<std::size_t>(n) * n) {
    throw Error(ErrorCode::kInvalidArgument, "malformed spectrum");
  }
  const int h = n / 2;
  FftwBuffer buf(spectrum.coeffs.size());
  for (int v = 0; v < n; ++v) {
    const int cy = (v + h) % n;
    for (int u = 0; u < n; ++u) {
      const auto c = spectrum.at((u + h) % n, cy);
      auto& dst = buf.data[static_cast<std::size_t>(v) * n + u];
      dst[0] = c.real();
      dst[1] = c.imag();
    }
  }
  transform(buf.data, n, FFTW_BACKWARD);

  const double scale = 1.0 / (static_cast<double>(n) * n);
  RealField out(n, n);
  double max_abs = 0.0;
  double max_imag = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double re = buf.data[i][0] * scale;
    const double im = buf.data[i][1] * scale;
    out[i] = re;
    max_abs = std::max(max_abs, std::hypot(re, im));
    max_imag = std::max(max_imag, std::abs(im));
  }
  if (max_imag > imag_tolerance * max_abs) {
    throw Error(ErrorCode::kDegenerate,
                "inverse transform has an imaginary residual; spectrum mask is not symmetric");
  }
  return out;
}

PolarAmplitude unfold(const Spectrum& spectrum, int angle_bins, int radius_bins) {
  if (angle_bins < 4) throw Error(ErrorCode::kInvalidArgument, "angle_bins must be >= 4");
  const int rmax = max_radius(spectrum.side);
  if (rmax < 1) throw Error(ErrorCode::kInvalidArgument, "spectrum too small to unfold");
  if (radius_bins > 0 && radius_bins < 4) {
    throw Error(ErrorCode::kInvalidArgument, "radius_bins must be >= 4");
  }
  const int radii = radius_bins <= 0 ? rmax : std::min(radius_bins, rmax);

  std::vector<double> amp(spectrum.coeffs.size());
  for (std::size_t i = 0; i < amp.size(); ++i) amp[i] = std::abs(spectrum.coeffs[i]);
  const int n = spectrum.side;
  const double c = spectrum.center();

  PolarAmplitude out{angle_bins, radii, std::vector<double>(static_cast<std::size_t>(angle_bins) * radii)};
  for (int a = 0; a < angle_bins; ++a) {
    const double phi = 2.0 * std::numbers::pi * a / angle_bins;
    const double ca = std::cos(phi);
    const double sa = std::sin(phi);
    for (int r = 1; r <= radii; ++r) {
      const double x = c + r * ca;
      const double y = c + r * sa;
      const int x0 = static_cast<int>(std::floor(x));
      const int y0 = static_cast<int>(std::floor(y));
      const double fx = x - x0;
      const double fy = y - y0;
      const int x1 = std::min(x0 + 1, n - 1);
      const int y1 = std::min(y0 + 1, n - 1);
      auto px = [&](int xx, int yy) { return amp[static_cast<std::size_t>(yy) * n + xx]; };
      const double v = (1 - fx) * (1 - fy) * px(x0, y0) + fx * (1 - fy) * px(x1, y0) +
                       (1 - fx) * fy * px(x0, y1) + fx * fy * px(x1, y1);
      out.values[static_cast<std::size_t>(a) * radii + (r - 1)] = v;
    }
  }
  return out;
}

DirectionalProfile directional_profile(const PolarAmplitude& polar) {
  DirectionalProfile out{std::vector<double>(polar.angle_bins, 0.0)};
  for (int a = 0; a < polar.angle_bins; ++a) {
    double sum = 0.0;
    for (int r = 1; r <= polar.radius_bins; ++r) sum += polar.at(a, r);
    out.values[a] = sum;
  }
  return out;
}

std::size_t StructureMask::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

bool StructureMask::point_symmetric() const {
  const int c = side / 2;
  for (int y = 0; y < side; ++y) {
    for (int x = 0; x < side; ++x) {
      if (!at(x, y)) continue;
      const int mx = 2 * c - x;
      const int my = 2 * c - y;
      if (mx < 0 || my < 0 || mx >= side || my >= side || !at(mx, my)) return false;
    }
  }
  return true;
}

StructureMask fold(std::span<const double> angles_deg, int side, double half_width_deg) {
  if (side <= 0) throw Error(ErrorCode::kInvalidArgument, "mask side must be positive");
  if (!(half_width_deg > 0.0)) throw Error(ErrorCode::kInvalidArgument, "half width must be > 0");
  StructureMask mask{side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side, 0)};
  const int c = side / 2;
  const int rmax = max_radius(side);
  const double tol = half_width_deg + 1e-9;
  for (int y = 0; y < side; ++y) {
    const int dy = y - c;
    for (int x = 0; x < side; ++x) {
      const int dx = x - c;
      const int r2 = dx * dx + dy * dy;
      if (r2 == 0 || r2 > rmax * rmax) continue;
      const double a = half_plane_angle_deg(dx, dy);
      for (double target : angles_deg) {
        if (axial_distance_deg(a, target) <= tol) {
          mask.bits[static_cast<std::size_t>(y) * side + x] = 1;
          break;
        }
      }
    }
  }
  mask.bits[static_cast<std::size_t>(c) * side + c] = 1;
  return mask;
}

Spectrum apply_mask(const Spectrum& spectrum, const StructureMask& mask) {
  if (mask.side != spectrum.side) throw Error(ErrorCode::kInvalidArgument, "mask size mismatch");
  Spectrum out = spectrum;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    if (!mask.bits[i]) out.coeffs[i] = 0.0;
  }
  return out;
}

RealField log_amplitude(const Spectrum& spectrum) {
  RealField out(spectrum.side, spectrum.side);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::log1p(std::abs(spectrum.coeffs[i]));
  return out;
}

RealField log_polar(const PolarAmplitude& polar) {
  RealField out(polar.radius_bins, polar.angle_bins);
  for (int a = 0; a < polar.angle_bins; ++a) {
    for (int r = 1; r <= polar.radius_bins; ++r) out(r - 1, a) = std::log1p(polar.at(a, r));
  }
  return out;
}

}  // namespace mapstruct
