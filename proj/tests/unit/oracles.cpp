#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace oracle {

std::vector<std::complex<double>> naive_dft2(const RealField& f) {
  const int n = f.width();
  const int c = n / 2;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * n);
  for (int v = 0; v < n; ++v) {
    for (int u = 0; u < n; ++u) {
      const double ku = u - c;
      const double kv = v - c;
      std::complex<double> acc = 0.0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          const double phase = -2.0 * std::numbers::pi * (ku * x + kv * y) / n;
          acc += f(x, y) * std::polar(1.0, phase);
        }
      }
      out[static_cast<std::size_t>(v) * n + u] = acc;
    }
  }
  return out;
}

std::vector<std::complex<double>> naive_idft2(const std::vector<std::complex<double>>& coeffs,
                                              int n) {
  const int c = n / 2;
  std::vector<std::complex<double>> out(static_cast<std::size_t>(n) * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      std::complex<double> acc = 0.0;
      for (int v = 0; v < n; ++v) {
        for (int u = 0; u < n; ++u) {
          const double phase = 2.0 * std::numbers::pi * ((u - c) * x + (v - c) * y) / n;
          acc += coeffs[static_cast<std::size_t>(v) * n + u] * std::polar(1.0, phase);
        }
      }
      out[static_cast<std::size_t>(y) * n + x] = acc / static_cast<double>(n * n);
    }
  }
  return out;
}

double brute_prominence(const std::vector<double>& x, int index) {
  const int n = static_cast<int>(x.size());
  const double h = x[index];
  std::vector<double> levels;
  for (double v : x) {
    if (v <= h) levels.push_back(v);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  for (double level : levels) {
    // Grow the component of {x >= level} around index in both directions.
    bool reaches_higher = false;
    for (int dir : {-1, 1}) {
      for (int k = 1; k < n; ++k) {
        const double v = x[((index + dir * k) % n + n) % n];
        if (v < level) break;
        if (v > h) {
          reaches_higher = true;
          break;
        }
      }
    }
    if (reaches_higher) return h - level;
  }
  return h - *std::min_element(x.begin(), x.end());
}

namespace {

double cross(Point2 a, Point2 b, Point2 p) {
  return (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
}

bool in_triangle(Point2 a, Point2 b, Point2 c, Point2 p) {
  const double d1 = cross(a, b, p);
  const double d2 = cross(b, c, p);
  const double d3 = cross(c, a, p);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

}  // namespace

std::vector<std::pair<int, int>> star_cells(int size, double rotation_deg) {
  const double c = (size - 1) / 2.0;
  const double r = size / 2.0;
  std::vector<Point2> pts;
  for (int k = 0; k < 10; ++k) {
    const double rad = (k % 2 == 0) ? r : 0.4 * r;
    const double a = (rotation_deg + 36.0 * k) * std::numbers::pi / 180.0;
    pts.push_back({c + rad * std::cos(a), c + rad * std::sin(a)});
  }
  const Point2 center{c, c};
  std::vector<std::pair<int, int>> cells;
  for (int y = 0; y < size; ++y) {
    for (int x = 0; x < size; ++x) {
      const Point2 p{double(x), double(y)};
      for (int k = 0; k < 10; ++k) {
        if (in_triangle(center, pts[k], pts[(k + 1) % 10], p)) {
          cells.emplace_back(x, y);
          break;
        }
      }
    }
  }
  return cells;
}

double normal_density(double x, double mean, double variance) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

double bisect_density_crossing(double tau, double m1, double v1, double m2, double v2, double lo,
                               double hi) {
  auto f = [&](double s) {
    return tau * normal_density(s, m1, v1) - (1.0 - tau) * normal_density(s, m2, v2);
  };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

mapstruct::BinaryMap random_bits(int width, int height, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  mapstruct::BinaryMap m(width, height);
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = coin(gen) ? 1 : 0;
  return m;
}

}  // namespace oracle
