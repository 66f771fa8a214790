#include "mapstruct/structure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mapstruct/global_score.hpp"

namespace mapstruct {
namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

int circular_distance(int a, int b, int n) {
  const int d = wrap(a - b, n);
  return std::min(d, n - d);
}

}  // namespace

std::vector<int> local_maxima(std::span<const double> x, ProminenceMode mode) {
  const int n = static_cast<int>(x.size());
  std::vector<int> peaks;
  if (n < 3) return peaks;

  if (mode == ProminenceMode::kLinear) {
    int i = 1;
    while (i < n - 1) {
      if (x[i - 1] < x[i]) {
        int ahead = i + 1;
        while (ahead < n - 1 && x[ahead] == x[i]) ++ahead;
        if (x[ahead] < x[i]) {
          peaks.push_back((i + ahead - 1) / 2);
          i = ahead;
          continue;
        }
      }
      ++i;
    }
    return peaks;
  }

  // Start scanning right after a strict rise so no plateau straddles the seam.
  int start = -1;
  for (int i = 0; i < n; ++i) {
    if (x[wrap(i - 1, n)] < x[i]) {
      start = i;
      break;
    }
  }
  if (start < 0) return peaks;  // constant

  int step = 0;
  while (step < n) {
    const int i = wrap(start + step, n);
    if (x[wrap(i - 1, n)] < x[i]) {
      int len = 1;
      while (len < n && x[wrap(i + len, n)] == x[i]) ++len;
      if (x[wrap(i + len, n)] < x[i]) {
        peaks.push_back(wrap(i + (len - 1) / 2, n));
        step += len;
        continue;
      }
    }
    ++step;
  }
  std::sort(peaks.begin(), peaks.end());
  return peaks;
}

double peak_prominence(std::span<const double> x, int index, ProminenceMode mode) {
  const int n = static_cast<int>(x.size());
  if (index < 0 || index >= n) throw Error(ErrorCode::kInvalidArgument, "peak index out of range");
  const auto maxima = local_maxima(x, mode);
  if (!std::binary_search(maxima.begin(), maxima.end(), index)) {
    throw Error(ErrorCode::kInvalidArgument, "index is not a local maximum");
  }
  const double h = x[index];

  if (mode == ProminenceMode::kLinear) {
    double left_min = h;
    for (int i = index; i >= 0 && x[i] <= h; --i) left_min = std::min(left_min, x[i]);
    double right_min = h;
    for (int i = index; i < n && x[i] <= h; ++i) right_min = std::min(right_min, x[i]);
    return h - std::max(left_min, right_min);
  }

  double left_min = h;
  for (int k = 1; k < n; ++k) {
    const double v = x[wrap(index - k, n)];
    if (v > h) break;
    left_min = std::min(left_min, v);
  }
  double right_min = h;
  for (int k = 1; k < n; ++k) {
    const double v = x[wrap(index + k, n)];
    if (v > h) break;
    right_min = std::min(right_min, v);
  }
  return h - std::max(left_min, right_min);
}

double DirectionPeak::wall_angle_deg() const {
  return std::fmod(spectral_angle_deg + 90.0, 180.0);
}

std::vector<double> DominantDirections::spectral_angles() const {
  std::vector<double> out;
  out.reserve(peaks.size());
  for (const auto& p : peaks) out.push_back(p.spectral_angle_deg);
  return out;
}

std::vector<double> DominantDirections::wall_angles() const {
  std::vector<double> out;
  out.reserve(peaks.size());
  for (const auto& p : peaks) out.push_back(p.wall_angle_deg());
  return out;
}

DominantDirections find_dominant_directions(const DirectionalProfile& profile,
                                            const DirectionConfig& config) {
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "prominence threshold must lie in (0,1]");
  }
  DominantDirections out;
  const int n = profile.bins();
  out.angle_bins = n;
  if (n < 3) return out;

  std::vector<double> scaled;
  try {
    scaled = scale_profile(profile.values);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kDegenerate) return out;  // flat spectrum: no directions
    throw;
  }

  struct Candidate {
    int bin;
    double prominence;
  };
  std::vector<Candidate> selected;
  for (int i : local_maxima(scaled, config.mode)) {
    const double p = peak_prominence(scaled, i, config.mode);
    if (p >= config.threshold) selected.push_back({i, p});
  }
  for (const auto& c : selected) out.peak_bins.push_back(c.bin);

  const double width = 360.0 / n;
  std::vector<bool> used(selected.size(), false);
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const int mirror = wrap(selected[i].bin + n / 2, n);
    int partner = -1;
    int best_gap = std::numeric_limits<int>::max();
    for (std::size_t j = 0; j < selected.size(); ++j) {
      if (used[j]) continue;
      const int gap = circular_distance(selected[j].bin, mirror, n);
      if (gap <= 1 && gap < best_gap) {
        best_gap = gap;
        partner = static_cast<int>(j);
      }
    }

    const Candidate* keep = &selected[i];
    DirectionPeak peak;
    if (partner >= 0) {
      used[partner] = true;
      const Candidate& other = selected[partner];
      if (other.prominence > keep->prominence) keep = &other;
      peak.partner_bin = keep == &other ? selected[i].bin : other.bin;
    }
    peak.bin = keep->bin;
    peak.prominence = keep->prominence;
    peak.profile_value = scaled[keep->bin];
    peak.spectral_angle_deg = std::fmod(keep->bin * width, 180.0);
    out.peaks.push_back(peak);
  }

  std::sort(out.peaks.begin(), out.peaks.end(), [](const auto& a, const auto& b) {
    return a.spectral_angle_deg < b.spectral_angle_deg;
  });
  // Distinct pairs can fold onto the same angle only through unpaired
  // leftovers; keep the more prominent one so angles stay strictly increasing.
  std::vector<DirectionPeak> unique;
  for (const auto& p : out.peaks) {
    if (!unique.empty() && unique.back().spectral_angle_deg == p.spectral_angle_deg) {
      if (p.prominence > unique.back().prominence) unique.back() = p;
      continue;
    }
    unique.push_back(p);
  }
  out.peaks = std::move(unique);
  return out;
}

}  // namespace mapstruct
