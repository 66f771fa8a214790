#include "mapstruct/global_score.hpp"

#include <algorithm>
#include <numeric>

namespace mapstruct {

std::vector<double> scale_profile(std::span<const double> profile) {
  if (profile.empty()) throw Error(ErrorCode::kInvalidArgument, "empty profile");
  const auto [lo, hi] = std::minmax_element(profile.begin(), profile.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw Error(ErrorCode::kDegenerate, "constant directional profile");
  std::vector<double> out(profile.size());
  std::transform(profile.begin(), profile.end(), out.begin(),
                 [&](double v) { return (v - *lo) / range; });
  return out;
}

TrustClass classify_trust(double w) {
  if (w < 0.2) return TrustClass::kTrusted;
  if (w > 0.4) return TrustClass::kFailed;
  return TrustClass::kUncertain;
}

std::string_view to_string(TrustClass trust) {
  switch (trust) {
    case TrustClass::kTrusted: return "TRUSTED";
    case TrustClass::kUncertain: return "UNCERTAIN";
    case TrustClass::kFailed: return "FAILED";
  }
  return "FAILED";
}

GlobalScore structure_score(std::span<const double> scaled, const DominantDirections& dirs) {
  GlobalScore out;
  if (scaled.empty()) throw Error(ErrorCode::kInvalidArgument, "empty profile");
  out.mean_scaled_profile =
      std::accumulate(scaled.begin(), scaled.end(), 0.0) / static_cast<double>(scaled.size());

  double peak_sum = 0.0;
  for (int bin : dirs.peak_bins) {
    if (bin < 0 || bin >= static_cast<int>(scaled.size())) {
      throw Error(ErrorCode::kInvalidArgument, "peak bin outside profile");
    }
    peak_sum += scaled[bin];
  }
  out.n_peaks = static_cast<int>(dirs.peak_bins.size());
  if (out.n_peaks == 0 || !(peak_sum > 0.0)) {
    out.w = 1.0;
    out.no_structure = true;
    return out;
  }
  out.mean_scaled_peak = peak_sum / out.n_peaks;
  out.w = out.mean_scaled_profile / out.mean_scaled_peak;
  out.no_structure = false;
  return out;
}

}  // namespace mapstruct
