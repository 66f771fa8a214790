#include <doctest.h>

#include "mapstruct/global_score.hpp"
#include "mapstruct/pipeline.hpp"
#include "mapstruct/synthetic.hpp"

using namespace mapstruct;

TEST_CASE("min-max scaling") {
  const std::vector<double> x{2, 4, 6, 3};
  const auto s = scale_profile(x);
  CHECK(s == std::vector<double>{0.0, 0.5, 1.0, 0.25});
  const std::vector<double> flat{1, 1, 1};
  CHECK_THROWS_AS(scale_profile(flat), Error);
}

TEST_CASE("trust classes and their boundaries") {
  CHECK(classify_trust(0.0) == TrustClass::kTrusted);
  CHECK(classify_trust(0.1999) == TrustClass::kTrusted);
  CHECK(classify_trust(0.2) == TrustClass::kUncertain);
  CHECK(classify_trust(0.4) == TrustClass::kUncertain);
  CHECK(classify_trust(0.4001) == TrustClass::kFailed);
  CHECK(to_string(TrustClass::kUncertain) == "UNCERTAIN");
}

TEST_CASE("score is the ratio of profile mean to peak mean") {
  const std::vector<double> scaled{0.0, 1.0, 0.2, 0.0, 0.6, 0.2};
  DominantDirections d;
  d.peak_bins = {1, 4};
  const GlobalScore g = structure_score(scaled, d);
  CHECK(g.mean_scaled_profile == doctest::Approx(2.0 / 6.0));
  CHECK(g.mean_scaled_peak == doctest::Approx(0.8));
  CHECK(g.w == doctest::Approx((2.0 / 6.0) / 0.8));
  CHECK(g.n_peaks == 2);
  CHECK_FALSE(g.no_structure);

  const GlobalScore none = structure_score(scaled, DominantDirections{});
  CHECK(none.w == 1.0);
  CHECK(none.no_structure);
  CHECK(none.trust() == TrustClass::kFailed);
}

TEST_CASE("structured maps score below their shuffled versions") {
  for (const auto& m : synthetic::corpus(128)) {
    const double clean = analyze_map(m.map).score.w;
    const double shuffled = analyze_map(synthetic::shuffle_cells(m.map, 3)).score.w;
    CHECK_MESSAGE(clean < shuffled, m.name);
    CHECK(clean >= 0.0);
    CHECK(clean <= 1.0);
  }
}
