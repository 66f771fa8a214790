#include <doctest.h>

#include <algorithm>
#include <set>

#include "mapstruct/evalharness.hpp"
#include "mapstruct/synthetic.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace mapstruct;

TEST_CASE("zero obstacles leave the map unchanged") {
  const auto office = synthetic::rectilinear_office(100);
  ClutterSpec spec;
  spec.count = 0;
  const LabeledMap l = inject_clutter(office.map, spec);
  CHECK(l.bits == office.map);
  CHECK(l.count(CellLabel::kClutter) == 0);
  CHECK(l.count(CellLabel::kStructure) == count_occupied(office.map));
}

TEST_CASE("twenty 5x5 squares on an empty map") {
  ClutterSpec spec;
  spec.count = 20;
  spec.size = 5;
  spec.seed = 11;  // a seed whose obstacles neither overlap nor clip
  const LabeledMap l = inject_clutter(BinaryMap(100, 100), spec);
  CHECK(l.count(CellLabel::kClutter) == 500);
  CHECK(count_occupied(l.bits) == 500);
  for (spec.seed = 1; spec.seed <= 10; ++spec.seed) {
    CHECK(inject_clutter(BinaryMap(100, 100), spec).count(CellLabel::kClutter) <= 500);
  }
}

TEST_CASE("outline rasterization matches independent constructions") {
  for (int size = 2; size <= 39; ++size) {
    CHECK(rasterize_outline(Outline::kSquare, size).size() == std::size_t(size * size));
    CHECK(rasterize_outline(Outline::kRectangle, size).size() ==
          std::size_t(size * ((size + 1) / 2)));
    for (double rot : {0.0, 17.0, 45.0, 71.5}) {
      auto got = rasterize_outline(Outline::kStar, size, rot);
      auto ref = oracle::star_cells(size, rot);
      if (ref.empty()) ref.emplace_back((size - 1) / 2, (size - 1) / 2);
      std::sort(got.begin(), got.end());
      std::sort(ref.begin(), ref.end());
      // Cells on a triangle edge are ambiguous between the two constructions.
      std::vector<std::pair<int, int>> diff;
      std::set_symmetric_difference(got.begin(), got.end(), ref.begin(), ref.end(),
                                    std::back_inserter(diff));
      CHECK_MESSAGE(diff.size() <= std::size_t(size / 8), "size " << size << " rot " << rot);
    }
    const auto circle = rasterize_outline(Outline::kCircle, size);
    const auto diamond = rasterize_outline(Outline::kDiamond, size);
    CHECK(circle.size() >= diamond.size());
    if (size >= 6) CHECK(circle.size() > diamond.size());
    CHECK(circle.size() <= std::size_t(size * size));
  }
  CHECK_THROWS_AS(rasterize_outline(Outline::kSquare, 1), Error);
}

TEST_CASE("injection keeps every original cell and its label") {
  const auto apt = synthetic::rotated_apartment(120);
  for (auto shape : {ClutterShape::kSquare, ClutterShape::kRectangle, ClutterShape::kRandom}) {
    ClutterSpec spec;
    spec.shape = shape;
    spec.count = 60;
    spec.size = 9;
    spec.seed = 17;
    const LabeledMap l = inject_clutter(apt.map, spec);
    for (std::size_t i = 0; i < l.bits.size(); ++i) {
      if (apt.map[i]) {
        CHECK(l.bits[i] == 1);
        CHECK(l.truth[i] == CellLabel::kStructure);
      } else {
        CHECK((l.truth[i] == CellLabel::kClutter) == (l.bits[i] == 1));
      }
    }
    CHECK(l.count(CellLabel::kClutter) > 0);
    const LabeledMap again = inject_clutter(apt.map, spec);
    CHECK(again.bits == l.bits);
  }
}

TEST_CASE("a full map exhausts placement") {
  ClutterSpec spec;
  spec.count = 1;
  try {
    inject_clutter(BinaryMap(10, 10, 1), spec);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kPlacementExhausted);
  }
  spec.size = 1;
  CHECK_THROWS_AS(inject_clutter(BinaryMap(10, 10), spec), Error);
}

TEST_CASE("precision and recall against a brute-force confusion count") {
  const auto office = synthetic::rectilinear_office(100);
  ClutterSpec spec;
  spec.count = 30;
  spec.seed = 2;
  const LabeledMap l = inject_clutter(office.map, spec);

  // Truth structure exactly.
  const PrecisionRecall exact = precision_recall(l, office.map);
  CHECK(*exact.precision == 1.0);
  CHECK(exact.recall == 1.0);
  CHECK(exact.clutter_removal == 1.0);

  // Keep everything.
  const PrecisionRecall all = precision_recall(l, l.bits);
  CHECK(all.recall == 1.0);
  CHECK(*all.precision == doctest::Approx(double(l.count(CellLabel::kStructure)) /
                                          count_occupied(l.bits)));
  CHECK(all.clutter_removal == 0.0);

  // Random subset.
  const BinaryMap coin = oracle::random_bits(100, 100, 0.6, 8);
  BinaryMap kept(100, 100);
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < kept.size(); ++i) {
    kept[i] = l.bits[i] && coin[i];
    if (kept[i] && l.truth[i] == CellLabel::kStructure) ++tp;
    if (kept[i] && l.truth[i] == CellLabel::kClutter) ++fp;
    if (!kept[i] && l.truth[i] == CellLabel::kStructure) ++fn;
  }
  const PrecisionRecall pr = precision_recall(l, kept);
  CHECK(*pr.precision == doctest::Approx(double(tp) / (tp + fp)));
  CHECK(pr.recall == doctest::Approx(double(tp) / (tp + fn)));

  // Nothing kept: precision undefined.
  CHECK_FALSE(precision_recall(l, BinaryMap(100, 100)).precision.has_value());
  CHECK_THROWS_AS(precision_recall(l, BinaryMap(5, 5)), Error);
}

TEST_CASE("sweep grid is a full factorial in key order and deterministic") {
  const auto office = synthetic::rectilinear_office(96);
  const std::vector<SweepMap> maps{{"office", office.map}};
  SweepGrid one{{ClutterShape::kSquare}, {4}, {10}, {1}};
  CHECK(run_sweep(maps, one).size() == 1);

  SweepGrid g{{ClutterShape::kSquare, ClutterShape::kRandom}, {3, 6}, {5, 15}, {1, 2}};
  const auto rows = run_sweep(maps, g);
  REQUIRE(rows.size() == 16);
  CHECK(rows.front().key() == "office|square|3|5|1");
  CHECK(rows[1].key() == "office|square|3|5|2");
  CHECK(rows.back().key() == "office|random|6|15|2");
  for (const auto& r : rows) {
    if (r.precision) {
      CHECK(*r.precision >= 0.0);
      CHECK(*r.precision <= 1.0);
    }
    CHECK(r.recall >= 0.0);
    CHECK(r.recall <= 1.0);
  }
  CHECK(to_csv(run_sweep(maps, g)) == to_csv(rows));

  // Resume takes stored rows verbatim.
  std::map<std::string, SweepRow> done;
  SweepRow fake = rows[3];
  fake.w = 0.123;
  done.emplace(fake.key(), fake);
  const auto resumed = run_sweep(maps, g, {}, done);
  CHECK(resumed[3].w == 0.123);
  CHECK(to_csv_line(resumed[4]) == to_csv_line(rows[4]));

  CHECK(row_seed("office", ClutterShape::kSquare, 3, 5, 1) !=
        row_seed("office", ClutterShape::kSquare, 3, 5, 2));
}

TEST_CASE("per-row failures are recorded, not thrown") {
  const std::vector<SweepMap> maps{{"full", BinaryMap(32, 32, 1)}};
  SweepGrid g{{ClutterShape::kSquare}, {4}, {3}, {1}};
  const auto rows = run_sweep(maps, g);
  REQUIRE(rows.size() == 1);
  CHECK(std::find(rows[0].flags.begin(), rows[0].flags.end(), "PLACEMENT_EXHAUSTED") !=
        rows[0].flags.end());
}

TEST_CASE("CSV round-trip, quoting and malformed input") {
  SweepRow a;
  a.map = "maps/a,b \"x\".pgm";
  a.shape = ClutterShape::kRectangle;
  a.size = 7;
  a.count = 20;
  a.seed = 3;
  a.precision = 0.5;
  a.recall = 0.25;
  a.w = 0.125;
  a.s = 0.4;
  a.flags = {"EM_NOT_CONVERGED", "THRESHOLD_FALLBACK"};
  SweepRow b = a;
  b.map = "plain";
  b.precision.reset();
  b.s.reset();
  b.flags.clear();

  const std::string csv = to_csv({a, b});
  CHECK(csv.rfind(sweep_csv_header(), 0) == 0);
  CHECK(sweep_csv_header() == "map,shape,size,count,seed,precision,recall,w,s,flags");
  CHECK(csv.find("\"maps/a,b \"\"x\"\".pgm\"") != std::string::npos);
  const auto back = parse_csv(csv);
  REQUIRE(back.size() == 2);
  CHECK(back[0].map == a.map);
  CHECK(back[0].shape == ClutterShape::kRectangle);
  CHECK(*back[0].precision == 0.5);
  CHECK(back[0].flags == a.flags);
  CHECK_FALSE(back[1].precision.has_value());
  CHECK_FALSE(back[1].s.has_value());
  CHECK(to_csv(back) == csv);

  CHECK_THROWS_AS(parse_csv("nonsense\n1,2\n"), Error);
  CHECK_THROWS_AS(parse_csv(sweep_csv_header() + "\nx,square,1\n"), Error);
  CHECK_THROWS_AS(parse_csv(sweep_csv_header() + "\nx,blob,1,1,1,,0,0,,\n"), Error);
}

TEST_CASE("pearson correlation and its degenerate cases") {
  std::vector<SweepRow> rows;
  for (int i = 0; i < 10; ++i) {
    SweepRow r;
    r.count = i < 5 ? 20 : 50;
    r.w = 0.05 * i;
    r.precision = 1.0 - r.w;
    rows.push_back(r);
  }
  const CorrelationReport c = correlation(rows);
  CHECK(c.r == doctest::Approx(-1.0));
  CHECK(c.n == 10);
  CHECK(c.by_count.size() == 2);
  CHECK(*c.by_count.at(20) == doctest::Approx(-1.0));

  for (auto& r : rows) r.w = 0.3;
  CHECK_THROWS_AS(correlation(rows), Error);
  CHECK_THROWS_AS(pearson({1.0, 2.0}, {2.0, 1.0}), Error);
  CHECK(pearson({1, 2, 3, 4}, {2, 4, 6, 8}) == doctest::Approx(1.0));
}
