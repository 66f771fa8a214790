#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "mapstruct/evalharness.hpp"
#include "mapstruct/grid_map.hpp"
#include "mapstruct/report.hpp"
#include "mapstruct/synthetic.hpp"
#include "test_util.hpp"

using namespace mapstruct;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "mapstruct");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Fixture {
  fs::path dir = testutil::temp_dir("cli");
  std::string room = (dir / "room.pgm").string();
  std::string blank = (dir / "blank.pgm").string();
  std::string cluttered = (dir / "cluttered.pgm").string();
  std::string gt = (dir / "office.gt.json").string();

  Fixture() {
    write_gray_image(synthetic::room_image(64), room, ImageFormat::kPgm);
    save_map(BinaryMap(24, 24), blank);
    const auto office = synthetic::rectilinear_office(128);
    ClutterSpec spec;
    spec.count = 30;
    spec.size = 6;
    spec.seed = 5;
    save_map(inject_clutter(office.map, spec).bits, cluttered);
    testutil::write_file(gt, report::ground_truth_json(office.ground_truth).dump());
  }
};

}  // namespace

TEST_CASE_FIXTURE(Fixture, "analyze reports two directions for the room") {
  const Run r = run({"analyze", room, "--json", "-"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["directions"].size() == 2);
  CHECK(j["score"]["trust"] == "TRUSTED");
  CHECK(j["input"]["path"] == room);
}

TEST_CASE_FIXTURE(Fixture, "analyze: blank map exits 3, bad input exits 2") {
  const Run r = run({"analyze", blank, "--json", "-"});
  CHECK(r.code == 3);
  CHECK(nlohmann::json::parse(r.out)["flags"][0] == "NO_STRUCTURE");
  CHECK(run({"analyze", (dir / "missing.pgm").string()}).code == 2);
  testutil::write_file(dir / "junk.pgm", "P5\n");
  CHECK(run({"analyze", (dir / "junk.pgm").string()}).code == 2);
  CHECK(run({"analyze"}).code == 2);
  CHECK(run({"analyze", room, "--angle-bins", "2"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE_FIXTURE(Fixture, "analyze honours angle bins and writes debug images") {
  const std::string spec = (dir / "spec.png").string();
  const std::string prof = (dir / "prof.pgm").string();
  const std::string polar = (dir / "polar.pgm").string();
  const Run r = run({"analyze", room, "--angle-bins", "360", "--json", "-", "--spectrum-out", spec,
                     "--profile-out", prof, "--polar-out", polar});
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["config"]["angle_bins"] == 360);
  CHECK(read_gray_image(spec).width() == 64);
  CHECK(read_gray_image(prof).width() == 360);
  CHECK(read_gray_image(polar).height() == 360);
}

TEST_CASE_FIXTURE(Fixture, "declutter output is a subset and counts are conserved") {
  const std::string out = (dir / "out.pgm").string();
  const std::string score = (dir / "score.png").string();
  const Run r = run({"declutter", cluttered, "-o", out, "--score-out", score, "--json", "-"});
  CHECK(r.code == 0);
  const BinaryMap in = binarize(load_map(cluttered));
  const BinaryMap o = binarize(load_map(out));
  for (std::size_t i = 0; i < in.size(); ++i) {
    if (o[i]) CHECK(in[i] == 1);
  }
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["pixels"]["kept"].get<std::size_t>() + j["pixels"]["removed"].get<std::size_t>() ==
        count_occupied(in));
  CHECK(j["pixels"]["kept"].get<std::size_t>() == count_occupied(o));
  CHECK(j["gmm"]["s"].is_number());
  CHECK(read_gray_image(score).width() == in.width());
}

TEST_CASE_FIXTURE(Fixture, "declutter with threshold 0 drops only minimum-score cells") {
  const std::string out = (dir / "out0.pgm").string();
  const Run r = run({"declutter", cluttered, "-o", out, "--threshold", "0", "--json", "-"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["flags"][0] == "THRESHOLD_OVERRIDE");
  CHECK(j["config"]["threshold_override"] == 0.0);
  CHECK(j["pixels"]["removed"].get<int>() >= 1);
  CHECK(j["pixels"]["removed"].get<int>() < 5);
}

TEST_CASE_FIXTURE(Fixture, "declutter of a map without structure copies it and exits 3") {
  const std::string out = (dir / "blank_out.pgm").string();
  CHECK(run({"declutter", blank, "-o", out}).code == 3);
  CHECK(testutil::read_file(out) == testutil::read_file(blank));
}

TEST_CASE_FIXTURE(Fixture, "walls: filtered beats unfiltered, self ground truth costs nothing") {
  const Run f = run({"walls", cluttered, "--gt", gt, "--json", "-"});
  const Run u = run({"walls", cluttered, "--gt", gt, "--no-filter", "--json", "-"});
  REQUIRE(f.code == 0);
  REQUIRE(u.code == 0);
  const auto jf = nlohmann::json::parse(f.out);
  const auto ju = nlohmann::json::parse(u.out);
  CHECK(jf["walls"]["filtered"] == true);
  CHECK(ju["walls"]["filtered"] == false);
  CHECK(jf["walls"]["eval"]["mean_cost"].get<double>() <=
        ju["walls"]["eval"]["mean_cost"].get<double>());

  std::vector<double> walls;
  for (const auto& d : jf["directions"]) walls.push_back(d["wall_angle_deg"]);
  for (const auto& l : jf["walls"]["lines"]) {
    bool near = false;
    for (double a : walls) near = near || axial_difference_deg(l["angle_deg"], a) <= 5.0;
    CHECK(near);
  }

  const std::string self = (dir / "self.json").string();
  testutil::write_file(self, nlohmann::json{{"lines", ju["walls"]["lines"]}}.dump());
  const Run s = run({"walls", cluttered, "--gt", self, "--no-filter", "--json", "-"});
  CHECK(nlohmann::json::parse(s.out)["walls"]["eval"]["mean_cost"] == 0.0);

  const std::string empty = (dir / "empty.json").string();
  testutil::write_file(empty, "[]");
  CHECK(run({"walls", cluttered, "--gt", empty}).code == 2);
}

TEST_CASE_FIXTURE(Fixture, "inject writes labelled clutter") {
  const std::string out = (dir / "inj.pgm").string();
  const std::string labels = (dir / "labels.pgm").string();
  const Run r = run({"inject", room, "-o", out, "--count", "5", "--size", "3", "--seed", "9",
                     "--labels-out", labels, "--json", "-"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["cells"]["clutter"].get<int>() > 0);
  CHECK(count_occupied(binarize(load_map(out))) ==
        j["cells"]["clutter"].get<std::size_t>() + j["cells"]["structure"].get<std::size_t>());
  CHECK(read_gray_image(labels).width() == 64);
  CHECK(run({"inject", room, "-o", out, "--shape", "hexagon"}).code == 2);
}

TEST_CASE_FIXTURE(Fixture, "sweep, resume and correlate") {
  const std::string csv = (dir / "rows.csv").string();
  const std::vector<std::string> args{"sweep", "--maps", "office", "--map-size", "96", "--shapes",
                                      "square", "--sizes", "4", "--counts", "10", "20",
                                      "--seeds", "1", "2", "--csv", csv};
  CHECK(run(args).code == 0);
  const std::string first = testutil::read_file(csv);
  CHECK(parse_csv(first).size() == 4);
  auto with_resume = args;
  with_resume.push_back("--resume");
  CHECK(run(with_resume).code == 0);
  CHECK(testutil::read_file(csv) == first);

  const Run c = run({"correlate", csv, "--json", "-"});
  CHECK(c.code == 0);
  CHECK(nlohmann::json::parse(c.out)["n"].get<int>() >= 3);

  const Run one = run({"sweep", "--maps", "office", "--map-size", "64", "--shapes", "random",
                       "--sizes", "3", "--counts", "4", "--seeds", "7"});
  CHECK(one.code == 0);
  CHECK(parse_csv(one.out).size() == 1);
  CHECK(run({"sweep", "--maps", "atlantis"}).code == 2);
}

TEST_CASE_FIXTURE(Fixture, "config file sections with flag precedence") {
  const std::string cfg = (dir / "run.toml").string();
  testutil::write_file(cfg, "[analyze]\nangle-bins = 360\njson = \"-\"\n");
  const Run a = run({"analyze", room, "--config", cfg});
  CHECK(a.code == 0);
  CHECK(nlohmann::json::parse(a.out)["config"]["angle_bins"] == 360);
  const Run b = run({"analyze", room, "--config", cfg, "--angle-bins", "180"});
  CHECK(nlohmann::json::parse(b.out)["config"]["angle_bins"] == 180);

  const std::string bad = (dir / "bad.toml").string();
  testutil::write_file(bad, "[analyze]\nno-such-key = 1\n");
  CHECK(run({"analyze", room, "--config", bad}).code == 2);
  CHECK(run({"sweep", "--config", (dir / "none.toml").string()}).code == 2);
}
