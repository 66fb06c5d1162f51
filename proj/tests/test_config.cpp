#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "ergo/config.hpp"
#include "ergo/io.hpp"
#include "ergo/shapes.hpp"

using namespace ergo;

namespace {

std::string tmp_file(const std::string& name, const std::string& text) {
  const std::string path = std::string("/tmp/ergo_test_") + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("defaults parse from an empty document and validate") {
  const AppConfig cfg = parse_config_text("{}", {});
  CHECK(cfg.space.lengths == std::vector<double>{1.0, 1.0});
  CHECK(cfg.basis.modes_per_dim == 10);
  CHECK(cfg.footprint.model == "auto");
  CHECK(cfg.controller.horizon == 20);
  CHECK(cfg.task.suite == "erasing");
  CHECK(cfg.output.timing);
}

TEST_CASE("resolved config round-trips bitwise") {
  AppConfig cfg = parse_config_text("{}", {"controller.horizon=12", "task.n_trials=7"});
  const std::string once = resolved_config_json(cfg);
  const AppConfig back = parse_config_text(once, {});
  CHECK(resolved_config_json(back) == once);
}

TEST_CASE("unknown keys are rejected with their dotted path") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"controller": {"horizont": 3}})", {}),
                       doctest::Contains("controller.horizont"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"speling": 1})", {}),
                       doctest::Contains("speling"), std::invalid_argument);
}

TEST_CASE("dotted overrides reach nested fields and coerce types") {
  const AppConfig cfg = parse_config_text(
      "{}", {"controller.horizon=12", "footprint.tool.shape=bar", "space.lengths=[2.0,1.5]",
             "output.timing=false", "task.prior.components=5"});
  CHECK(cfg.controller.horizon == 12);
  CHECK(cfg.footprint.tool.shape == "bar");
  CHECK(cfg.space.lengths == std::vector<double>{2.0, 1.5});
  CHECK_FALSE(cfg.output.timing);
  CHECK(cfg.task.prior.components == 5);
}

TEST_CASE("override without an equals sign is rejected") {
  CHECK_THROWS_AS(parse_config_text("{}", {"controller.horizon"}), std::invalid_argument);
}

TEST_CASE("validation errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"controller": {"horizon": 1}})", {}),
                       doctest::Contains("controller.horizon"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"basis": {"modes_per_dim": 0}})", {}),
                       doctest::Contains("basis.modes_per_dim"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"footprint": {"model": "blob"}})", {}),
                       doctest::Contains("footprint.model"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"task": {"mask": {"r_out_frac": 0.1, "r_in_frac": 0.2}}})", {}),
      doctest::Contains("r_in_frac"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"space": {"lengths": [1, 1, 1]}})", {}),
                       doctest::Contains("space.lengths"), std::invalid_argument);
}

TEST_CASE("type errors name the key") {
  CHECK_THROWS_WITH_AS(parse_config_text(R"({"controller": {"horizon": "lots"}})", {}),
                       doctest::Contains("controller.horizon"), std::invalid_argument);
}

TEST_CASE("parse errors carry a line number") {
  const std::string bad = "{\n  \"basis\": {\n    \"modes_per_dim\": oops\n  }\n}";
  CHECK_THROWS_WITH_AS(parse_config_text(bad, {}), doctest::Contains("line 3"),
                       std::invalid_argument);
}

TEST_CASE("config reference lists every key exactly once") {
  const std::string ref = config_reference();
  const auto doc = nlohmann::ordered_json::parse(resolved_config_json(AppConfig{}));
  std::vector<std::pair<std::string, const nlohmann::ordered_json*>> stack{{"", &doc}};
  while (!stack.empty()) {
    auto [prefix, node] = stack.back();
    stack.pop_back();
    for (auto it = node->begin(); it != node->end(); ++it) {
      const std::string path = prefix.empty() ? it.key() : prefix + "." + it.key();
      if (it->is_object())
        stack.push_back({path, &*it});
      else
        CHECK_MESSAGE(ref.find(path) != std::string::npos, "missing from reference: ", path);
    }
  }
}

TEST_CASE("load_config reads a file and an empty path means defaults") {
  const std::string path = tmp_file("cfg.json", R"({"task": {"suite": "ground"}})");
  CHECK(load_config(path, {}).task.suite == "ground");
  CHECK(load_config("", {}).task.suite == "erasing");
  CHECK_THROWS(load_config("/nonexistent/cfg.json", {}));
  std::remove(path.c_str());
}

TEST_CASE("procedural tools land near the requested count and inside their shape") {
  const Eigen::MatrixXd disc = tool_disc(0.12, 1000);
  CHECK(disc.rows() > 700);
  CHECK(disc.rows() < 1300);
  const double r2 = 0.12 * 0.12 * (1.0 + 1e-9);
  for (Eigen::Index i = 0; i < disc.rows(); ++i)
    CHECK(disc.row(i).squaredNorm() <= r2 + 0.01 * 0.01);  // cell centers; small slack
  // grid sampling is recentered on the bounding box midpoint
  CHECK(std::abs(disc.col(0).minCoeff() + disc.col(0).maxCoeff()) < 1e-12);

  const Eigen::MatrixXd bar = tool_bar(0.2, 300);
  const double w = bar.col(0).maxCoeff() - bar.col(0).minCoeff();
  const double h = bar.col(1).maxCoeff() - bar.col(1).minCoeff();
  CHECK(w > h);
  CHECK(w / h == doctest::Approx(10.0 / 3.0).epsilon(0.25));

  const Eigen::MatrixXd ell = tool_lshape(0.2, 400);
  CHECK(ell.rows() > 200);
}

TEST_CASE("median nearest-neighbor spacing of a regular grid is the pitch") {
  Eigen::MatrixXd grid(25, 2);
  int k = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) grid.row(k++) << 0.03 * i, 0.03 * j;
  CHECK(median_nn_spacing(grid) == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("ring mask occupies the annulus and its centers lie inside it") {
  const SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  const Eigen::MatrixXd mask = mask_ring(space, 32, 0.32, 0.18);
  CHECK(mask.rows() == 32);
  CHECK(mask.cols() == 32);
  const double occupied = mask.sum();
  const double expect = M_PI * (0.32 * 0.32 - 0.18 * 0.18) * 32 * 32;  // area fraction * cells
  CHECK(occupied == doctest::Approx(expect).epsilon(0.15));

  const Eigen::MatrixXd centers = mask_cell_centers(space, mask);
  CHECK(centers.rows() == static_cast<Eigen::Index>(occupied));
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    const double r = (centers.row(i) - Eigen::RowVector2d(0.5, 0.5)).norm();
    CHECK(r < 0.32 + 0.03);
    CHECK(r > 0.18 - 0.03);
  }
}

TEST_CASE("PGM masks are flipped so image top maps to high y") {
  // 3 wide x 2 tall, bright only in the image's top row
  const std::string pgm = "P2\n3 2\n255\n255 255 255\n0 0 0\n";
  const std::string path = tmp_file("mask.pgm", pgm);
  const Eigen::MatrixXd mask = load_mask(path);
  const SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  const Eigen::MatrixXd centers = mask_cell_centers(space, mask);
  REQUIRE(centers.rows() == 3);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) CHECK(centers(i, 1) == doctest::Approx(0.75));
  std::remove(path.c_str());
}

TEST_CASE("CSV masks keep row 0 at y = 0 and reject negatives") {
  const std::string path = tmp_file("mask.csv", "c0,c1,c2\n1,1,1\n0,0,0\n");
  const Eigen::MatrixXd mask = load_mask(path);
  const SearchSpace space(Eigen::Vector2d(1.0, 1.0));
  const Eigen::MatrixXd centers = mask_cell_centers(space, mask);
  REQUIRE(centers.rows() == 3);
  for (Eigen::Index i = 0; i < centers.rows(); ++i) CHECK(centers(i, 1) == doctest::Approx(0.25));
  std::remove(path.c_str());

  const std::string bad = tmp_file("mask_bad.csv", "c0\n-1\n");
  CHECK_THROWS(load_mask(bad));
  std::remove(bad.c_str());
}

TEST_CASE("tool CSV files round-trip through the io helpers") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0.0, 0.0, 0.01, 0.0, 0.0, 0.02;
  const std::string path = "/tmp/ergo_test_tool.csv";
  io::write_csv_matrix(path, "x,y", pts);
  const Eigen::MatrixXd back = load_tool_csv(path);
  CHECK((back - pts).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
}
