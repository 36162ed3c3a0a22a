#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

#include "goal/error.hpp"
#include "goal/io.hpp"
#include "goal/numerics.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using goal::Index;
using goal::Matrix;

namespace {

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const goal::Error& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("read_table: header, comments, blank lines") {
  const auto d = scratch::dir("io_header");
  scratch::write(d / "a.csv", "# comment\nx1,x2\n1,2\n\n3.5,-4e2\n");
  const goal::Table t = goal::read_table(d / "a.csv");
  CHECK(t.header == std::vector<std::string>{"x1", "x2"});
  REQUIRE(t.values.rows() == 2);
  CHECK(t.values(1, 0) == 3.5);
  CHECK(t.values(1, 1) == -400.0);
  CHECK(t.lines == std::vector<std::size_t>{3, 5});
}

TEST_CASE("read_table: delimiters") {
  const auto d = scratch::dir("io_delims");
  scratch::write(d / "semi.txt", "1;2;3\n4;5;6\n");
  scratch::write(d / "tab.txt", "1\t2\n3\t4\n");
  scratch::write(d / "space.txt", "1  2\n 3 4\n");
  CHECK(goal::read_table(d / "semi.txt").values.cols() == 3);
  CHECK(goal::read_table(d / "tab.txt").values(1, 1) == 4.0);
  CHECK(goal::read_table(d / "space.txt").values(1, 0) == 3.0);
}

TEST_CASE("read_table: errors carry coordinates") {
  const auto d = scratch::dir("io_errors");
  scratch::write(d / "bad.csv", "1,2\n3,abc\n");
  const std::string m1 = message_of([&] { goal::read_table(d / "bad.csv"); });
  CHECK(m1.find("line 2") != std::string::npos);
  CHECK(m1.find("column 2") != std::string::npos);

  scratch::write(d / "ragged.csv", "1,2\n3\n");
  const std::string m2 = message_of([&] { goal::read_table(d / "ragged.csv"); });
  CHECK(m2.find("line 2") != std::string::npos);

  CHECK_THROWS_AS(goal::read_table(d / "missing.csv"), goal::InvalidInput);
  scratch::write(d / "empty.csv", "a,b\n");
  CHECK_THROWS_AS(goal::read_table(d / "empty.csv"), goal::InvalidInput);
}

TEST_CASE("load_dataset: shapes and binary labels") {
  const auto d = scratch::dir("io_load");
  scratch::write(d / "f.csv", "a,b\n1,2\n3,4\n5,6\n");
  scratch::write(d / "l.csv", "label\n1\n0\n1\n");
  const goal::DataSet data = goal::load_dataset(d / "f.csv", d / "l.csv");
  CHECK(data.dims() == 2);
  CHECK(data.instances() == 3);
  Matrix pi(2, 3);
  pi << 1, 0, 1, 0, 1, 0;
  CHECK(data.pi() == pi);
  CHECK(data.x()(1, 2) == 6.0);

  scratch::write(d / "ft.csv", "1,3,5\n2,4,6\n");
  scratch::write(d / "lt.csv", "1,0,1\n");
  const goal::DataSet by_feature = goal::load_dataset(
      d / "ft.csv", d / "lt.csv", goal::Orientation::kFeatures);
  CHECK(by_feature.x() == data.x());
  CHECK(by_feature.pi() == data.pi());
}

TEST_CASE("load_dataset: probability labels") {
  const auto d = scratch::dir("io_probs");
  scratch::write(d / "f.csv", "1\n2\n");
  scratch::write(d / "l.csv", "0.2,0.3,0.5\n0.6,0.3,0.1\n");
  const goal::DataSet data = goal::load_dataset(d / "f.csv", d / "l.csv");
  CHECK(data.classes() == 3);
  CHECK(data.pi()(2, 0) == doctest::Approx(0.5));

  scratch::write(d / "bad.csv", "0.2,0.3,0.5\n0.5,0.3,0.1\n");
  const std::string m = message_of(
      [&] { goal::load_dataset(d / "f.csv", d / "bad.csv"); });
  CHECK(m.find("line 2") != std::string::npos);
  CHECK(m.find("0.9") != std::string::npos);

  scratch::write(d / "neg.csv", "1.2,-0.2\n0.5,0.5\n");
  CHECK_THROWS_AS(goal::load_dataset(d / "f.csv", d / "neg.csv"), goal::InvalidInput);
}

TEST_CASE("load_dataset: mismatches and bad binary labels") {
  const auto d = scratch::dir("io_mismatch");
  scratch::write(d / "f.csv", "1,2\n3,4\n");
  scratch::write(d / "l.csv", "1\n0\n1\n");
  CHECK_THROWS_AS(goal::load_dataset(d / "f.csv", d / "l.csv"), goal::InvalidInput);
  scratch::write(d / "l2.csv", "1\n2\n");
  const std::string m = message_of([&] { goal::load_dataset(d / "f.csv", d / "l2.csv"); });
  CHECK(m.find("line 2") != std::string::npos);
  CHECK_THROWS_AS(goal::orientation_from_string("columns"), goal::ConfigError);
}

TEST_CASE("save_dataset round-trips") {
  const auto d = scratch::dir("io_save");
  std::mt19937_64 rng(1);
  const goal::DataSet data(oracle::gaussian(4, 9, rng),
                           oracle::random_binary_pi(9, rng));
  goal::save_dataset(data, d / "f.csv", d / "l.csv");
  const goal::DataSet back = goal::load_dataset(d / "f.csv", d / "l.csv");
  CHECK(back.x() == data.x());
  CHECK(back.pi() == data.pi());
  CHECK(scratch::read(d / "l.csv").rfind("label\n", 0) == 0);
}

TEST_CASE("format_number is shortest round-trip") {
  CHECK(goal::format_number(0.1) == "0.1");
  CHECK(goal::format_number(1.0) == "1");
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0.0, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const double v = n(rng) * std::pow(10.0, static_cast<double>(i % 40) - 20.0);
    CHECK(std::stod(goal::format_number(v)) == v);
  }
}

TEST_CASE("write_file_atomic leaves only the target") {
  const auto d = scratch::dir("io_atomic");
  goal::write_file_atomic(d / "sub" / "out.txt", "hello");
  goal::write_file_atomic(d / "sub" / "out.txt", "again");
  CHECK(scratch::read(d / "sub" / "out.txt") == "again");
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(d / "sub")) {
    (void)e;
    ++files;
  }
  CHECK(files == 1);
}

TEST_CASE("model file round-trip is exact") {
  std::mt19937_64 rng(8);
  goal::ModelFile f;
  f.model.r = goal::random_orthonormal(5, 2, 3);
  f.model.s = oracle::gaussian(2, 4, rng);
  f.model.lambda = Matrix::Constant(3, 4, 1.0 / 3.0);
  f.model.lambda.col(1) << 0.1, 0.2, 0.7;
  f.model.eps_cl = 0.37;
  f.model.lambda_floor = 1e-10;
  f.metadata = {11, 17, -3.25, true};
  const goal::ModelFile back = goal::parse_model(goal::serialize_model(f));
  CHECK(back.model.r == f.model.r);
  CHECK(back.model.s == f.model.s);
  CHECK(back.model.lambda == f.model.lambda);
  CHECK(back.model.eps_cl == f.model.eps_cl);
  CHECK(back.model.lambda_floor == f.model.lambda_floor);
  CHECK(back.metadata.seed == 11);
  CHECK(back.metadata.iterations == 17);
  CHECK(back.metadata.final_objective == -3.25);
  CHECK(back.metadata.converged);
  CHECK(goal::serialize_model(back) == goal::serialize_model(f));
}

TEST_CASE("model file rejects unknown versions and bad shapes") {
  goal::ModelFile f;
  f.model.r = Matrix::Identity(2, 1);
  f.model.s = Matrix::Zero(1, 1);
  f.model.lambda = Matrix::Constant(2, 1, 0.5);
  std::string text = goal::serialize_model(f);
  const auto pos = text.find("\"format_version\": 1");
  REQUIRE(pos != std::string::npos);
  std::string future = text;
  future.replace(pos, 19, "\"format_version\": 2");
  CHECK_THROWS_AS(goal::parse_model(future), goal::InvalidInput);
  CHECK_THROWS_AS(goal::parse_model("{"), goal::InvalidInput);
  CHECK_THROWS_AS(goal::parse_model("{\"format\": \"goal-model\"}"), goal::InvalidInput);
}

TEST_CASE("fit, save, load, predict matches fit, predict") {
  const auto d = scratch::dir("io_model");
  std::mt19937_64 rng(4);
  Matrix x = oracle::gaussian(4, 60, rng);
  for (Index t = 0; t < 30; ++t) x(0, t) += 3.0;
  const goal::DataSet data(x, oracle::random_binary_pi(60, rng));
  goal::FitConfig c;
  c.clusters = 4;
  c.gauge = 2;
  const auto fit = goal::fit(data, c);
  goal::save_model(d / "m.json", {fit.model, {}});
  const goal::ModelFile loaded = goal::load_model(d / "m.json");
  const Matrix fresh = oracle::gaussian(4, 100, rng);
  CHECK(goal::predict_proba(loaded.model, fresh) ==
        goal::predict_proba(fit.model, fresh));
}
