#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <string>

#include "blab/error.hpp"
#include "blab/io.hpp"
#include "support.hpp"

using namespace blab;
using namespace blab::io;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("blab_io_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string parse_error_text(std::string_view text) {
  try {
    (void)parse_zero_set(text, "zeros.txt");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("zero-set text formats") {
  const ZeroSequence z = parse_zero_set("# header\n0.5 0\n\n  -0.25 +0.125\n0.75@1.5\n");
  REQUIRE(z.size() == 3);
  CHECK(z[0].value == Complex(0.5, 0.0));
  CHECK(z[1].value == Complex(-0.25, 0.125));
  CHECK(z[2].deficit == 0.25);
  CHECK(z[2].angle == 1.5);
  CHECK(std::abs(z[2].value - std::polar(0.75, 1.5)) < 1e-15);
  CHECK(parse_zero_set("").size() == 0);
  CHECK(parse_zero_set("0.1 0.2\r\n0.3 0.4\r\n").size() == 2);
}

TEST_CASE("zero-set errors name the line") {
  CHECK(parse_error_text("0.5 0\nfoo bar\n").find("zeros.txt:2") != std::string::npos);
  CHECK(parse_error_text("0.5\n").find("zeros.txt:1") != std::string::npos);
  CHECK(parse_error_text("0.5 0 0.1\n").find("zeros.txt:1") != std::string::npos);
  CHECK(parse_error_text("# c\n\n0.1@\n").find("zeros.txt:3") != std::string::npos);
  CHECK(parse_error_text("0.5 0\n1 0\n").find("zeros.txt:2") != std::string::npos);
  CHECK(parse_error_text("0 0\n").find("zeros.txt:1") != std::string::npos);
  CHECK_THROWS_AS(parse_zero_set("0.6 0.8\n"), ParseError);
  CHECK_THROWS_AS(parse_zero_set("1@0\n"), ParseError);
  CHECK_THROWS_AS(parse_zero_set("nan 0\n"), Error);
}

TEST_CASE("zero sets round-trip bit for bit") {
  const ZeroSequence z = blab::testing::random_zeros(17, 200, 0.0, 0.999);
  std::vector<Complex> points;
  for (const Zero& zero : z) points.push_back(zero.value);
  const ZeroSequence back = parse_zero_set(format_zero_set(points));
  REQUIRE(back.size() == points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(back[i].value.real() == points[i].real());
    CHECK(back[i].value.imag() == points[i].imag());
  }
  const fs::path dir = scratch_dir("zeros");
  write_atomic(dir / "z.txt", format_zero_set(points));
  CHECK(read_zero_set(dir / "z.txt").size() == points.size());
  CHECK_THROWS_AS(read_zero_set(dir / "missing.txt"), Error);
  fs::remove_all(dir);
}

TEST_CASE("boundary sets from JSON") {
  const Json j = Json::parse(R"({"arcs": [[0.0, 0.5]], "points": [2.0, 3.0],
                                 "cantor": {"base": [4.0, 5.0], "ratio": 0.25, "depth": 3}})");
  const regions::BoundarySet e = boundary_from_json(j);
  CHECK(e.arcs().size() == 1);
  CHECK(e.points().size() == 2);
  REQUIRE(e.cantor().has_value());
  CHECK(e.cantor()->depth == 3);
  CHECK(e.components().size() == 1 + 2 + 8);

  const regions::BoundarySet again = boundary_from_json(to_json(e));
  CHECK(to_json(again) == to_json(e));
  CHECK(again.neighborhood_measure(0.01) == e.neighborhood_measure(0.01));

  CHECK_THROWS_AS(boundary_from_json(Json::parse(R"({"arcz": []})")), ParseError);
  CHECK_THROWS_AS(boundary_from_json(Json::parse(R"({"arcs": [[1.0]]})")), ParseError);
  CHECK_THROWS_AS(boundary_from_json(Json::parse(R"({"cantor": {"base": [0, 1], "ratio": 0.7, "depth": 2}})")), ParseError);
  CHECK_THROWS_AS(boundary_from_json(Json::parse(R"({})")), ParseError);
  CHECK_THROWS_AS(boundary_from_json(Json::parse(R"([1, 2])")), ParseError);
}

TEST_CASE("report serialisation and CSV layouts") {
  bounds::BoundReport r;
  r.record(0.5, {3, Complex(0.1, 0.2), Complex(0.3, 0.4), Complex(0.5, 0.6)}, false, 5);
  r.record(0.7, {4, Complex(0.2, 0.2), Complex(0.3, 0.3), Complex(0.4, 0.4)}, false, 5);
  const Json j = to_json(r);
  CHECK(j["samples"] == 2);
  CHECK(j["violations"] == 0);
  CHECK(j["worst_ratio"] == 0.7);
  CHECK(j["worst_witness"]["index"] == 4);
  CHECK(j["worst"].size() == 2);

  const std::string csv = worst_csv(r);
  CHECK(csv.rfind("rank,index,ratio,z_re,z_im,t_re,t_im,lambda_re,lambda_im\n", 0) == 0);
  CHECK(csv.find("\n1,4,0.7,") != std::string::npos);

  const critical::SumSeries s = critical::SumSeries::from_terms({0.5, 0.25});
  CHECK(series_csv(s) == "index,term,partial_sum\n1,0.5,0.5\n2,0.25,0.75\n");
  CHECK(to_json(s)["total"] == 0.75);

  means::MeansTable t;
  t.rows = {{10, 0.5, 0.9, 1.25}};
  CHECK(means_csv(t) == "N,p,r,value\n10,0.5,0.9,1.25\n");
  CHECK(to_json(t)[0]["N"] == 10);

  CHECK(format_double(0.1) == "0.1");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("atomic writes replace the target") {
  const fs::path dir = scratch_dir("atomic");
  write_atomic(dir / "a.txt", "first");
  write_atomic(dir / "a.txt", "second");
  CHECK(read_text(dir / "a.txt") == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  CHECK_THROWS(write_atomic(dir / "no" / "such" / "dir.txt", "x"));
  fs::remove_all(dir);
}
