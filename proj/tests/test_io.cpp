#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "varode/error.hpp"
#include "varode/io.hpp"

using namespace varode;
using nlohmann::json;

TEST_CASE("number formatting round-trips") {
  testing::Rng rng(71);
  for (int k = 0; k < 1000; ++k) {
    const double v = rng.uniform(-1.0, 1.0) * std::pow(10.0, rng.integer(-300, 300));
    CHECK(std::strtod(format_number(v).c_str(), nullptr) == v);
  }
  CHECK(format_number(std::nan("")) == "");
  CHECK(format_number(0.0) == "0");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(1.5) == "1.5");
}

TEST_CASE("csv layout") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{1.0, std::nan("")}, {-2.0, 0.25}};
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "a,b\n1,\n-2,0.25\n");
  CHECK_THROWS_AS(write_csv("/nonexistent-dir/x.csv", t), ConfigError);
}

TEST_CASE("trajectory table") {
  const MatrixFunction rot = [](double) {
    CMatrix m(2, 2);
    m << 0.0, 1.0, -1.0, 0.0;
    return m;
  };
  CVector y0(2);
  y0 << 1.0, cplx(0.0, 2.0);
  const auto tr = integrate(rot, Orientation::Column, y0, 1.0);
  const auto t = trajectory_table(tr);
  CHECK(t.header == std::vector<std::string>{"t", "y0_re", "y0_im", "y1_re", "y1_im"});
  REQUIRE(t.rows.size() == tr.times().size());
  CHECK(t.rows.front() == std::vector<double>{0.0, 1.0, 0.0, 0.0, 2.0});
  CHECK(t.rows.back()[0] == 1.0);
}

TEST_CASE("complex numbers and vectors") {
  CHECK(complex_from_json(json(2.5), "x") == cplx(2.5, 0.0));
  CHECK(complex_from_json(json::array({1.0, -3.0}), "x") == cplx(1.0, -3.0));
  CHECK_THROWS_AS(complex_from_json(json("1+2i"), "x"), ConfigError);
  CHECK_THROWS_AS(complex_from_json(json::array({1.0, 2.0, 3.0}), "x"), ConfigError);
  const CVector v = vector_from_json(json::parse("[1, [0, 1]]"), "psi0");
  CHECK(v(1) == cplx(0.0, 1.0));
  CHECK_THROWS_AS(vector_from_json(json::array(), "psi0"), ConfigError);
  try {
    vector_from_json(json::parse("[1, \"a\"]"), "psi0");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("psi0[1]") != std::string::npos);
  }
}

TEST_CASE("unknown keys are named") {
  const json j = json::parse(R"({"kind": "eigen", "boundry": "mixed"})");
  try {
    reject_unknown_keys(j, {"kind", "boundary"}, "config");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("config.boundry") != std::string::npos);
  }
  CHECK_NOTHROW(reject_unknown_keys(j, {"kind", "boundry"}, ""));
}

TEST_CASE("polynomial matrices round-trip through JSON") {
  testing::Rng rng(72);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = rng.integer(1, 4);
    const int deg = rng.integer(0, 5);
    std::vector<CMatrix> c;
    for (int k = 0; k <= deg; ++k) c.push_back(rng.matrix(n, 2.0));
    const PolyMatrixc m(c, trial % 2 ? Orientation::Row : Orientation::Column);
    const PolyMatrixc back = polymatrix_from_json(json::parse(polymatrix_to_json(m).dump()));
    CHECK(back == m);
    CHECK(back.orientation() == m.orientation());
  }
}

TEST_CASE("polynomial matrix JSON") {
  const auto m = polymatrix_from_json(json::parse(R"({"n": 2, "orientation": "column",
      "entries": [[[0, 1], [1]], [[0, [0, 1]], []]]})"));
  CHECK(m.orientation() == Orientation::Column);
  CHECK(m.degree() == 1);
  CHECK(m.coefficient(1)(0, 0) == cplx(1.0));
  CHECK(m.coefficient(1)(1, 0) == cplx(0.0, 1.0));
  CHECK(m.coefficient(0)(0, 1) == cplx(1.0));
  CHECK(polymatrix_from_json(json::parse(R"({"n": 1, "entries": [[[2]]]})")).orientation() == Orientation::Row);

  for (const char* bad : {R"({"n": 2, "entries": [[[1], [1]]]})", R"({"n": 9, "entries": []})",
                          R"({"n": 1, "orientation": "diagonal", "entries": [[[1]]]})",
                          R"({"n": 1, "entries": [[1]]})", R"({"n": 1, "entries": [[[1]]], "extra": 0})",
                          R"({"n": 1, "entries": [[[0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,0,1]]]})"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(polymatrix_from_json(json::parse(bad)), ConfigError);
  }
}

TEST_CASE("reading JSON files") {
  CHECK_THROWS_AS(read_json_file("/nonexistent/config.json"), ConfigError);
  const std::string path = "test_io_bad.json";
  std::ofstream(path) << "{\"kind\": ";
  CHECK_THROWS_AS(read_json_file(path), ConfigError);
  std::ofstream(path) << "{\"kind\": \"eigen\"}";
  CHECK(read_json_file(path)["kind"] == "eigen");
  std::remove(path.c_str());
}
