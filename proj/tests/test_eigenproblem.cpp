#include <doctest.h>

#include <array>
#include <cmath>
#include <cstring>

#include "varode/eigenproblem.hpp"

using namespace varode;

namespace {

using Column = std::array<double, 5>;

void check_close(const std::vector<double>& got, const Column& want, double rel) {
  REQUIRE(got.size() >= want.size());
  for (std::size_t k = 0; k < want.size(); ++k) {
    CAPTURE(k);
    CHECK(std::abs(got[k] - want[k]) <= rel * want[k]);
  }
}

std::vector<double> column(const std::vector<EigenResult>& rows, double EigenResult::*field) {
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r.*field);
  return out;
}

}  // namespace

TEST_CASE("boundary names") {
  for (auto b : {BoundarySpec::Dirichlet, BoundarySpec::Symmetric, BoundarySpec::Mixed})
    CHECK(boundary_from_string(to_string(b)) == b);
  CHECK_THROWS(boundary_from_string("periodic"));
}

TEST_CASE("root finding") {
  const auto r = find_roots([](double l) { return l - 2.0; }, 0.0, 5.0);
  REQUIRE(r.size() == 1);
  CHECK(std::abs(r[0] - 2.0) < 1e-6);
  CHECK(find_roots([](double l) { return l * l + 1.0; }, 0.0, 5.0).empty());

  // two roots 0.1 apart inside one scan cell are missed; a finer scan sees them
  const auto two = [](double l) { return (l - 2.2) * (l - 2.3); };
  CHECK(find_roots(two, 0.0, 5.0, 0.5).empty());
  CHECK(find_roots(two, 0.0, 5.0, 0.05).size() == 2);

  const auto many = find_roots([](double l) { return std::sin(l); }, 1.0, 20.0);
  REQUIRE(many.size() == 6);
  for (std::size_t k = 0; k < many.size(); ++k) CHECK(std::abs(many[k] - M_PI * double(k + 1)) < 1e-6);
}

TEST_CASE("characteristic functions at their limits") {
  CHECK(std::abs(characteristic_mixed(1e-12) - 1.0) < 1e-5);
  CHECK(std::abs(characteristic_symmetric(1e-12)) < 1e-5);
  CHECK(characteristic_dirichlet(1.0) > 0.0);
}

TEST_CASE("WKB eigenvalues") {
  CHECK(wkb_eigen(1) == 16.0);
  CHECK(wkb_eigen(2) == 64.0);
  CHECK(wkb_eigen(5) == 400.0);
}

TEST_CASE("Dirichlet table") {
  const auto rows = eigen_table(BoundarySpec::Dirichlet);
  REQUIRE(rows.size() == 5);
  check_close(column(rows, &EigenResult::lambda_exact), {13.486, 58.811, 136.140, 245.470, 386.802}, 5e-4);
  check_close(column(rows, &EigenResult::lambda_approx), {13.767, 59.174, 136.557, 245.930, 387.296}, 5e-4);

  const Column tabulated_error = {2.0, 0.6, 0.3, 0.2, 0.1};
  const Column tabulated_wkb_error = {19.0, 9.0, 6.0, 4.0, 3.0};
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CAPTURE(k);
    const double pct = 100.0 * rows[k].rel_error;
    CHECK(pct > 0.5 * tabulated_error[k]);
    CHECK(pct < 1.5 * tabulated_error[k]);
    if (k > 0) CHECK(rows[k].rel_error < rows[k - 1].rel_error);
    REQUIRE(rows[k].lambda_wkb.has_value());
    CHECK(*rows[k].lambda_wkb == 16.0 * double((k + 1) * (k + 1)));
    CHECK(std::abs(100.0 * *rows[k].wkb_rel_error - tabulated_wkb_error[k]) <= 1.0);
  }
}

TEST_CASE("symmetric table") {
  const auto rows = eigen_table(BoundarySpec::Symmetric);
  check_close(column(rows, &EigenResult::lambda_exact), {43.185, 77.736, 208.573, 286.144, 500.880}, 5e-4);
  check_close(column(rows, &EigenResult::lambda_approx), {46.138, 74.721, 213.915, 281.010, 508.297}, 5e-4);
  for (const auto& r : rows) CHECK_FALSE(r.lambda_wkb.has_value());
  CHECK(std::abs(100.0 * rows[4].rel_error - 1.5) < 0.1);
}

TEST_CASE("mixed table") {
  const auto rows = eigen_table(BoundarySpec::Mixed);
  check_close(column(rows, &EigenResult::lambda_exact), {5.122, 39.661, 106.249, 204.856, 335.473}, 5e-4);
  check_close(column(rows, &EigenResult::lambda_approx), {4.721, 39.836, 106.063, 204.952, 335.352}, 5e-4);
  CHECK(std::abs(100.0 * rows[3].rel_error - 0.05) < 0.01);
}

TEST_CASE("approximate and exact spectra have the same size") {
  const auto exact = shoot_exact(BoundarySpec::Dirichlet, 1.0, 450.0);
  const auto approx = find_roots([](double l) { return characteristic_dirichlet(l); }, 1.0, 450.0);
  CHECK(exact.size() == 5);
  CHECK(approx.size() == 5);
}

TEST_CASE("root finding is deterministic") {
  const auto a = shoot_exact(BoundarySpec::Mixed, 1.0, 60.0);
  const auto b = shoot_exact(BoundarySpec::Mixed, 1.0, 60.0);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("shooting residual vanishes at the eigenvalues") {
  for (auto spec : {BoundarySpec::Dirichlet, BoundarySpec::Symmetric, BoundarySpec::Mixed}) {
    const auto roots = shoot_exact(spec, 1.0, 120.0);
    REQUIRE_FALSE(roots.empty());
    for (double l : roots) {
      const double scale = std::abs(shooting_residual(spec, l + 0.5)) + std::abs(shooting_residual(spec, l - 0.5));
      CHECK(std::abs(shooting_residual(spec, l)) < 1e-4 * scale);
    }
  }
}
