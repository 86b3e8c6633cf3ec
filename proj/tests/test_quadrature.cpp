#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "wwlab/quadrature.hpp"

using namespace ww;

TEST_CASE("gauss-legendre exactness")
{
  for (int n : {1, 2, 4, 7, 24}) {
    const auto g = gauss_legendre<double>(n);
    CHECK(g.weights.sum() == doctest::Approx(2.0).epsilon(1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      const double exact = k % 2 ? 0.0 : 2.0 / (k + 1);
      CHECK((g.weights * g.nodes.pow(k)).sum() == doctest::Approx(exact).epsilon(1e-13).scale(1.0));
    }
    for (int i = 1; i < n; ++i) CHECK(g.nodes(i) > g.nodes(i - 1));
  }
}

TEST_CASE("gauss-legendre in long double")
{
  const auto g = gauss_legendre<long double>(10);
  long double s = 0;
  for (int i = 0; i < 10; ++i) s += g.weights(i) * std::pow(g.nodes(i), 18);
  CHECK(double(s - 2.0L / 19.0L) == doctest::Approx(0.0).epsilon(1e-17));
}

TEST_CASE("kronrod and adaptive")
{
  auto r = gauss_kronrod15([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(r.evaluations == 15);

  auto a = integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0, 0.0, 1e-12);
  CHECK(a.value == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

  auto c = integrate([](double x) { return std::polar(1.0, 40.0 * x); }, 0.0, 3.0, 0.0, 1e-12);
  const std::complex<double> exact = (std::polar(1.0, 120.0) - 1.0) / std::complex<double>(0.0, 40.0);
  CHECK(std::abs(c.value - exact) < 1e-13);

  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / x; }, 0.0, 1.0, 0.0, 1e-12, 50), Error);
}

TEST_CASE("wynn epsilon accelerates an alternating series")
{
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 0; k < 20; ++k) {
    s += (k % 2 ? -1.0 : 1.0) / (k + 1);
    partial.push_back(s);
  }
  CHECK(std::abs(partial.back() - std::log(2.0)) > 1e-2);
  CHECK(wynn_epsilon(partial) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}
