#include <doctest.h>

#include <cmath>
#include <numbers>

#include "heatfield/quadrature.hpp"

using namespace heatfield;

TEST_CASE("tanh-sinh: algebraic endpoint singularities") {
  QuadratureSpec q;
  // int_0^1 x^{-0.6} dx = 2.5
  auto r = tanh_sinh([](double, double dl, double) { return std::pow(dl, -0.6); }, 0.0, 1.0, q);
  CHECK(r.value == doctest::Approx(2.5).epsilon(1e-11));
  // int_0^1 (1-x)^{-0.9} dx = 10
  r = tanh_sinh([](double, double, double dr) { return std::pow(dr, -0.9); }, 0.0, 1.0, q);
  CHECK(r.value == doctest::Approx(10.0).epsilon(1e-10));
  CHECK(tanh_sinh([](double, double, double) { return 1.0; }, 1.0, 1.0, q).value == 0.0);
}

TEST_CASE("tanh-sinh: smooth integrand") {
  auto r = tanh_sinh([](double x, double, double) { return std::exp(x); }, 0.0, 2.0, {});
  CHECK(r.value == doctest::Approx(std::expm1(2.0)).epsilon(1e-13));
  CHECK(r.l1 >= std::abs(r.value) * (1 - 1e-12));
}

TEST_CASE("tanh-sinh: non-convergence carries the trace") {
  QuadratureSpec q;
  q.rel_tol = 1e-15;
  q.max_refinements = 2;
  try {
    tanh_sinh([](double x, double, double) { return std::sin(200.0 * x); }, 0.0, 1.0, q);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(e.trace().size() == 3);
  }
}

TEST_CASE("half-line") {
  auto r = tanh_sinh_half_line([](double x, double) { return std::exp(-x); }, 1.0, 1.0, {});
  CHECK(r.value == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  r = tanh_sinh_half_line([](double x, double) { return 1.0 / (x * x * std::sqrt(x)); }, 1.0, 1.0, {});
  CHECK(r.value == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
}

TEST_CASE("Gauss-Legendre exactness") {
  for (int n : {4, 8, 16}) {
    const double v = gauss_legendre([](double x) { return std::pow(x, 7) + x * x; }, -1.0, 2.0, n);
    CHECK(v == doctest::Approx((std::pow(2.0, 8) - 1.0) / 8.0 + 3.0).epsilon(1e-13));
    double sw = 0.0;
    for (double w : GaussLegendre::get(n).w) sw += w;
    CHECK(sw == doctest::Approx(2.0).epsilon(1e-14));
  }
}

TEST_CASE("Wynn epsilon accelerates the alternating harmonic series") {
  std::vector<double> s;
  double acc = 0.0;
  for (int k = 1; k <= 14; ++k) {
    acc += (k % 2 ? 1.0 : -1.0) / k;
    s.push_back(acc);
  }
  const auto a = wynn_epsilon(s);
  CHECK(std::abs(a.value - std::log(2.0)) < 1e-9);
  CHECK(std::abs(s.back() - std::log(2.0)) > 1e-2);
}

TEST_CASE("oscillatory tail: Dirichlet integral") {
  const double pi = std::numbers::pi;
  auto f = [](double x) { return std::sin(x) / x; };
  const double head = tanh_sinh([&](double x, double, double) { return x == 0.0 ? 1.0 : f(x); },
                                0.0, pi, {})
                          .value;
  const auto tail = oscillatory_tail(f, [&](int k) { return (k + 1) * pi; }, {});
  CHECK(head + tail.value == doctest::Approx(pi / 2).epsilon(1e-9));
}

TEST_CASE("quadrature spec validation") {
  QuadratureSpec q;
  CHECK_NOTHROW(q.validate());
  q.rel_tol = 0.0;
  CHECK_THROWS_AS(q.validate(), ParameterDomainError);
  q = {};
  q.max_refinements = 0;
  CHECK_THROWS_AS(q.validate(), ParameterDomainError);
}
