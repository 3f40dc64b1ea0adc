#include <catch2/catch_amalgamated.hpp>

#include "mwl/jet.hpp"

#include "oracles.hpp"

using namespace mwl;
using Catch::Approx;

TEST_CASE("sin(u1) at 0: value 0, grad 1, hess 0", "[jet]") {
  Jet u = Jet::variable(0.0, 0, 1);
  Jet s = sin(u);
  CHECK(s.value == Approx(0.0).margin(0));
  CHECK(s.grad[0] == Approx(1.0));
  CHECK(s.hess(0, 0) == Approx(0.0).margin(1e-300));
}

TEST_CASE("u1*u1 at 3: value 9, grad 6, hess 2", "[jet]") {
  Jet u = Jet::variable(3.0, 0, 1);
  Jet s = u * u;
  CHECK(s.value == Approx(9.0));
  CHECK(s.grad[0] == Approx(6.0));
  CHECK(s.hess(0, 0) == Approx(2.0));
}

TEST_CASE("exp(u1+u2) at origin: all derivatives 1", "[jet]") {
  Jet u1 = Jet::variable(0.0, 0, 2);
  Jet u2 = Jet::variable(0.0, 1, 2);
  Jet s = exp(u1 + u2);
  CHECK(s.value == Approx(1.0));
  for (int a = 0; a < 2; ++a) {
    CHECK(s.grad[a] == Approx(1.0));
    for (int b = 0; b < 2; ++b) CHECK(s.hess(a, b) == Approx(1.0));
  }
}

TEST_CASE("domain violations raise EvalError", "[jet]") {
  Jet bad = Jet::variable(-1.0, 0, 1);
  CHECK_THROWS_AS(log(bad), EvalError);
  CHECK_THROWS_AS(sqrt(bad), EvalError);
  CHECK_THROWS_AS(Jet::constant(1.0, 1) / Jet::constant(0.0, 1), EvalError);
  CHECK_THROWS_AS(pow(bad, 0.5), EvalError);
}

TEST_CASE("integer powers accept negative bases", "[jet]") {
  Jet u = Jet::variable(-2.0, 0, 1);
  Jet s = pow(u, 3LL);
  CHECK(s.value == Approx(-8.0));
  CHECK(s.grad[0] == Approx(12.0));   // 3 u^2
  CHECK(s.hess(0, 0) == Approx(-12.0));  // 6 u
}

TEST_CASE("quotient and transcendental chain rules", "[jet]") {
  // d/dx atan(x) = 1/(1+x^2), second derivative -2x/(1+x^2)^2.
  Jet u = Jet::variable(0.5, 0, 1);
  Jet a = atan(u);
  const double d = 1.0 + 0.25;
  CHECK(a.grad[0] == Approx(1.0 / d));
  CHECK(a.hess(0, 0) == Approx(-1.0 / (d * d)));

  Jet q = sin(u) / cos(u);
  Jet t = tan(u);
  CHECK(q.value == Approx(t.value));
  CHECK(q.grad[0] == Approx(t.grad[0]));
  CHECK(q.hess(0, 0) == Approx(t.hess(0, 0)));
}

TEST_CASE("hessians stay exactly symmetric", "[jet]") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Vec at = oracle::random_point_in(Vec::Constant(3, -1.0),
                                     Vec::Constant(3, 1.0), rng);
    auto e = oracle::random_poly_expression(rng, at, 4);
    CHECK(max_hessian_asymmetry(e.j) == 0.0);
  }
}

TEST_CASE("jets match brute-force symbolic differentiation on polynomials",
          "[jet][oracle]") {
  std::mt19937_64 rng(42);
  int done = 0;
  while (done < 100) {
    const int nvars = 1 + static_cast<int>(rng() % 3);
    Vec at = oracle::random_point_in(Vec::Constant(nvars, -1.5),
                                     Vec::Constant(nvars, 1.5), rng);
    auto e = oracle::random_poly_expression(rng, at, 4);
    if (e.p.degree() < 1) continue;
    ++done;

    auto close = [](double a, double b) {
      return std::abs(a - b) <= 1e-12 * std::max(1.0, std::abs(b));
    };
    CHECK(close(e.j.value, e.p.eval(at)));
    for (int a = 0; a < nvars; ++a) {
      CHECK(close(e.j.grad[a], e.p.derivative(a).eval(at)));
      for (int b = 0; b < nvars; ++b)
        CHECK(close(e.j.hess(a, b), e.p.derivative(a).derivative(b).eval(at)));
    }
  }
}
