#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "bsquad/bs_functions.hpp"
#include "bsquad/oracle.hpp"
#include "support/random_configs.hpp"

using namespace bsquad;
using C = std::complex<double>;
using doctest::Approx;
constexpr double pi = std::numbers::pi;

namespace {
BSFamily<double> fam(int ep, int em, std::vector<C> a) { return BSFamily<double>(ep, em, std::move(a)); }
}  // namespace

TEST_CASE("u_weight values") {
  CHECK(u_weight(0.0, 1.234) == Approx(1.0).epsilon(1e-15));
  CHECK(u_weight(0.5, 0.0) == Approx(1.0 / 3).epsilon(1e-15));
  CHECK(u_weight(0.5, pi) == Approx(3.0).epsilon(1e-14));
  // A conjugate pair sums to twice the real part.
  const C a(0.4, 0.3);
  const C s = u_weight(a, 0.7) + u_weight(std::conj(a), 0.7);
  CHECK(std::abs(s.imag()) < 1e-15);
  CHECK(s.real() == Approx(2 * u_weight(a, 0.7).real()).epsilon(1e-14));
}

TEST_CASE("u_weight stays within the kappa bounds for real alpha") {
  for (double a : {-0.9, -0.5, -0.1, 0.2, 0.7, 0.95})
    for (int k = 0; k <= 200; ++k) {
      const double x = -pi + 2 * pi * k / 200;
      const double u = u_weight(a, x);
      const double lo = (1 - std::abs(a)) / (1 + std::abs(a));
      CHECK(u >= lo * (1 - 1e-14));
      CHECK(u <= (1 / lo) * (1 + 1e-14));
    }
}

TEST_CASE("u_antiderivative") {
  CHECK(u_antiderivative(0.3, pi) == Approx(pi).epsilon(1e-15));
  CHECK(u_antiderivative(0.0, 0.8) == Approx(0.8).epsilon(1e-15));
  CHECK(u_antiderivative(0.5, pi / 2) == Approx(2 * std::atan(1.0 / 3)).epsilon(1e-15));
  CHECK(u_antiderivative(0.5, pi / 2) == Approx(0.6435011).epsilon(1e-7));
  CHECK(u_antiderivative(0.5, 0.0) == 0.0);

  // Against the half-angle arctan form and adaptive integration.
  for (double a : {-0.8, -0.3, 0.1, 0.6, 0.9})
    for (double xi : {0.1, 0.9, 1.7, 2.5, 3.1}) {
      const double closed = 2 * std::atan((1 - a) / (1 + a) * std::tan(xi / 2));
      CHECK(u_antiderivative(a, xi) == Approx(closed).epsilon(1e-13));
      const auto rep = oracle::reference_integral([a](double x) { return u_weight(a, x); }, 0.0, xi, 1e-15, 1e-14);
      CHECK(u_antiderivative(a, xi) == Approx(rep.value).epsilon(1e-12));
    }

  // Complex form agrees with the real one.
  CHECK(u_antiderivative(C(0.6), 2.0).real() == Approx(u_antiderivative(0.6, 2.0)).epsilon(1e-15));
}

TEST_CASE("u_antiderivative for conjugate pairs") {
  const C a(0.5, 0.4);
  for (double xi : {0.0, 0.4, 1.5, 2.9, pi}) {
    const C s = u_antiderivative(a, xi) + u_antiderivative(std::conj(a), xi);
    CHECK(std::abs(s.imag()) < 1e-14);
    const auto rep = oracle::reference_integral(
        [a](double x) { return (u_weight(a, x) + u_weight(std::conj(a), x)).real(); }, 0.0, std::max(xi, 1e-300),
        1e-15, 1e-14);
    CHECK(s.real() == Approx(xi == 0.0 ? 0.0 : rep.value).epsilon(1e-12));
  }
  CHECK((u_antiderivative(a, pi) + u_antiderivative(std::conj(a), pi)).real() == Approx(2 * pi).epsilon(1e-15));

  // Monotone for real alpha on [0, pi].
  double prev = -1;
  for (int k = 0; k <= 400; ++k) {
    const double v = u_antiderivative(-0.85, pi * k / 400);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("c_function") {
  CHECK(std::abs(c_function(fam(0, 0, {}), 0.4) - C(1)) < 1e-15);
  CHECK(std::abs(c_function(fam(1, 1, {}), pi / 2) - C(0.5)) < 1e-15);
  CHECK(std::abs(c_function(fam(0, 0, {0.5}), 0.0) - C(1.5)) < 1e-15);
  CHECK_THROWS_AS(c_function(fam(0, 1, {}), 0.0), DomainError);
  CHECK_THROWS_AS(c_function(fam(1, 0, {}), pi), DomainError);
  CHECK_NOTHROW(c_function(fam(1, 0, {}), 0.0));

  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const auto f = testing::random_family(rng, {});
    const double xi = std::uniform_real_distribution<double>(0.05, pi - 0.05)(rng);
    CHECK(std::abs(c_function(f, -xi) - std::conj(c_function(f, xi))) < 1e-13);
    CHECK(c_modulus(f, xi) == Approx(std::abs(c_function(f, xi))).epsilon(1e-13));
  }
}

TEST_CASE("phase reproduces the c ratio") {
  for (double xi : {0.1, 0.7, 1.5, 2.8})
    CHECK(phase(fam(0, 0, {}), xi).phi == Approx(0.0).epsilon(1e-15));

  for (double xi : {0.2, 1.1, 2.0, 3.0}) {
    const C ratio = (1.0 + 0.5 * std::polar(1.0, -xi)) / (1.0 + 0.5 * std::polar(1.0, xi));
    CHECK(std::abs(std::polar(1.0, 2 * phase(fam(0, 0, {0.5}), xi).phi) - ratio) < 1e-14);
  }

  const auto f = fam(1, 1, {0.3, 0.5});
  const C ratio = c_function(f, pi / 3) / c_function(f, -pi / 3);
  CHECK(std::abs(std::polar(1.0, 2 * phase(f, pi / 3).phi) - ratio) < 1e-13);

  // For fam(1,1,[]) the phase is xi - pi/2: c = e^{i xi} / (2i sin xi).
  CHECK(phase(fam(1, 1, {}), 0.9).phi == Approx(0.9 - pi / 2).epsilon(1e-15));

  std::mt19937_64 rng(8);
  for (int t = 0; t < 60; ++t) {
    const auto g = testing::random_family(rng, {});
    const double xi = std::uniform_real_distribution<double>(0.01, pi - 0.01)(rng);
    const C r = c_function(g, xi) / c_function(g, -xi);
    CHECK(std::abs(std::polar(1.0, 2 * phase(g, xi).phi) - r) < 1e-13);
  }
}

TEST_CASE("phase is continuous on the closed interval") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto g = testing::random_family(rng, {});
    double prev = phase(g, 0.0).phi;
    for (int k = 1; k <= 2000; ++k) {
      const double cur = phase(g, pi * k / 2000).phi;
      CHECK(std::abs(cur - prev) < 0.05);
      prev = cur;
    }
  }
}

TEST_CASE("weight_w and chebyshev_rho") {
  CHECK(weight_w(fam(0, 0, {}), 1.0) == Approx(1 / (2 * pi)).epsilon(1e-15));
  CHECK(weight_w(fam(1, 1, {}), pi / 2) == Approx(2 / pi).epsilon(1e-15));
  CHECK_THROWS_AS(weight_w(fam(0, 0, {0.5}), 0.0), DomainError);
  CHECK(weight_w(fam(0, 0, {0.5}), 1e-9) == Approx(1 / (2 * pi * 2.25)).epsilon(1e-12));

  CHECK(chebyshev_rho(0, 0, 0.4) == 1.0);
  CHECK(chebyshev_rho(1, 1, 0.4) == Approx(4 * std::sin(0.4) * std::sin(0.4)).epsilon(1e-15));
  CHECK(chebyshev_rho(1, 0, pi) == Approx(0.0));

  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    const auto g = testing::random_family(rng, {});
    const double xi = std::uniform_real_distribution<double>(0.01, pi - 0.01)(rng);
    C den(1);
    for (const auto& a : g.alpha()) den *= 1.0 + 2.0 * a * std::cos(xi) + a * a;
    const double expect = chebyshev_rho(g.eps_plus(), g.eps_minus(), xi) / (2 * pi * den.real());
    CHECK(weight_w(g, xi) == Approx(expect).epsilon(1e-12));
    CHECK(weight_w(g, xi) > 0);
  }
}

TEST_CASE("q_poly") {
  CHECK(q_poly(fam(1, 1, {}), 2, pi / 2) == Approx(-1.0).epsilon(1e-14));
  for (double xi : {0.3, 1.2, 2.7}) {
    CHECK(q_poly(fam(0, 0, {}), 3, xi) == Approx(2 * std::cos(3 * xi)).epsilon(1e-14));
    CHECK(q_poly(fam(1, 1, {}), 4, xi) == Approx(std::sin(5 * xi) / std::sin(xi)).epsilon(1e-13));
  }
  const auto f = fam(1, 1, {0.3, 0.5});
  CHECK(q_poly(f, 0, pi / 3) == Approx(2 * c_function(f, pi / 3).real()).epsilon(1e-14));
  CHECK_THROWS_AS(q_poly(fam(0, 1, {}), 1, 0.0), DomainError);

  // Phase path agrees with the direct complex evaluation, including negative l.
  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const auto g = testing::random_family(rng, {});
    for (int l = -3; l <= 7; ++l)
      for (int k = 1; k < 30; ++k) {
        const double xi = pi * k / 30;
        const C c = c_function(g, xi);
        const double direct = (c * std::polar(1.0, l * xi) + std::conj(c) * std::polar(1.0, -l * xi)).real();
        const double scale = std::max(1.0, 2 * std::abs(c));
        CHECK(std::abs(q_poly(g, l, xi) - direct) < 1e-12 * scale);
      }
  }
}

TEST_CASE("explicit_norm_delta") {
  const auto f = fam(1, 1, {0.3, 0.5});
  CHECK(explicit_norm_delta(f, 0) == Approx(1 / 0.85).epsilon(1e-15));
  CHECK(explicit_norm_delta(f, 3) == 1.0);
  CHECK(explicit_norm_delta(fam(0, 0, {}), 0) == Approx(0.5));
  CHECK(explicit_norm_delta(fam(1, 1, {}), 0) == 1.0);
  CHECK_THROWS_AS(explicit_norm_delta(fam(0, 0, {0.5, 0.5}), 0), ParameterError);
  // eps_- = 0 flips the sign of the product.
  CHECK(explicit_norm_delta(fam(1, 0, {0.4}), 0) == Approx(1 / 1.4).epsilon(1e-15));
}
