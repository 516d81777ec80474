#include <cmath>
#include <random>

#include "doctest.h"
#include "tflux/diagnostics.hpp"
#include "tflux/quadrature.hpp"
#include "tflux/specfun.hpp"

using namespace tflux;
using doctest::Approx;

namespace {

double factorial(int n) { return std::tgamma(n + 1.0); }

}  // namespace

TEST_CASE("legendre_p basic values") {
  CHECK(legendre_p(0, 0.37) == 1.0);
  CHECK(legendre_p(2, 0.0) == Approx(-0.5).epsilon(1e-15));
  for (int k = 0; k <= 10; ++k) {
    const double expect = (k % 2 ? -1.0 : 1.0) * std::tgamma(k + 0.5) / (std::sqrt(pi) * factorial(k));
    CHECK(legendre_p(2 * k, 0.0) == Approx(expect).epsilon(1e-13));
    CHECK(legendre_p(2 * k + 1, 0.0) == 0.0);
  }
  CHECK(legendre_p(7, 1.0) == 1.0);
  CHECK(legendre_p(7, -1.0) == -1.0);
  CHECK_THROWS_AS(legendre_p(3, 1.0001), DomainError);
  CHECK_THROWS_AS(legendre_p(-1, 0.5), DomainError);
  CHECK_THROWS_AS(legendre_p(2, std::nan("")), DomainError);
}

TEST_CASE("legendre recurrence residual up to l = 200") {
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double x = -1.0 + 0.02 * i;
    const auto p = legendre_p_table(201, x);
    for (int l = 1; l <= 200; ++l) {
      worst = std::max(worst, std::abs((l + 1) * p[l + 1] - (2 * l + 1) * x * p[l] + l * p[l - 1]));
    }
    CHECK(p[57] == legendre_p(57, x));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("legendre orthogonality by Gauss quadrature") {
  const auto g = quad::gauss_legendre(30);
  for (int l = 0; l <= 12; ++l) {
    for (int m = 0; m <= 12; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < g.nodes.size(); ++i) s += g.weights[i] * legendre_p(l, g.nodes[i]) * legendre_p(m, g.nodes[i]);
      const double expect = l == m ? 2.0 / (2 * l + 1) : 0.0;
      CHECK(std::abs(s - expect) < 1e-9);
    }
  }
}

TEST_CASE("legendre derivative") {
  CHECK(legendre_p_deriv(1, 0.9) == 1.0);
  CHECK(legendre_p_deriv(0, 0.2) == 0.0);
  for (int k = 0; k <= 6; ++k) {
    CHECK(legendre_p_deriv(2 * k + 1, 0.0) == Approx((2 * k + 1) * legendre_p(2 * k, 0.0)).epsilon(1e-13));
  }
  const double h = 1e-6;
  const double fd = (legendre_p(5, 0.3 + h) - legendre_p(5, 0.3 - h)) / (2 * h);
  CHECK(std::abs(legendre_p_deriv(5, 0.3) - fd) < 1e-8);
  for (int l = 0; l <= 20; ++l) {
    CHECK(legendre_p_deriv(l, 1.0) == Approx(l * (l + 1) / 2.0).epsilon(1e-13));
  }
}

TEST_CASE("derivative identity (2l+1) P_l = P'_{l+1} - P'_{l-1}") {
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double x = -1.0 + 0.05 * i;
    for (int l = 1; l <= 50; ++l) {
      const double lhs = legendre_p(l, x);
      const double rhs = (legendre_p_deriv(l + 1, x) - legendre_p_deriv(l - 1, x)) / (2 * l + 1);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("associated legendre") {
  CHECK(legendre_p_assoc(1, 1, 0.0) == 1.0);
  CHECK(legendre_p_assoc(2, 1, 0.5) == Approx(3 * 0.5 * std::sqrt(0.75)).epsilon(1e-14));
  CHECK(legendre_p_assoc(2, 2, 0.5) == Approx(3 * 0.75).epsilon(1e-14));
  for (double x : {-0.7, 0.1, 0.93}) CHECK(legendre_p_assoc(9, 0, x) == legendre_p(9, x));
  CHECK_THROWS_AS(legendre_p_assoc(2, 3, 0.1), DomainError);
}

TEST_CASE("addition theorem without Condon-Shortley phase") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double th = pi * u(rng), thf = pi * u(rng), dphi = 2 * pi * u(rng);
    const double cg = std::cos(th) * std::cos(thf) + std::sin(th) * std::sin(thf) * std::cos(dphi);
    for (int l = 0; l <= 8; ++l) {
      double sum = legendre_p(l, std::cos(th)) * legendre_p(l, std::cos(thf));
      for (int m = 1; m <= l; ++m) {
        sum += 2.0 * factorial(l - m) / factorial(l + m) * legendre_p_assoc(l, m, std::cos(th)) *
               legendre_p_assoc(l, m, std::cos(thf)) * std::cos(m * dphi);
      }
      CHECK(sum == Approx(legendre_p(l, cg)).epsilon(1e-12));
    }
  }
}

TEST_CASE("complete elliptic integrals K and E") {
  CHECK(ellip_k(0.0) == Approx(pi / 2).epsilon(1e-15));
  CHECK(ellip_e(0.0) == Approx(pi / 2).epsilon(1e-15));
  CHECK(ellip_e(1.0) == 1.0);
  CHECK_THROWS_AS(ellip_k(1.0), DomainError);
  CHECK_THROWS_AS(ellip_k(std::nan("")), DomainError);
  CHECK_THROWS_AS(ellip_e(1.2), DomainError);
  for (double k : {0.3, 0.7, 0.975, 0.999}) {
    const auto kq = quad::integrate([k](double t) { return 1.0 / std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, pi / 2);
    const auto eq = quad::integrate([k](double t) { return std::sqrt(1.0 - k * k * std::sin(t) * std::sin(t)); }, 0.0, pi / 2);
    CHECK(ellip_k(k) == Approx(kq.value).epsilon(1e-12));
    CHECK(ellip_e(k) == Approx(eq.value).epsilon(1e-12));
  }
  double prev_k = ellip_k(0.0), prev_e = ellip_e(0.0);
  for (int i = 1; i < 100; ++i) {
    const double k = i / 100.0;
    const double kk = ellip_k(k), ee = ellip_e(k);
    CHECK(ee <= kk);
    CHECK(kk > prev_k);
    CHECK(ee < prev_e);
    prev_k = kk;
    prev_e = ee;
  }
}

TEST_CASE("complete elliptic integral of the third kind") {
  for (double k : {0.0, 0.4, 0.9}) CHECK(ellip_pi(0.0, k) == Approx(ellip_k(k)).epsilon(1e-14));
  for (double nu : {-3.0, -0.5, 0.2, 0.9}) CHECK(ellip_pi(nu, 0.0) == Approx(pi / (2 * std::sqrt(1 - nu))).epsilon(1e-13));
  auto direct = [](double nu, double k) {
    return quad::integrate(
               [=](double t) {
                 const double s2 = std::sin(t) * std::sin(t);
                 return 1.0 / ((1.0 - nu * s2) * std::sqrt(1.0 - k * k * s2));
               },
               0.0, pi / 2)
        .value;
  };
  CHECK(ellip_pi(-0.8, 0.6) == Approx(direct(-0.8, 0.6)).epsilon(1e-12));
  CHECK(ellip_pi(0.7, 0.95) == Approx(direct(0.7, 0.95)).epsilon(1e-12));
  CHECK(ellip_pi(-25.0, 0.99) == Approx(direct(-25.0, 0.99)).epsilon(1e-12));
  CHECK_THROWS_AS(ellip_pi(1.0, 0.5), DomainError);
}

TEST_CASE("principal value of Pi for nu > 1") {
  for (auto [nu, k] : {std::pair{2.5, 0.6}, std::pair{1.3, 0.3}, std::pair{8.0, 0.95}}) {
    const double t0 = std::asin(1.0 / std::sqrt(nu));
    auto g = [=](double t) {
      const double s2 = std::sin(t) * std::sin(t);
      return 1.0 / ((1.0 - nu * s2) * std::sqrt(1.0 - k * k * s2));
    };
    const double h = 0.5 * std::min(t0, pi / 2 - t0);
    double pv = quad::integrate(g, 0.0, t0 - h).value + quad::integrate(g, t0 + h, pi / 2).value;
    // The paired integrand is smooth; only its evaluation at u -> 0 cancels badly.
    auto pair = [&](double u) { return g(t0 + u) + g(t0 - u); };
    const double eps = 1e-4;
    pv += eps * pair(eps / 2) + quad::integrate(pair, eps, h).value;
    CHECK(ellip_pi(nu, k) == Approx(pv).epsilon(1e-9));
  }
}
