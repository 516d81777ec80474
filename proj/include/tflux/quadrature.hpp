#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tflux/diagnostics.hpp"

namespace tflux::quad {

struct Options {
  double abs_tol = 1e-14;
  double rel_tol = 1e-11;
  int max_subdivisions = 4000;
};

template <class T>
struct Result {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

namespace detail {

// 21-point Kronrod extension of the 10-point Gauss rule (QUADPACK qk21).
// Odd indices of xgk are the Gauss nodes.
inline constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208689209130, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }
template <std::size_t N>
double magnitude(const std::array<double, N>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double magnitude(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

template <class T>
T scaled(const T& v, double s) {
  if constexpr (requires(T a) { a * s; }) {
    return v * s;
  } else {
    T out = v;
    for (auto& x : out) x *= s;
    return out;
  }
}

template <class T>
void accumulate(T& acc, const T& v) {
  if constexpr (requires(T a) { a += v; }) {
    acc += v;
  } else {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
  }
}

template <class T>
T difference(const T& a, const T& b) {
  T out = a;
  accumulate(out, scaled(b, -1.0));
  return out;
}

template <class T>
struct Segment {
  double a, b;
  T value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk21(F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<T, 21> fv;
  fv[20] = f(c);
  for (int j = 0; j < 10; ++j) {
    const double dx = h * xgk[j];
    fv[2 * j] = f(c - dx);
    fv[2 * j + 1] = f(c + dx);
  }
  T kron = scaled(fv[20], wgk[10]);
  T gauss = scaled(fv[20], 0.0);
  double resabs = wgk[10] * magnitude(fv[20]);
  for (int j = 0; j < 10; ++j) {
    T s = fv[2 * j];
    accumulate(s, fv[2 * j + 1]);
    accumulate(kron, scaled(s, wgk[j]));
    if (j % 2 == 1) accumulate(gauss, scaled(s, wg[j / 2]));
    resabs += wgk[j] * (magnitude(fv[2 * j]) + magnitude(fv[2 * j + 1]));
  }
  const T mean = scaled(kron, 0.5);
  double resasc = wgk[10] * magnitude(difference(fv[20], mean));
  for (int j = 0; j < 10; ++j) {
    resasc += wgk[j] * (magnitude(difference(fv[2 * j], mean)) + magnitude(difference(fv[2 * j + 1], mean)));
  }
  const double ah = std::abs(h);
  resabs *= ah;
  resasc *= ah;
  T value = scaled(kron, h);
  // QUADPACK error scaling: |K - G| overstates the Kronrod error by orders of
  // magnitude once the integrand is resolved.
  double err = magnitude(difference(value, scaled(gauss, h)));
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, std::move(value), err};
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (G10/K21) on [a, b]. Works for double,
/// std::complex<double> and std::array<double, N>; vector errors use the max
/// norm. Throws NumericalError if the tolerance is not met within the
/// subdivision budget.
template <class T = double, class F>
Result<T> integrate(F&& f, double a, double b, const Options& opt = {}) {
  using Seg = detail::Segment<T>;
  if (a == b) {
    Result<T> r;
    if constexpr (!std::is_arithmetic_v<T>) r.value = detail::scaled(T(f(a)), 0.0);
    return r;
  }
  std::priority_queue<Seg> heap;
  Seg first = detail::gk21<T>(f, a, b);
  T total = first.value;
  double err = first.error;
  heap.push(std::move(first));
  int evals = 21;
  for (int it = 0; it < opt.max_subdivisions; ++it) {
    if (err <= std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(total))) break;
    Seg worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(std::move(worst));
      break;
    }
    Seg left = detail::gk21<T>(f, worst.a, mid);
    Seg right = detail::gk21<T>(f, mid, worst.b);
    evals += 42;
    total = detail::difference(total, worst.value);
    detail::accumulate(total, left.value);
    detail::accumulate(total, right.value);
    err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
  }
  // Re-sum to shed accumulated rounding from the running updates.
  T sum = detail::scaled(total, 0.0);
  double esum = 0.0;
  while (!heap.empty()) {
    detail::accumulate(sum, heap.top().value);
    esum += heap.top().error;
    heap.pop();
  }
  const double target = std::max(opt.abs_tol, opt.rel_tol * detail::magnitude(sum));
  if (!(esum <= 10.0 * target)) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "quadrature did not converge on [%.6g, %.6g]: error estimate %.3g, target %.3g", a, b,
                  esum, target);
    throw NumericalError(buf);
  }
  return {std::move(sum), esum, evals};
}

/// Nodes and weights of the n-point Gauss–Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("gauss_legendre: n must be positive");
  GaussRule rule{std::vector<double>(n), std::vector<double>(n)};
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int l = 2; l <= n; ++l) {
        const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    double p0 = 1.0, p1 = x;
    for (int l = 2; l <= n; ++l) {
      const double p2 = ((2.0 * l - 1.0) * x * p1 - (l - 1.0) * p0) / l;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace tflux::quad
