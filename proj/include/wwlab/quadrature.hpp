#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "wwlab/error.hpp"

namespace ww {

template <typename Scalar>
struct GaussRule {
  Eigen::Array<Scalar, Eigen::Dynamic, 1> nodes;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> weights;
};

// n-point Gauss-Legendre rule on [-1, 1], Newton iteration on the three-term recurrence.
template <typename Scalar>
GaussRule<Scalar> gauss_legendre(int n)
{
  using std::abs;
  using std::cos;
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs n >= 1");
  GaussRule<Scalar> rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const Scalar pi = Scalar(3.141592653589793238462643383279502884L);
  const Scalar tiny = Scalar(4) * Eigen::NumTraits<Scalar>::epsilon();
  for (int i = 0; i < (n + 1) / 2; ++i) {
    Scalar x = cos(pi * (Scalar(i) + Scalar(0.75)) / (Scalar(n) + Scalar(0.5)));
    Scalar dp = 1;
    for (int it = 0; it < 100; ++it) {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1;
      dp = Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
      const Scalar dx = p1 / dp;
      x -= dx;
      if (abs(dx) <= tiny) break;
    }
    {
      Scalar p0 = 1, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const Scalar p2 = ((Scalar(2 * k - 1)) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
        p0 = p1;
        p1 = p2;
      }
      dp = n == 1 ? Scalar(1) : Scalar(n) * (x * p1 - p0) / (x * x - Scalar(1));
    }
    const Scalar w = Scalar(2) / ((Scalar(1) - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0;
  return rule;
}

namespace detail {

// 7-point Gauss / 15-point Kronrod pair.
inline constexpr std::array<double, 8> gk15_x = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> gk15_wk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> gk15_wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(const std::complex<double>& v) { return std::abs(v); }

} // namespace detail

template <typename T>
struct QuadResult {
  T value{};
  double error = 0.0;
  int evaluations = 0;
};

template <typename F>
auto gauss_kronrod15(F&& f, double a, double b)
{
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * detail::gk15_wk[7];
  T gauss = fc * detail::gk15_wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * detail::gk15_x[j];
    const T s = f(c - dx) + f(c + dx);
    kron += s * detail::gk15_wk[j];
    if (j % 2 == 1) gauss += s * detail::gk15_wg[j / 2];
  }
  QuadResult<T> r;
  r.value = kron * h;
  r.error = detail::magnitude((kron - gauss) * h);
  r.evaluations = 15;
  return r;
}

// Globally adaptive G7K15 with bisection of the worst interval. Throws ToleranceNotMet
// when max_intervals is exhausted.
template <typename F>
auto integrate(F&& f, double a, double b, double abs_tol, double rel_tol, int max_intervals = 4000)
{
  using T = std::decay_t<decltype(f(a))>;
  struct Piece {
    double a, b;
    QuadResult<T> r;
    bool operator<(const Piece& o) const { return r.error < o.r.error; }
  };
  std::priority_queue<Piece> heap;
  auto first = gauss_kronrod15(f, a, b);
  T total = first.value;
  double err = first.error;
  int evals = first.evaluations;
  heap.push({a, b, first});
  while (err > std::max(abs_tol, rel_tol * detail::magnitude(total))) {
    if (static_cast<int>(heap.size()) >= max_intervals)
      throw Error(ErrorKind::ToleranceNotMet, "adaptive quadrature stalled");
    Piece p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) throw Error(ErrorKind::ToleranceNotMet, "interval underflow");
    auto left = gauss_kronrod15(f, p.a, m);
    auto right = gauss_kronrod15(f, m, p.b);
    total += left.value + right.value - p.r.value;
    err += left.error + right.error - p.r.error;
    evals += left.evaluations + right.evaluations;
    heap.push({p.a, m, left});
    heap.push({m, p.b, right});
  }
  // re-sum to remove drift from the incremental updates
  T sum{};
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().r.value;
    esum += heap.top().r.error;
    heap.pop();
  }
  QuadResult<T> out;
  out.value = sum;
  out.error = esum;
  out.evaluations = evals;
  return out;
}

// Wynn epsilon extrapolation of a sequence of partial sums; returns the last even-column entry.
template <typename T>
T wynn_epsilon(const std::vector<T>& s)
{
  const std::size_t n = s.size();
  if (n < 3) return n ? s.back() : T{};
  std::vector<T> prev(n + 1, T{}), cur(s.begin(), s.end());
  T best = s.back();
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<T> next(n - k);
    bool ok = true;
    for (std::size_t i = 0; i + k < n; ++i) {
      const T d = cur[i + 1] - cur[i];
      if (detail::magnitude(d) == 0.0) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + T(1) / d;
    }
    if (!ok) break;
    prev = std::move(cur);
    cur = std::move(next);
    if (k % 2 == 0) best = cur.back();
  }
  return best;
}

} // namespace ww
