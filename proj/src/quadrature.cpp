#include "blowuplab/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace blowuplab::quad {

namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel kronrod15(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resk = fc * kWgk[7];
  double resg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    resk += kWgk[j] * fsum;
    if (j % 2 == 1) resg += kWg[j / 2] * fsum;
  }
  return {a, b, resk * half, std::abs((resk - resg) * half)};
}

}  // namespace

QuadResult gauss_kronrod(const Integrand& f, double a, double b, double rel_tol,
                         double abs_tol, int max_intervals) {
  if (!(b > a)) {
    return {0.0, 0.0, 0, true};
  }
  std::priority_queue<Panel> heap;
  Panel first = kronrod15(f, a, b);
  heap.push(first);
  double total = first.value;
  double error = first.error;
  int evals = 15;
  int intervals = 1;
  while (error > std::max(abs_tol, rel_tol * std::abs(total)) && intervals < max_intervals) {
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      heap.push(worst);
      break;
    }
    Panel left = kronrod15(f, worst.a, mid);
    Panel right = kronrod15(f, mid, worst.b);
    evals += 30;
    ++intervals;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift from incremental updates.
  total = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  const bool ok = error <= std::max(abs_tol, rel_tol * std::abs(total)) ||
                  error <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(total);
  return {total, error, evals, ok};
}

QuadResult simpson_adaptive(const Integrand& f, double a, double b, double rel_tol,
                            int initial_panels, int max_halvings) {
  if (!(b > a)) {
    return {0.0, 0.0, 0, true};
  }
  int n = std::max(2, initial_panels + (initial_panels % 2));
  double h = (b - a) / n;
  // Keep the even/odd node sums so each halving reuses every prior sample.
  double ends = f(a) + f(b);
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < n; ++i) {
    (i % 2 ? odd : even) += f(a + i * h);
  }
  int evals = n + 1;
  double prev = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
  for (int k = 0; k < max_halvings; ++k) {
    even += odd;
    odd = 0.0;
    n *= 2;
    h *= 0.5;
    for (int i = 1; i < n; i += 2) odd += f(a + i * h);
    evals += n / 2;
    const double cur = h / 3.0 * (ends + 4.0 * odd + 2.0 * even);
    const double diff = std::abs(cur - prev);
    if (diff <= rel_tol * std::abs(cur) || (cur == 0.0 && prev == 0.0)) {
      return {cur, diff, evals, true};
    }
    prev = cur;
  }
  return {prev, std::abs(prev), evals, false};
}

double trapezoid(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("trapezoid: size mismatch");
  double s = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) s += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

void cumulative_trapezoid(std::span<const double> x, std::span<const double> y,
                          std::span<double> out) {
  if (x.size() != y.size() || out.size() != x.size()) {
    throw std::invalid_argument("cumulative_trapezoid: size mismatch");
  }
  if (out.empty()) return;
  out[0] = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) {
    out[i] = out[i - 1] + 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  }
}

}  // namespace blowuplab::quad
