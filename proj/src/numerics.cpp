#include "mcrsim/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <vector>

#include "mcrsim/error.hpp"

namespace mcrsim::numerics {

namespace {

// Kronrod 15-point abscissae/weights and the embedded 7-point Gauss weights
// (QUADPACK qk15).
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
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel gauss_kronrod(const Integrand& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    std::ostringstream msg;
    msg << "integrand is not finite on [" << a << ", " << b << "]";
    throw Error(ErrorCode::numerical, msg.str());
  }
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw Error(ErrorCode::argument, "quadrature tolerances must be > 0");
  if (max_subdivisions < 1)
    throw Error(ErrorCode::argument, "quadrature needs max_subdivisions >= 1");
  if (!(scale > 0.0))
    throw Error(ErrorCode::argument, "quadrature scale must be > 0");
}

double gamma_fn(double x) {
  if (!(x > 0.0))
    throw Error(ErrorCode::argument, "gamma_fn requires a positive argument");
  return std::tgamma(x);
}

double erf_fn(double x) { return std::erf(x); }

double integrate(const Integrand& f, double a, double b,
                 const QuadratureSpec& spec) {
  spec.validate();
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, spec);

  // Start from a few panels so a narrow feature inside [a, b] cannot slip
  // between the nodes of a single rule.
  constexpr int kInitialPanels = 4;
  std::priority_queue<Panel> heap;
  double total = 0.0;
  double total_error = 0.0;
  const int start = std::min(kInitialPanels, spec.max_subdivisions);
  for (int i = 0; i < start; ++i) {
    const double lo = a + (b - a) * i / start;
    const double hi = (i + 1 == start) ? b : a + (b - a) * (i + 1) / start;
    Panel p = gauss_kronrod(f, lo, hi);
    total += p.value;
    total_error += p.error;
    heap.push(p);
  }

  int panels = start;
  while (total_error > std::max(spec.abs_tol, spec.rel_tol * std::abs(total))) {
    if (panels >= spec.max_subdivisions) {
      std::ostringstream msg;
      msg << "quadrature did not converge on [" << a << ", " << b << "] after "
          << panels << " subdivisions (error estimate " << total_error << ")";
      throw Error(ErrorCode::numerical, msg.str());
    }
    Panel worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(ErrorCode::numerical,
                  "quadrature panel collapsed below floating-point resolution");
    }
    Panel left = gauss_kronrod(f, worst.a, mid);
    Panel right = gauss_kronrod(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }

  // Re-sum from the panels; the running total accumulates cancellation.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  return sum;
}

double integrate_semi_infinite(const Integrand& f, double lower,
                               const QuadratureSpec& spec) {
  spec.validate();
  const double scale = spec.scale;
  const Integrand mapped = [&](double t) {
    const double one_minus = 1.0 - t;
    const double x = lower + scale * t / one_minus;
    if (!std::isfinite(x)) return 0.0;
    return f(x) * scale / (one_minus * one_minus);
  };
  try {
    return integrate(mapped, 0.0, 1.0, spec);
  } catch (const Error& e) {
    if (spec.truncation == Truncation::none || e.code() != ErrorCode::numerical)
      throw;
  }

  // Truncation fallback: walk outward geometrically, track the peak, and stop
  // once the integrand is negligible relative to it.
  double peak = 0.0;
  double cutoff = std::numeric_limits<double>::quiet_NaN();
  for (int k = 0; k < 200; ++k) {
    const double x = lower + scale * std::ldexp(1.0, k - 6);
    const double v = std::abs(f(x));
    peak = std::max(peak, v);
    if (peak > 0.0 && v < spec.abs_tol * peak) {
      cutoff = x;
      break;
    }
  }
  if (std::isnan(cutoff)) {
    throw Error(ErrorCode::numerical,
                "semi-infinite integrand does not decay; truncation failed");
  }
  return integrate(f, lower, cutoff, spec);
}

double find_root_monotone(const std::function<double(double)>& g, double lo,
                          double hi, double tol) {
  if (!(tol > 0.0)) throw Error(ErrorCode::argument, "root tolerance must be > 0");
  if (!(lo < hi)) throw Error(ErrorCode::argument, "root bracket must satisfy lo < hi");
  double g_lo = g(lo);
  const double g_hi = g(hi);
  if (std::abs(g_lo) <= tol) return lo;
  if (std::abs(g_hi) <= tol) return hi;
  if ((g_lo > 0.0) == (g_hi > 0.0)) {
    std::ostringstream msg;
    msg << "no sign change on [" << lo << ", " << hi << "] (g(lo)=" << g_lo
        << ", g(hi)=" << g_hi << ")";
    throw Error(ErrorCode::numerical, msg.str());
  }
  for (int iter = 0; iter < 400; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= tol || mid <= lo || mid >= hi) return mid;
    const double g_mid = g(mid);
    if (std::abs(g_mid) <= tol) return mid;
    if ((g_mid > 0.0) == (g_lo > 0.0)) {
      lo = mid;
      g_lo = g_mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double linear) { return 10.0 * std::log10(linear); }
double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }

}  // namespace mcrsim::numerics
