#include "ttestab/smib.hpp"

#include <cmath>
#include <cstdio>

#include "ttestab/errors.hpp"
#include "ttestab/trunc_series.hpp"

namespace ttestab::smib {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Root scanner settings. The dense segment covers (0, 4*pi] at step 1e-3.
// For orders >= 3 the search stops there: the estimate tracks the crossing
// adjacent to the SEP, and the only roots beyond 4*pi are leading-term
// crossings near n/tan(delta_s) that do not approximate the UEP (they are
// what remains of the order-6 curve after its near intersection vanishes).
// Order 2 is the exception: its single root 2*cos(delta_s)/sin(delta_s) IS
// the estimate and escapes the window for small delta_s, so that scan
// extends in doubling segments at 0.1% relative step.
constexpr double kScanStep = 1e-3;
constexpr double kDenseEnd = 4.0 * kPi;
constexpr double kScanCap = 1e5;
constexpr double kBisectWidth = 1e-10;
constexpr double kTangencyTol = 1e-9;

// g(x) = sum_{k=1..n} c_k x^{k-1}; the root equation divided by x.
double eval_reduced(const TruncSeries& s, double x) {
  double acc = 0.0;
  for (int k = s.order; k >= 1; --k) {
    acc = acc * x + s.coeffs[static_cast<std::size_t>(k)];
  }
  return acc;
}

double bisect_root(const TruncSeries& s, double lo, double hi, double flo) {
  while (hi - lo > kBisectWidth) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eval_reduced(s, mid);
    if (fm == 0.0) return mid;
    if ((flo > 0.0) != (fm > 0.0)) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

// Smallest positive root of sum_{k=1..n} c_k x^k, or nullopt when none is
// found (including the touching-root case at the existence threshold).
std::optional<double> first_positive_root(const TruncSeries& s, bool extend_beyond_window) {
  double seg_start = 0.0;
  double seg_end = kDenseEnd;
  double step = kScanStep;
  const double cap = extend_beyond_window ? kScanCap : kDenseEnd;
  double x_prev = 0.0;
  double g_prev = eval_reduced(s, 0.0);  // = c_1 = cos(delta_s) > 0
  double abs_before_prev = std::abs(g_prev);
  bool have_before = false;

  while (seg_start < cap) {
    const long count = static_cast<long>(std::ceil((seg_end - seg_start) / step));
    for (long j = 1; j <= count; ++j) {
      const double x = std::min(seg_start + j * step, seg_end);
      const double g = eval_reduced(s, x);
      if (g == 0.0) return x;
      if ((g > 0.0) != (g_prev > 0.0)) {
        return bisect_root(s, x_prev, x, g_prev);
      }
      // Local minimum of |g| dipping to ~zero without a sign change:
      // even-multiplicity root, treated as a vanished UEP.
      const double abs_prev = std::abs(g_prev);
      if (have_before && abs_prev < kTangencyTol && abs_prev <= abs_before_prev &&
          abs_prev <= std::abs(g)) {
        return std::nullopt;
      }
      abs_before_prev = abs_prev;
      have_before = true;
      x_prev = x;
      g_prev = g;
    }
    seg_start = seg_end;
    seg_end = 2.0 * seg_end;
    step = seg_start * 1e-3;
  }
  return std::nullopt;
}

UepEstimate make_estimate(int order, double delta_s, std::optional<double> value) {
  UepEstimate e;
  e.order = order;
  e.exists = value.has_value();
  if (e.exists) {
    e.value = *value;
    e.error = *value - (kPi - delta_s);
  }
  return e;
}

double closed_form_value(double delta_s, int order) {
  const double c = std::cos(delta_s);
  const double s = std::sin(delta_s);
  if (order == 2) return delta_s + 2.0 * c / s;
  return delta_s + (std::sqrt(9.0 + 15.0 * c * c) - 3.0 * s) / (2.0 * c);
}

}  // namespace

void validate(const SmibParams& p) {
  if (!std::isfinite(p.delta_s) || p.delta_s <= 0.0 || p.delta_s >= kPi / 2.0) {
    throw validation_error("SmibParams: delta_s must lie in (0, pi/2)");
  }
  if (!std::isfinite(p.alpha) || p.alpha < 0.0) {
    throw validation_error("SmibParams: alpha must be >= 0");
  }
  if (!std::isfinite(p.beta) || p.beta <= 0.0) {
    throw validation_error("SmibParams: beta must be > 0");
  }
}

UepEstimate uep_closed_form(const SmibParams& p, int order) {
  validate(p);
  if (order != 2 && order != 3) {
    throw validation_error("uep_closed_form: only orders 2 and 3 have closed forms, got " +
                           std::to_string(order));
  }
  return make_estimate(order, p.delta_s, closed_form_value(p.delta_s, order));
}

UepEstimate uep_numeric(const SmibParams& p, int order) {
  validate(p);
  if (order < 2 || order > 15) {
    throw validation_error("uep_numeric: order must be in 2..15, got " + std::to_string(order));
  }
  const TruncSeries s = pair_coefficients(1.0, 0.0, p.delta_s, order);
  auto root = first_positive_root(s, order == 2);
  if (root) return make_estimate(order, p.delta_s, p.delta_s + *root);
  return make_estimate(order, p.delta_s, std::nullopt);
}

double existence_threshold(int order) {
  if (order != 5 && order != 6) {
    throw validation_error("existence_threshold: only orders 5 and 6 have a vanishing estimate");
  }
  auto present = [order](double delta_s) {
    return uep_numeric({delta_s, 0.0, 1.0}, order).exists;
  };
  // Bracket the absent->present transition from below.
  double lo = 0.02;
  if (present(lo)) throw numerical_error("existence_threshold: no absent region found");
  double hi = lo;
  do {
    hi += 0.02;
    if (hi >= kPi / 2.0 - 1e-3) {
      throw numerical_error("existence_threshold: no present region found");
    }
  } while (!present(hi));
  while (hi - lo > 1e-4) {
    const double mid = 0.5 * (lo + hi);
    (present(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<SweepRow> sweep_ueps(const std::vector<int>& orders, double step) {
  if (!(step > 0.0)) throw validation_error("sweep_ueps: step must be positive");
  std::vector<SweepRow> rows;
  for (double delta_s = step; delta_s < kPi / 2.0; delta_s += step) {
    for (int n : orders) {
      const UepEstimate e = uep_numeric({delta_s, 0.0, 1.0}, n);
      rows.push_back({delta_s, n, e.exists, e.exists ? e.value : 0.0, e.exists ? e.error : 0.0});
    }
  }
  return rows;
}

OrderingReport check_ordering(double step) {
  if (!(step > 0.0)) throw validation_error("check_ordering: step must be positive");
  constexpr int kConservative[] = {3, 4, 7, 8};
  constexpr int kOptimistic[] = {2, 5, 6, 9};
  constexpr double kSlack = 1e-9;
  OrderingReport report;
  char buf[160];
  for (double delta_s = step; delta_s < kPi / 2.0; delta_s += step) {
    ++report.points_checked;
    const double delta_u1 = kPi - delta_s;
    // Conservative chain: ascending towards delta_u1 from below.
    double prev = -1e300;
    int prev_order = 0;
    for (int n : kConservative) {
      const UepEstimate e = uep_numeric({delta_s, 0.0, 1.0}, n);
      if (!e.exists) continue;
      if (e.value + kSlack < prev) {
        std::snprintf(buf, sizeof buf, "TE%d (%.9f) < TE%d (%.9f)", n, e.value, prev_order, prev);
        report.violations.push_back({delta_s, buf});
      }
      if (e.value > delta_u1 + kSlack) {
        std::snprintf(buf, sizeof buf, "TE%d (%.9f) > delta_u1 (%.9f)", n, e.value, delta_u1);
        report.violations.push_back({delta_s, buf});
      }
      prev = e.value;
      prev_order = n;
    }
    // Optimistic chain: descending towards delta_u1 from above.
    prev = 1e300;
    prev_order = 0;
    for (int n : kOptimistic) {
      const UepEstimate e = uep_numeric({delta_s, 0.0, 1.0}, n);
      if (!e.exists) continue;
      if (e.value > prev + kSlack) {
        std::snprintf(buf, sizeof buf, "TE%d (%.9f) > TE%d (%.9f)", n, e.value, prev_order, prev);
        report.violations.push_back({delta_s, buf});
      }
      if (e.value + kSlack < delta_u1) {
        std::snprintf(buf, sizeof buf, "TE%d (%.9f) < delta_u1 (%.9f)", n, e.value, delta_u1);
        report.violations.push_back({delta_s, buf});
      }
      prev = e.value;
      prev_order = n;
    }
  }
  return report;
}

PdeltaTable pdelta_curve(double delta_s, double p_max, const std::vector<int>& orders,
                         double lo, double hi, int samples) {
  if (samples < 2) throw validation_error("pdelta_curve: need at least 2 samples");
  if (!(lo <= delta_s && delta_s <= hi)) {
    throw validation_error("pdelta_curve: range must contain delta_s");
  }
  PdeltaTable t;
  t.orders = orders;
  t.delta.resize(static_cast<std::size_t>(samples));
  t.pe.resize(static_cast<std::size_t>(samples));
  t.pen.assign(orders.size(), std::vector<double>(static_cast<std::size_t>(samples)));
  const double sin0 = std::sin(delta_s);
  std::vector<TruncSeries> series;
  series.reserve(orders.size());
  for (int n : orders) series.push_back(pair_coefficients(1.0, 0.0, delta_s, n));
  for (int j = 0; j < samples; ++j) {
    const double d = lo + (hi - lo) * j / (samples - 1);
    t.delta[static_cast<std::size_t>(j)] = d;
    t.pe[static_cast<std::size_t>(j)] = p_max * std::sin(d);
    for (std::size_t i = 0; i < orders.size(); ++i) {
      t.pen[i][static_cast<std::size_t>(j)] =
          p_max * (sin0 + eval_series_deviation(series[i], d - delta_s));
    }
  }
  return t;
}

double te3_gap_no_load_limit() {
  // closed_form_value(0, 3) - (pi - 0)
  return closed_form_value(0.0, 3) - kPi;
}

double te3_gap_slope_bound() {
  const double x = 0.5;
  return (1.0 - 4.0 * 0.0) * std::sqrt((1.0 + 5.0 * x * x / 3.0) / (1.0 - x * x));
}

}  // namespace ttestab::smib
