#include "dexnet/statfit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dexnet/error.hpp"

namespace dexnet {

namespace {

/// Continued-fraction evaluation of the incomplete beta function, modified
/// Lentz method. Converges quickly for x < (a+1)/(a+b+2); the caller applies
/// the symmetry relation otherwise.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 1e-14;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) {
    d = kTiny;
  }
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) {
      d = kTiny;
    }
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) {
      c = kTiny;
    }
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) {
      break;
    }
  }
  return h;
}

/// Regularized incomplete beta I_x(a, b).
double incbeta(double a, double b, double x) {
  if (x <= 0.0) {
    return 0.0;
  }
  if (x >= 1.0) {
    return 1.0;
  }
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

}  // namespace

LogLogPoints loglog_points(const DegreeHistogram& hist, const LogLogOptions& options) {
  LogLogPoints out;
  if (!options.log_binning) {
    for (const auto& [degree, count] : hist.counts) {
      if (degree == 0) {
        continue;
      }
      if (options.truncate_above != 0 && degree > options.truncate_above) {
        continue;
      }
      LogLogPoint p;
      p.degree = static_cast<double>(degree);
      p.count = static_cast<double>(count);
      p.log_degree = std::log10(p.degree);
      p.log_count = std::log10(p.count);
      out.points.push_back(p);
    }
    return out;
  }

  // bin i covers degrees [2^i, 2^(i+1)).
  std::vector<double> bin_sums;
  for (const auto& [degree, count] : hist.counts) {
    if (degree == 0) {
      continue;
    }
    if (options.truncate_above != 0 && degree > options.truncate_above) {
      continue;
    }
    std::size_t bin = 0;
    for (std::size_t d = degree; d > 1; d >>= 1) {
      ++bin;
    }
    if (bin_sums.size() <= bin) {
      bin_sums.resize(bin + 1, 0.0);
    }
    bin_sums[bin] += static_cast<double>(count);
  }
  for (std::size_t bin = 0; bin < bin_sums.size(); ++bin) {
    if (bin_sums[bin] == 0.0) {
      continue;
    }
    const double lo = std::pow(2.0, static_cast<double>(bin));
    const double width = lo;  // 2^(i+1) - 2^i
    LogLogPoint p;
    p.degree = lo * std::sqrt(2.0);  // geometric center of [2^i, 2^(i+1))
    p.count = bin_sums[bin] / width;
    p.log_degree = std::log10(p.degree);
    p.log_count = std::log10(p.count);
    out.points.push_back(p);
  }
  return out;
}

PowerLawFit ols_fit(const LogLogPoints& points) {
  const std::size_t n = points.points.size();
  if (n < 3) {
    throw InsufficientDataError("OLS fit needs at least 3 points");
  }
  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points.points) {
    mean_x += p.log_degree;
    mean_y += p.log_count;
  }
  mean_x /= static_cast<double>(n);
  mean_y /= static_cast<double>(n);

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points.points) {
    const double dx = p.log_degree - mean_x;
    const double dy = p.log_count - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw DegenerateFitError("OLS fit degenerate: all x values coincide");
  }

  PowerLawFit fit;
  fit.n_points = n;
  fit.degrees_of_freedom = n - 2;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;

  double sse = syy - fit.slope * sxy;
  if (sse < 0.0) {
    sse = 0.0;  // guard against rounding on near-perfect fits
  }
  fit.r_squared = syy == 0.0 ? 1.0 : 1.0 - sse / syy;

  const double se = std::sqrt(sse / static_cast<double>(fit.degrees_of_freedom) / sxx);
  if (se == 0.0) {
    if (fit.slope == 0.0) {
      fit.t_statistic = 0.0;
      fit.p_value = 1.0;
    } else {
      fit.t_statistic = fit.slope > 0.0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity();
      fit.p_value = 0.0;
    }
    return fit;
  }
  fit.t_statistic = fit.slope / se;
  fit.p_value = 2.0 * student_t_sf(std::abs(fit.t_statistic), fit.degrees_of_freedom);
  // 2 * sf can nudge past 1 at t very close to 0.
  fit.p_value = std::min(fit.p_value, 1.0);
  return fit;
}

double student_t_sf(double t, std::size_t df) {
  if (df == 0) {
    throw InvalidArgumentError("Student t needs at least 1 degree of freedom");
  }
  if (std::isnan(t)) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  if (std::isinf(t)) {
    return t > 0.0 ? 0.0 : 1.0;
  }
  if (t < 0.0) {
    return 1.0 - student_t_sf(-t, df);
  }
  if (t == 0.0) {
    return 0.5;
  }
  const double v = static_cast<double>(df);
  const double x = v / (v + t * t);
  return 0.5 * incbeta(v / 2.0, 0.5, x);
}

}  // namespace dexnet
