#pragma once

#include <cstddef>
#include <vector>

#include "dexnet/analytics.hpp"

namespace dexnet {

/// One point of the log-log degree distribution. Raw degree and count are
/// kept alongside the base-10 logs for reporting.
struct LogLogPoint {
  double log_degree = 0.0;
  double log_count = 0.0;
  double degree = 0.0;  // bin center when binned, exact degree otherwise
  double count = 0.0;   // per-degree density when binned, exact count otherwise
};

struct LogLogPoints {
  std::vector<LogLogPoint> points;  // log_degree strictly increasing
};

struct LogLogOptions {
  // Geometric base-2 binning: counts inside [2^i, 2^(i+1)) are summed and
  // divided by the bin width, plotted at the bin's geometric center. Smooths
  // the sparse tail; off by default to fit the plain distribution.
  bool log_binning = false;
  // Drop degrees above this value before fitting; 0 keeps everything.
  std::size_t truncate_above = 0;
};

/// Slope/intercept estimates for log10(count) = intercept + slope *
/// log10(degree), with the significance test against slope = 0.
struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_statistic = 0.0;
  std::size_t degrees_of_freedom = 0;  // n_points - 2
  double p_value = 0.0;                // two-sided
  std::size_t n_points = 0;
};

/// Base-10 log-log transform of a degree histogram. Degree-0 entries (possible
/// after degree filtering) have no log and are skipped. Any base would do:
/// changing it shifts the intercept but leaves slope and p-value untouched.
LogLogPoints loglog_points(const DegreeHistogram& hist, const LogLogOptions& options = {});

/// Closed-form OLS through the points with a two-sided t-test on the slope.
/// Zero residual variance is reported as p = 0 exactly (p = 1 when the slope
/// is also 0, since a flat perfect line carries no evidence of a trend).
/// Throws InsufficientDataError below 3 points and DegenerateFitError when
/// all x values coincide.
PowerLawFit ols_fit(const LogLogPoints& points);

/// Survival function P(T > t) of Student's t with df degrees of freedom,
/// evaluated through the regularized incomplete beta function.
double student_t_sf(double t, std::size_t df);

}  // namespace dexnet
