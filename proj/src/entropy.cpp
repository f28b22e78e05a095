#include "motzkin/entropy.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "motzkin/log_math.hpp"

namespace motzkin {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void accumulate(double& slot, double value) { slot = log_add(slot, value); }

}  // namespace

HalfWeights half_weights(const ModelParams& params) {
  params.validate();
  const int n = params.n;
  const double log_t = std::log(params.t);
  const double log_s = std::log(static_cast<double>(params.s));
  std::vector<double> cur(static_cast<std::size_t>(n) + 2, kNegInf);
  std::vector<double> next(cur.size());
  cur[0] = 0.0;
  for (int j = 0; j < n; ++j) {
    std::fill(next.begin(), next.end(), kNegInf);
    for (int m = 0; m <= j; ++m) {
      const double w = cur[static_cast<std::size_t>(m)];
      if (w == kNegInf) continue;
      const auto um = static_cast<std::size_t>(m);
      accumulate(next[um], w + 2.0 * m * log_t);
      accumulate(next[um + 1], w + (2.0 * m + 1.0) * log_t);
      if (m > 0) accumulate(next[um - 1], w + log_s + (2.0 * m - 1.0) * log_t);
    }
    std::swap(cur, next);
  }
  cur.resize(static_cast<std::size_t>(n) + 1);
  return {params, std::move(cur)};
}

HalfWeights right_half_weights(const ModelParams& params) {
  params.validate();
  const int n = params.n;
  const double log_t = std::log(params.t);
  const double log_s = std::log(static_cast<double>(params.s));
  // r[h]: weight of the suffix from the current site to 2n, entered at height h.
  // An Up here closes inside the right half, so its color is free.
  std::vector<double> r(static_cast<std::size_t>(n) + 2, kNegInf);
  std::vector<double> prev(r.size());
  r[0] = 0.0;
  for (int remaining = 1; remaining <= n; ++remaining) {
    std::fill(prev.begin(), prev.end(), kNegInf);
    for (int h = 0; h <= remaining && h <= n; ++h) {
      const auto uh = static_cast<std::size_t>(h);
      double w = r[uh] + 2.0 * h * log_t;
      w = log_add(w, r[uh + 1] + log_s + (2.0 * h + 1.0) * log_t);
      if (h > 0) w = log_add(w, r[uh - 1] + (2.0 * h - 1.0) * log_t);
      prev[uh] = w;
    }
    std::swap(r, prev);
  }
  r.resize(static_cast<std::size_t>(n) + 1);
  return {params, std::move(r)};
}

double SchmidtSpectrum::total_weight() const {
  double sum = 0.0;
  for (const auto& level : levels) sum += std::exp(level.log_multiplicity + level.log_p);
  return sum;
}

SchmidtSpectrum schmidt_entropy(const HalfWeights& weights) {
  const double log_s = std::log(static_cast<double>(weights.params.s));
  std::vector<double> log_q(weights.log_d.size());
  for (std::size_t m = 0; m < log_q.size(); ++m) {
    log_q[m] = 2.0 * weights.log_d[m] + static_cast<double>(m) * log_s;
  }
  SchmidtSpectrum out;
  out.params = weights.params;
  out.log_norm = log_sum_exp(log_q);
  double nats = 0.0;
  for (std::size_t m = 0; m < log_q.size(); ++m) {
    SchmidtLevel level;
    level.m = static_cast<int>(m);
    level.log_p = 2.0 * weights.log_d[m] - out.log_norm;
    level.p = std::exp(level.log_p);
    level.log_multiplicity = static_cast<double>(m) * log_s;
    const double q = std::exp(log_q[m] - out.log_norm);
    if (q > 0.0) nats -= q * level.log_p;
    out.levels.push_back(level);
  }
  out.entropy_bits = std::max(0.0, nats / std::numbers::ln2);
  return out;
}

SchmidtSpectrum schmidt_entropy(const ModelParams& params) { return schmidt_entropy(half_weights(params)); }

MidpointStats midpoint_height_stats(const HalfWeights& weights) {
  const double log_s = std::log(static_cast<double>(weights.params.s));
  std::vector<double> log_q(weights.log_d.size());
  for (std::size_t m = 0; m < log_q.size(); ++m) {
    log_q[m] = 2.0 * weights.log_d[m] + static_cast<double>(m) * log_s;
  }
  const double log_norm = log_sum_exp(log_q);
  MidpointStats stats;
  stats.distribution.resize(log_q.size());
  for (std::size_t m = 0; m < log_q.size(); ++m) {
    stats.distribution[m] = std::exp(log_q[m] - log_norm);
    stats.mean += static_cast<double>(m) * stats.distribution[m];
  }
  return stats;
}

MidpointStats midpoint_height_stats(const ModelParams& params) {
  return midpoint_height_stats(half_weights(params));
}

std::string to_string(EntropyRegime regime) {
  switch (regime) {
    case EntropyRegime::Linear: return "linear";
    case EntropyRegime::SquareRoot: return "sqrt";
    case EntropyRegime::Bounded: return "bounded";
  }
  return "unknown";
}

EntropyRegime regime_of(double t) {
  if (t > 1.0) return EntropyRegime::Linear;
  if (t == 1.0) return EntropyRegime::SquareRoot;
  return EntropyRegime::Bounded;
}

double sqrt_coefficient_reference(int s) {
  const double rs = std::sqrt(static_cast<double>(s));
  const double sigma = rs / (2.0 * rs + 1.0);
  return 2.0 * std::log2(static_cast<double>(s)) * std::sqrt(2.0 * sigma / std::numbers::pi);
}

bool EntropyScan::passed() const {
  for (const auto& fit : fits) {
    if (!fit.passed) return false;
  }
  return true;
}

namespace {

EntropyFit fit_series(int s, double t, const std::vector<const EntropyRow*>& rows,
                      const EntropyFitTolerances& tol) {
  EntropyFit fit;
  fit.s = s;
  fit.t = t;
  fit.regime = regime_of(t);
  fit.points = rows.size();
  const EntropyRow* last = rows.front();
  for (const auto* r : rows) {
    if (r->params.n > last->params.n) last = r;
  }
  fit.max_n = last->params.n;

  auto solve = [&](int columns) {
    Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), columns);
    Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const double n = rows[i]->params.n;
      const auto r = static_cast<Eigen::Index>(i);
      if (fit.regime == EntropyRegime::Linear) {
        a(r, 0) = n;
      } else {
        a(r, 0) = std::sqrt(n);
        a(r, 1) = std::log2(n);
      }
      a(r, columns - 1) = 1.0;
      b[r] = rows[i]->entropy_bits;
    }
    return Eigen::VectorXd(a.colPivHouseholderQr().solve(b));
  };

  switch (fit.regime) {
    case EntropyRegime::Linear: {
      if (rows.size() >= 2) {
        const auto x = solve(2);
        fit.slope = x[0];
        fit.intercept = x[1];
      }
      fit.statistic = last->entropy_bits / last->params.n;
      fit.reference = std::log2(static_cast<double>(s));
      fit.tolerance = tol.linear_rel;
      break;
    }
    case EntropyRegime::SquareRoot: {
      fit.reference = sqrt_coefficient_reference(s);
      fit.tolerance = tol.sqrt_rel;
      if (rows.size() < 3) {
        fit.caveat = "sqrt(n) fit needs at least three n values";
        return fit;
      }
      const auto x = solve(3);
      fit.slope = x[0];
      fit.log_coefficient = x[1];
      fit.intercept = x[2];
      fit.statistic = fit.slope;
      break;
    }
    case EntropyRegime::Bounded: {
      for (const auto* r : rows) fit.statistic = std::max(fit.statistic, r->entropy_bits);
      fit.reference = tol.bounded_bits;
      fit.tolerance = tol.bounded_bits;
      break;
    }
  }

  if (s < 2) {
    fit.caveat = "s = 1: the regime table covers s > 1 only; reported, not judged";
    return fit;
  }
  fit.judged = true;
  if (fit.regime == EntropyRegime::Bounded) {
    fit.relative_error = fit.statistic / fit.reference;
    fit.passed = fit.statistic < fit.reference;
  } else {
    fit.relative_error = std::abs(fit.statistic - fit.reference) / fit.reference;
    fit.passed = fit.relative_error <= fit.tolerance;
    fit.caveat = "finite-n trend check of an asymptotic statement";
  }
  return fit;
}

}  // namespace

EntropyScan entropy_scan(std::span<const ModelParams> grid, const EntropyFitTolerances& tolerances) {
  EntropyScan scan;
  scan.rows.reserve(grid.size());
  for (const auto& params : grid) {
    const auto weights = half_weights(params);
    EntropyRow row;
    row.params = params;
    row.entropy_bits = schmidt_entropy(weights).entropy_bits;
    row.mean_midpoint_height = midpoint_height_stats(weights).mean;
    scan.rows.push_back(row);
  }
  std::map<std::pair<int, double>, std::vector<const EntropyRow*>> series;
  for (const auto& row : scan.rows) series[{row.params.s, row.params.t}].push_back(&row);
  for (const auto& [key, rows] : series) scan.fits.push_back(fit_series(key.first, key.second, rows, tolerances));
  return scan;
}

}  // namespace motzkin
