#ifndef MOTZKIN_ENTROPY_HPP
#define MOTZKIN_ENTROPY_HPP

#include <span>
#include <string>
#include <vector>

#include "motzkin/params.hpp"

namespace motzkin {

/// Left half-walk weights. log_d[m] = log of the sum of t^{2 A_L} * s^{#downs}
/// over length-n prefixes from height 0 to height m that stay >= 0.
struct HalfWeights {
  ModelParams params;
  std::vector<double> log_d;
};

HalfWeights half_weights(const ModelParams& params);

/// Same DP run over reversed right halves (steps read back from site 2n).
/// Equal to half_weights by reflection; kept separate so that is testable.
HalfWeights right_half_weights(const ModelParams& params);

struct SchmidtLevel {
  int m = 0;
  double p = 0.0;      // each of the s^m degenerate coefficients
  double log_p = 0.0;
  double log_multiplicity = 0.0;  // m ln s
};

struct SchmidtSpectrum {
  ModelParams params;
  std::vector<SchmidtLevel> levels;
  double log_norm = 0.0;  // ln sum_m s^m D(m)^2, equals ln Z
  double entropy_bits = 0.0;

  /// sum_m s^m p_m
  double total_weight() const;
};

SchmidtSpectrum schmidt_entropy(const ModelParams& params);
SchmidtSpectrum schmidt_entropy(const HalfWeights& weights);

struct MidpointStats {
  std::vector<double> distribution;  // over m = 0..n, proportional to s^m D(m)^2
  double mean = 0.0;
};

MidpointStats midpoint_height_stats(const HalfWeights& weights);
MidpointStats midpoint_height_stats(const ModelParams& params);

struct EntropyRow {
  ModelParams params;
  double entropy_bits = 0.0;
  double mean_midpoint_height = 0.0;
};

enum class EntropyRegime { Linear, SquareRoot, Bounded };

std::string to_string(EntropyRegime regime);
EntropyRegime regime_of(double t);

struct EntropyFitTolerances {
  double linear_rel = 0.10;  // S_n/n against log2 s at the largest n
  double sqrt_rel = 0.25;    // sqrt(n) coefficient against 2 log2(s) sqrt(2 sigma/pi)
  double bounded_bits = 3.0;
};

/// Regression diagnostics for one (s, t) series.
///  Linear:     least-squares slope of S_n on n, and S_n/n at the largest n, against log2 s.
///  SquareRoot: fit S_n = a sqrt(n) + b log2(n) + c, a against 2 log2(s) sqrt(2 sigma/pi),
///              sigma = sqrt(s)/(2 sqrt(s) + 1).
///  Bounded:    max_n S_n against a fixed number of bits.
/// Only s >= 2 series are judged; s = 1 has a zero reference and gets a caveat.
struct EntropyFit {
  int s = 1;
  double t = 1.0;
  EntropyRegime regime = EntropyRegime::Bounded;
  std::size_t points = 0;
  int max_n = 0;
  double slope = 0.0;             // Linear: dS/dn. SquareRoot: a
  double log_coefficient = 0.0;   // SquareRoot: b
  double intercept = 0.0;
  double statistic = 0.0;         // S/n at max_n, a, or max S_n
  double reference = 0.0;
  double relative_error = 0.0;
  double tolerance = 0.0;
  bool judged = false;
  bool passed = true;
  std::string caveat;
};

struct EntropyScan {
  std::vector<EntropyRow> rows;
  std::vector<EntropyFit> fits;
  bool passed() const;
};

/// Rows in grid order; one fit per distinct (s, t).
EntropyScan entropy_scan(std::span<const ModelParams> grid, const EntropyFitTolerances& tolerances = {});

double sqrt_coefficient_reference(int s);

}  // namespace motzkin

#endif  // MOTZKIN_ENTROPY_HPP
