#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace eloline {

// Full prediction for one matchup: P(value > line) per line, nonincreasing.
struct SurvivalCurve {
  std::vector<double> lines;  // strictly increasing
  std::vector<double> probs;  // same length, in [0,1], nonincreasing

  std::string home;
  std::string away;
  Date date;
  ComparisonMode mode = ComparisonMode::spread;
  double hfa_applied = 0.0;
};

// Discrete distribution on the lattice lines. Mass between consecutive
// lines is assigned to the upper line (exact for integer outcomes on a
// unit lattice); tail mass beyond either end goes to the end line.
struct Pmf {
  std::vector<double> support;
  std::vector<double> masses;  // nonnegative, sums to 1
};

// Pointwise-closest nonincreasing sequence under squared error
// (pool-adjacent-violators), clipped to [0,1]. Idempotent.
std::vector<double> monotone_project(std::vector<double> raw);

// Raw curve win_probability(R_home(n) - R_away(mirror n) + hfa, sigma) at
// every lattice line, then monotone projection. Unseen teams use the
// book's initial ratings.
SurvivalCurve predict_survival(const RatingBook& book, const std::string& home,
                               const std::string& away, Date date, bool neutral = false);

// Throws std::invalid_argument if the curve is not monotone.
Pmf pmf_from_survival(const SurvivalCurve& curve);

// Line whose survival is closest to 1/2; an exact two-sided tie is broken
// by interpolating to the 1/2 crossing.
double median(const SurvivalCurve& curve);

double mean(const Pmf& pmf);

// Summation-by-parts form: lines[0] + sum_i probs[i] * (lines[i+1] - lines[i]).
// Agrees with mean(pmf_from_survival(curve)) to rounding.
double mean_from_survival(const SurvivalCurve& curve);

// Inverts the survival curve at survival = 1-q with linear interpolation
// between lines; q in (0,1).
double quantile(const SurvivalCurve& curve, double q);

// P(lo < value <= hi) = P(value > lo) - P(value > hi); requires lo < hi.
double interval_probability(const SurvivalCurve& curve, double lo, double hi);

// Survival evaluated at an arbitrary value (linear between lines, clamped
// outside the span).
double survival_at(const SurvivalCurve& curve, double value);

// Fraction of the predicted distribution below the observation, counting
// half of any mass exactly on it: 1 - survival_at(curve, observed).
double observed_percentile(const SurvivalCurve& curve, double observed);

// Mean points scored / allowed from the spread and total means:
// (1/2 (total + spread), 1/2 (total - spread)).
std::pair<double, double> orthogonal_points(double spread_mean, double total_mean);

}  // namespace eloline
