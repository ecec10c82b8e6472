#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "eloline/distribution.hpp"
#include "eloline/exec.hpp"
#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace eloline {

struct BacktestRecord {
  GameRecord game;
  double observed = 0.0;    // comparison value in book mode
  double median_pred = 0.0;
  double mean_pred = 0.0;
  double percentile = 0.0;  // of the observed value under the predicted curve
  SurvivalCurve curve;      // kept when walk_forward is asked to retain curves
};

struct WalkForwardOptions {
  long burn_in_games = -1;  // -1: one full season's worth decided by first season boundary
  bool keep_curves = false;
  Exec exec = Exec::parallel;
};

struct WalkForwardResult {
  std::vector<BacktestRecord> records;
  RatingBook book;       // state after the last rated game
  long burn_in_used = 0;
};

// Burn-in prefix length actually used: `requested` clamped to the stream,
// or the first-season prefix when requested is negative.
long resolved_burn_in(std::span<const GameRecord> games, long requested);

// Chronological replay: the burn-in prefix seeds the initial-rating
// construction and is never rated or scored; afterwards every game is
// predicted from ratings that exclude its own date, then all games sharing
// a date are rated together. Season changes regress ratings first.
WalkForwardResult walk_forward(std::span<const GameRecord> games, ComparisonMode mode,
                               const HyperParams& hp, const MarginLattice& lattice,
                               const WalkForwardOptions& opts = {});

struct MaeSummary {
  double model = 0.0;
  double baseline = 0.0;  // always-zero prediction (or lattice center for totals)
  long n = 0;
};

enum class PointEstimator { median, mean };

MaeSummary mean_absolute_error(std::span<const BacktestRecord> records,
                               PointEstimator est, double baseline_value = 0.0);

std::map<int, MaeSummary> mean_absolute_error_by_season(std::span<const BacktestRecord> records,
                                                        PointEstimator est,
                                                        double baseline_value = 0.0);

struct PercentileDiagnostic {
  std::vector<double> sorted_percentiles;
  std::vector<double> expected;   // rank i -> i / (n + 1)
  std::vector<double> deviation;  // sorted - expected
  std::vector<double> band_lo;    // per-rank 2.5% envelope from uniform MC
  std::vector<double> band_hi;    // per-rank 97.5% envelope
  double max_abs_deviation = 0.0;
  double frac_within_band = 0.0;
};

// Compares the sorted observed percentiles against order statistics of
// n_mc uniform samples of the same size. Seeded, deterministic.
PercentileDiagnostic percentile_diagnostic(std::span<const double> percentiles, int n_mc,
                                           std::uint64_t seed, Exec exec = Exec::parallel);

// Negative control: re-scores each record's observed value against another
// record's curve (a seeded derangement-style shuffle), which should push
// percentiles far outside the band when predictions carry real signal.
PercentileDiagnostic broken_model_control(std::span<const BacktestRecord> records, int n_mc,
                                          std::uint64_t permute_seed, std::uint64_t band_seed,
                                          Exec exec = Exec::parallel);

struct HistogramRatio {
  std::vector<double> bin_lo;
  std::vector<double> bin_hi;
  std::vector<double> ratio;   // biased / symmetrized, per bin
  std::vector<double> sigma;   // delta-method standard error
  std::vector<long> count_biased;
  std::vector<long> count_sym;
};

// Observed home-minus-away values binned twice: as-is, and pooled with the
// negated sample to force symmetry. Ratio of the two normalized histograms
// exposes the home-side shift.
HistogramRatio home_field_ratio(std::span<const GameRecord> games,
                                std::span<const double> edges);

// Same ratio built from model samples: each record contributes n_samples
// draws from its predicted curve instead of one observed value.
HistogramRatio model_home_field_ratio(std::span<const BacktestRecord> records, int n_samples,
                                      std::uint64_t seed, std::span<const double> edges,
                                      Exec exec = Exec::parallel);

}  // namespace eloline
