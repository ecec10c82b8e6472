#include "eloline/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "eloline/calibration.hpp"
#include "eloline/numeric.hpp"

namespace eloline {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

int bin_of(std::span<const double> edges, double v) {
  if (v < edges.front() || v >= edges.back()) return -1;
  return static_cast<int>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin() - 1);
}

HistogramRatio ratio_from_counts(std::span<const double> edges, std::vector<long> biased,
                                 std::vector<long> sym) {
  const std::size_t k = biased.size();
  HistogramRatio out;
  out.bin_lo.resize(k);
  out.bin_hi.resize(k);
  out.ratio.resize(k);
  out.sigma.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    out.bin_lo[i] = edges[i];
    out.bin_hi[i] = edges[i + 1];
    double b = static_cast<double>(biased[i]);
    double m = static_cast<double>(sym[i]);
    if (b + m > 0.0) {
      out.ratio[i] = 2.0 * b / (b + m);
      out.sigma[i] = 2.0 * std::sqrt(b * m) / std::pow(b + m, 1.5);
    } else {
      out.ratio[i] = kNan;
      out.sigma[i] = kNan;
    }
  }
  out.count_biased = std::move(biased);
  out.count_sym = std::move(sym);
  return out;
}

void require_edges(std::span<const double> edges) {
  if (edges.size() < 2) throw std::invalid_argument("need at least two bin edges");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (!(edges[i] < edges[i + 1])) throw std::invalid_argument("bin edges must increase");
  }
}

}  // namespace

long resolved_burn_in(std::span<const GameRecord> games, long requested) {
  const long n = static_cast<long>(games.size());
  if (requested >= 0) return std::min(requested, n);
  long burn = 0;
  while (burn < n && games[burn].season == games[0].season) ++burn;
  return burn;
}

WalkForwardResult walk_forward(std::span<const GameRecord> games, ComparisonMode mode,
                               const HyperParams& hp, const MarginLattice& lattice,
                               const WalkForwardOptions& opts) {
  hp.validate();
  lattice.validate();
  const long n = static_cast<long>(games.size());
  for (long i = 0; i < n; ++i) {
    if (!games[i].played()) {
      throw std::invalid_argument("walk-forward requires completed games; " + games[i].home +
                                  " vs " + games[i].away + " on " + games[i].date.str() +
                                  " has no score");
    }
    if (i > 0 && games[i].date < games[i - 1].date) {
      throw std::invalid_argument("walk-forward games must be sorted by date");
    }
  }

  const long burn = resolved_burn_in(games, opts.burn_in_games);
  std::vector<double> initial;
  if (burn > 0) {
    auto minbias = min_bias_survival(games.first(burn), lattice, mode, hp.tie_credit);
    initial = initial_ratings(minbias, hp);
  } else {
    initial.assign(lattice.size(), hp.r0);
  }

  WalkForwardResult out{{}, RatingBook(mode, lattice, hp, std::move(initial), false), burn};
  out.records.resize(n - burn);

  long start = burn;
  while (start < n) {
    long stop = start + 1;
    while (stop < n && games[stop].date == games[start].date) ++stop;
    const long count = stop - start;
    const bool parallel = opts.exec == Exec::parallel && count >= 8;
#pragma omp parallel for schedule(static) if (parallel)
    for (long g = start; g < stop; ++g) {
      const GameRecord& game = games[g];
      BacktestRecord& rec = out.records[g - burn];
      rec.game = game;
      SurvivalCurve curve =
          predict_survival(out.book, game.home, game.away, game.date, game.neutral_site);
      rec.observed = comparison_value(game, mode);
      rec.median_pred = median(curve);
      rec.mean_pred = mean_from_survival(curve);
      rec.percentile = observed_percentile(curve, rec.observed);
      if (opts.keep_curves) rec.curve = std::move(curve);
    }
    out.book.rate_games(games.subspan(start, count), opts.exec);
    start = stop;
  }
  return out;
}

MaeSummary mean_absolute_error(std::span<const BacktestRecord> records,
                               PointEstimator est, double baseline_value) {
  if (records.empty()) throw std::invalid_argument("MAE needs at least one record");
  MaeSummary out;
  for (const BacktestRecord& rec : records) {
    double pred = est == PointEstimator::median ? rec.median_pred : rec.mean_pred;
    out.model += std::abs(rec.observed - pred);
    out.baseline += std::abs(rec.observed - baseline_value);
    ++out.n;
  }
  out.model /= static_cast<double>(out.n);
  out.baseline /= static_cast<double>(out.n);
  return out;
}

std::map<int, MaeSummary> mean_absolute_error_by_season(std::span<const BacktestRecord> records,
                                                        PointEstimator est,
                                                        double baseline_value) {
  std::map<int, std::vector<BacktestRecord>> buckets;
  for (const BacktestRecord& rec : records) buckets[rec.game.season].push_back(rec);
  std::map<int, MaeSummary> out;
  for (const auto& [season, recs] : buckets) {
    out[season] = mean_absolute_error(recs, est, baseline_value);
  }
  return out;
}

PercentileDiagnostic percentile_diagnostic(std::span<const double> percentiles, int n_mc,
                                           std::uint64_t seed, Exec exec) {
  const long n = static_cast<long>(percentiles.size());
  if (n == 0) throw std::invalid_argument("diagnostic needs at least one percentile");
  if (n_mc < 40) throw std::invalid_argument("diagnostic band needs n_mc >= 40");

  PercentileDiagnostic out;
  out.sorted_percentiles.assign(percentiles.begin(), percentiles.end());
  std::sort(out.sorted_percentiles.begin(), out.sorted_percentiles.end());
  out.expected.resize(n);
  out.deviation.resize(n);
  for (long i = 0; i < n; ++i) {
    out.expected[i] = static_cast<double>(i + 1) / static_cast<double>(n + 1);
    out.deviation[i] = out.sorted_percentiles[i] - out.expected[i];
    out.max_abs_deviation = std::max(out.max_abs_deviation, std::abs(out.deviation[i]));
  }

  // Order statistics of n_mc seeded uniform samples of the same size.
  std::vector<double> mat(static_cast<std::size_t>(n_mc) * n);
  const bool parallel = exec == Exec::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int run = 0; run < n_mc; ++run) {
    auto rng = num::seeded(seed, static_cast<std::uint64_t>(run));
    double* row = mat.data() + static_cast<std::size_t>(run) * n;
    for (long i = 0; i < n; ++i) row[i] = num::uniform01(rng);
    std::sort(row, row + n);
  }

  const int k_lo = static_cast<int>(std::floor(0.025 * (n_mc - 1)));
  const int k_hi = static_cast<int>(std::ceil(0.975 * (n_mc - 1)));
  out.band_lo.resize(n);
  out.band_hi.resize(n);
#pragma omp parallel for schedule(static) if (parallel)
  for (long rank = 0; rank < n; ++rank) {
    std::vector<double> col(n_mc);
    for (int run = 0; run < n_mc; ++run) {
      col[run] = mat[static_cast<std::size_t>(run) * n + rank];
    }
    std::nth_element(col.begin(), col.begin() + k_lo, col.end());
    double q_lo = col[k_lo];
    std::nth_element(col.begin(), col.begin() + k_hi, col.end());
    double q_hi = col[k_hi];
    out.band_lo[rank] = q_lo - out.expected[rank];
    out.band_hi[rank] = q_hi - out.expected[rank];
  }

  long within = 0;
  for (long i = 0; i < n; ++i) {
    if (out.deviation[i] >= out.band_lo[i] && out.deviation[i] <= out.band_hi[i]) ++within;
  }
  out.frac_within_band = static_cast<double>(within) / static_cast<double>(n);
  return out;
}

PercentileDiagnostic broken_model_control(std::span<const BacktestRecord> records, int n_mc,
                                          std::uint64_t permute_seed, std::uint64_t band_seed,
                                          Exec exec) {
  const std::size_t n = records.size();
  if (n < 2) throw std::invalid_argument("control needs at least two records");
  for (const BacktestRecord& rec : records) {
    if (rec.curve.probs.empty()) {
      throw std::invalid_argument("control needs records with retained curves");
    }
  }
  auto rng = num::seeded(permute_seed);
  std::size_t shift = 1 + num::uniform_below(rng, n - 1);
  std::vector<double> scrambled(n);
  for (std::size_t i = 0; i < n; ++i) {
    scrambled[i] = observed_percentile(records[(i + shift) % n].curve, records[i].observed);
  }
  return percentile_diagnostic(scrambled, n_mc, band_seed, exec);
}

HistogramRatio home_field_ratio(std::span<const GameRecord> games,
                                std::span<const double> edges) {
  require_edges(edges);
  const std::size_t k = edges.size() - 1;
  std::vector<long> biased(k, 0), sym(k, 0);
  for (const GameRecord& game : games) {
    if (!game.played() || game.neutral_site) continue;
    double v = comparison_value(game, ComparisonMode::spread);
    if (int b = bin_of(edges, v); b >= 0) ++biased[b];
    if (int b = bin_of(edges, -v); b >= 0) ++sym[b];
  }
  return ratio_from_counts(edges, std::move(biased), std::move(sym));
}

HistogramRatio model_home_field_ratio(std::span<const BacktestRecord> records, int n_samples,
                                      std::uint64_t seed, std::span<const double> edges,
                                      Exec exec) {
  require_edges(edges);
  if (n_samples <= 0) throw std::invalid_argument("need at least one sample per record");
  const std::size_t k = edges.size() - 1;
  const long n = static_cast<long>(records.size());
  std::vector<long> biased(k, 0), sym(k, 0);
  const bool parallel = exec == Exec::parallel && n > 1;

#pragma omp parallel if (parallel)
  {
    std::vector<long> local_biased(k, 0), local_sym(k, 0);
#pragma omp for schedule(static) nowait
    for (long r = 0; r < n; ++r) {
      const BacktestRecord& rec = records[r];
      if (rec.game.neutral_site) continue;
      if (rec.curve.probs.empty()) continue;
      Pmf pmf = pmf_from_survival(rec.curve);
      std::vector<double> cum(pmf.masses.size());
      double acc = 0.0;
      for (std::size_t i = 0; i < pmf.masses.size(); ++i) {
        acc += pmf.masses[i];
        cum[i] = acc;
      }
      auto rng = num::seeded(seed, static_cast<std::uint64_t>(r));
      for (int s = 0; s < n_samples; ++s) {
        double u = num::uniform01(rng);
        std::size_t idx = static_cast<std::size_t>(
            std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
        if (idx >= pmf.support.size()) idx = pmf.support.size() - 1;
        double v = pmf.support[idx];
        if (int b = bin_of(edges, v); b >= 0) ++local_biased[b];
        if (int b = bin_of(edges, -v); b >= 0) ++local_sym[b];
      }
    }
#pragma omp critical
    {
      for (std::size_t i = 0; i < k; ++i) {
        biased[i] += local_biased[i];
        sym[i] += local_sym[i];
      }
    }
  }
  return ratio_from_counts(edges, std::move(biased), std::move(sym));
}

}  // namespace eloline
