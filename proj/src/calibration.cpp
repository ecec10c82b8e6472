#include "eloline/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "eloline/backtest.hpp"
#include "eloline/distribution.hpp"
#include "eloline/numeric.hpp"

namespace eloline {

MinBiasDistribution min_bias_survival(std::span<const GameRecord> games,
                                      const MarginLattice& lattice, ComparisonMode mode,
                                      double tie_credit) {
  lattice.validate();
  std::vector<double> pooled;
  pooled.reserve(2 * games.size());
  for (const GameRecord& game : games) {
    if (!game.played()) continue;
    double v = comparison_value(game, mode);
    pooled.push_back(v);
    pooled.push_back(2.0 * lattice.center - v);
  }
  if (pooled.empty()) throw std::invalid_argument("min-bias pool has no completed games");
  std::sort(pooled.begin(), pooled.end());

  MinBiasDistribution out;
  out.lattice = lattice;
  out.n_games = static_cast<long>(pooled.size() / 2);
  out.survival.resize(lattice.size());
  const double m = static_cast<double>(pooled.size());
  for (int i = 0; i < lattice.size(); ++i) {
    double l = lattice.line(i);
    auto [eq_lo, eq_hi] = std::equal_range(pooled.begin(), pooled.end(), l);
    double above = static_cast<double>(pooled.end() - eq_hi);
    double at = static_cast<double>(eq_hi - eq_lo);
    out.survival[i] = (above + tie_credit * at) / m;
  }
  out.survival = monotone_project(std::move(out.survival));
  return out;
}

std::vector<double> initial_ratings(const MinBiasDistribution& minbias, const HyperParams& hp) {
  hp.validate();
  if (minbias.n_games <= 0) throw std::invalid_argument("min-bias distribution is empty");
  double eps = 1.0 / (2.0 * static_cast<double>(minbias.n_games));
  double scale = std::sqrt(2.0) * hp.sigma / 2.0;
  std::vector<double> out(minbias.survival.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double p = std::clamp(minbias.survival[i], eps, 1.0 - eps);
    out[i] = hp.r0 + scale * num::erf_inv(2.0 * p - 1.0);
  }
  return out;
}

MarginLattice spread_lattice(int half_lines, double spacing) {
  MarginLattice lat{0.0, spacing, half_lines};
  lat.validate();
  return lat;
}

MarginLattice total_lattice(std::span<const GameRecord> games, int half_lines, double spacing) {
  double sum = 0.0;
  long n = 0;
  for (const GameRecord& game : games) {
    if (!game.played()) continue;
    sum += comparison_value(game, ComparisonMode::total);
    ++n;
  }
  if (n == 0) throw std::invalid_argument("total lattice needs at least one completed game");
  MarginLattice lat{spacing * std::round(sum / n / spacing), spacing, half_lines};
  lat.validate();
  return lat;
}

namespace {

double segment_average(const std::vector<double>& per_record, int folds) {
  const long n = static_cast<long>(per_record.size());
  const long base = n / folds;
  const long rem = n % folds;
  double acc = 0.0;
  int used = 0;
  long pos = 0;
  for (int f = 0; f < folds; ++f) {
    long len = base + (f < rem ? 1 : 0);
    if (len == 0) continue;
    double s = std::accumulate(per_record.begin() + pos, per_record.begin() + pos + len, 0.0);
    acc += s / static_cast<double>(len);
    ++used;
    pos += len;
  }
  return acc / used;
}

double ranked_probability_score(const BacktestRecord& rec) {
  const auto& s = rec.curve.probs;
  const auto& l = rec.curve.lines;
  const std::size_t n = s.size();
  double score = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cdf = 1.0 - s[i];
    double hit = rec.observed <= l[i] ? 1.0 : 0.0;
    double d = cdf - hit;
    score += d * d;
  }
  return score / static_cast<double>(n - 1);
}

double evaluate_candidate(std::span<const GameRecord> games, ComparisonMode mode,
                          const HyperParams& hp, TuneObjective objective, int folds,
                          int half_lines, double spacing, int burn_in_games) {
  const long burn = resolved_burn_in(games, burn_in_games);

  MarginLattice lattice;
  if (mode == ComparisonMode::spread) {
    lattice = spread_lattice(half_lines, spacing);
  } else {
    auto pool = burn > 0 ? games.first(burn) : games;
    lattice = total_lattice(pool, half_lines, spacing);
  }

  WalkForwardOptions opts;
  opts.burn_in_games = burn;
  opts.keep_curves = objective == TuneObjective::rps;
  opts.exec = Exec::serial;
  WalkForwardResult run = walk_forward(games, mode, hp, lattice, opts);
  if (run.records.empty()) return std::numeric_limits<double>::infinity();

  std::vector<double> per_record(run.records.size());
  for (std::size_t i = 0; i < run.records.size(); ++i) {
    const BacktestRecord& rec = run.records[i];
    per_record[i] = objective == TuneObjective::mae_median
                        ? std::abs(rec.observed - rec.median_pred)
                        : ranked_probability_score(rec);
  }
  return segment_average(per_record, folds);
}

double draw_in(num::Rng& rng, const ParamRange& range) {
  if (!(range.hi >= range.lo)) throw std::invalid_argument("tune range has hi < lo");
  if (range.hi == range.lo) return range.lo;
  return range.lo + num::uniform01(rng) * (range.hi - range.lo);
}

}  // namespace

TuneResult tune(std::span<const GameRecord> games, ComparisonMode mode,
                const HyperParams& base, const TuneSpace& space, TuneObjective objective,
                int n_candidates, int folds, std::uint64_t seed,
                int half_lines, double spacing, int burn_in_games, Exec exec) {
  if (n_candidates <= 0) throw std::invalid_argument("tune needs at least one candidate");
  if (folds <= 0) throw std::invalid_argument("tune needs at least one fold");
  if (!(space.kappa.lo > 0.0)) throw std::invalid_argument("kappa search range must be positive");

  auto rng = num::seeded(seed);
  std::vector<TuneCandidate> cands(n_candidates);
  for (int k = 0; k < n_candidates; ++k) {
    HyperParams hp = base;
    hp.kappa = draw_in(rng, space.kappa);
    hp.r_hfa = draw_in(rng, space.r_hfa);
    hp.regress_fraction = draw_in(rng, space.regress);
    hp.validate();
    cands[k].hp = hp;
    cands[k].index = k;
  }

  const bool parallel = exec == Exec::parallel && n_candidates > 1;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < n_candidates; ++k) {
    cands[k].objective = evaluate_candidate(games, mode, cands[k].hp, objective, folds,
                                            half_lines, spacing, burn_in_games);
  }

  TuneResult result;
  result.ranked = cands;
  std::stable_sort(result.ranked.begin(), result.ranked.end(),
                   [](const TuneCandidate& a, const TuneCandidate& b) {
                     return a.objective < b.objective;
                   });
  result.best = result.ranked.front().hp;
  return result;
}

}  // namespace eloline
