#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eloline/exec.hpp"
#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace eloline {

// Empirical P(value > line) per lattice line, team identities ignored.
// Every game value is pooled together with its reflection through the
// lattice center, so the curve is complement-symmetric about the center
// (for spreads this is exactly both-orientations pooling).
struct MinBiasDistribution {
  MarginLattice lattice;
  std::vector<double> survival;
  long n_games = 0;
};

// Throws std::invalid_argument when no completed game is in the pool.
MinBiasDistribution min_bias_survival(std::span<const GameRecord> games,
                                      const MarginLattice& lattice, ComparisonMode mode,
                                      double tie_credit = 0.5);

// Per-line starting ratings reproducing the min-bias survival:
// R_init(i) = r0 + (sqrt(2) sigma / 2) erf_inv(2 p_i - 1), with p clamped to
// [eps, 1-eps], eps = 1/(2 n_games). Mirror-symmetric about r0.
std::vector<double> initial_ratings(const MinBiasDistribution& minbias, const HyperParams& hp);

// Lattice constructors. Spread lines are centered on zero; total lines are
// centered on the rounded mean total of the pool.
MarginLattice spread_lattice(int half_lines = 50, double spacing = 1.0);
MarginLattice total_lattice(std::span<const GameRecord> games, int half_lines = 50,
                            double spacing = 1.0);

struct ParamRange {
  double lo = 0.0;
  double hi = 0.0;
};

struct TuneSpace {
  ParamRange kappa{1.0, 100.0};
  ParamRange r_hfa{0.0, 0.0};
  ParamRange regress{1.0, 1.0};
};

enum class TuneObjective { mae_median, rps };

struct TuneCandidate {
  HyperParams hp;
  double objective = 0.0;
  int index = 0;  // generation order, ties keep the earlier candidate
};

struct TuneResult {
  HyperParams best;
  std::vector<TuneCandidate> ranked;  // ascending objective, stable in index
};

// Seeded random search: n_candidates draws uniform in the space, each
// scored by a walk-forward backtest objective averaged over `folds`
// contiguous record segments. sigma, r0, tie_credit come from `base`.
TuneResult tune(std::span<const GameRecord> games, ComparisonMode mode,
                const HyperParams& base, const TuneSpace& space, TuneObjective objective,
                int n_candidates, int folds, std::uint64_t seed,
                int half_lines = 50, double spacing = 1.0, int burn_in_games = -1,
                Exec exec = Exec::parallel);

}  // namespace eloline
