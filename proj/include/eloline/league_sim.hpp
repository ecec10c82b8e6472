#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace eloline {

struct PoissonTeam {
  std::string label;
  double lambda = 0.0;  // mean points per game, > 0
};

// The nine-team league with lambda = 11, 13, ..., 27.
std::vector<PoissonTeam> nine_team_league();

// P(A beats B) for Poisson scorers, ties credited 1/2. Closed-form double
// sum truncated once the remaining tail mass is below 1e-12.
double exact_poisson_win_rate(double lambda_a, double lambda_b);

struct ToyLeagueResult {
  std::vector<PoissonTeam> teams;
  RatingBook book;  // single line at zero, binary win/loss
  std::vector<double> oracle_rate;     // exact rate vs the reference opponent
  std::vector<double> tail_mean_rate;  // predicted rate averaged over the final 10%
  struct Sample {
    long game_index;
    std::vector<double> predicted_rate;
  };
  std::vector<Sample> trajectory;
  std::vector<GameRecord> games;  // filled when export_games is true
};

// Uniformly random pairings, Poisson scores, binary Elo updates (line 0,
// ties 1/2, no home advantage). Trajectories record each team's predicted
// win rate against the reference-lambda team's instantaneous rating.
// Exported games carry one synthetic date per game and a constant season.
ToyLeagueResult run_toy_league(const std::vector<PoissonTeam>& teams, long n_games,
                               const HyperParams& hp, std::uint64_t seed,
                               double ref_lambda = 19.0, long record_every = 10000,
                               bool export_games = false);

// Random weekly pairings: every team plays once per round (one bye slot if
// the team count is odd), venue sides seeded. Dates advance one step per
// round within the season.
std::vector<GameRecord> random_schedule(const std::vector<std::string>& teams, int rounds,
                                        int season, std::uint64_t seed);

// For each scheduled matchup, sample a spread and a total from the books'
// predicted pmfs and reconstruct integer scores. Pairs with mismatched
// parity or total < |spread| are resampled up to max_retries, then the
// total is nudged up to the nearest consistent value. Deterministic per seed.
std::vector<GameRecord> generate_synthetic_season(const RatingBook& spread_book,
                                                  const RatingBook& total_book,
                                                  std::span<const GameRecord> schedule,
                                                  std::uint64_t seed, int max_retries = 16);

}  // namespace eloline
