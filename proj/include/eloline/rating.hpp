#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eloline/exec.hpp"
#include "eloline/types.hpp"

namespace eloline {

// P(team beats opponent) for a rating difference, normal model:
// 1/2 [1 + erf(diff / (sqrt(2) sigma))]. Strictly increasing in diff.
// Throws std::invalid_argument for sigma <= 0.
double win_probability(double rating_diff, double sigma);

// 1 above the line, tie_credit on it, 0 below it.
double observed_outcome(double value, double line, double tie_credit);

// One Elo exchange: delta = kappa * (p_obs - P_exp), P_exp evaluated at
// r_team - r_opp + hfa_term. Returns (team, opp) post ratings; the two
// deltas cancel exactly.
std::pair<double, double> update_pair(double r_team, double r_opp, double p_obs,
                                      const HyperParams& hp, double hfa_term);

struct HistoryEntry {
  Date date;
  std::vector<double> ratings;  // one per lattice line
};

// Per-line Elo ratings for one comparison mode. Ingestion is a stateful
// fold over a date-ordered game stream; a completed book is immutable for
// readers and safe for concurrent prediction queries.
class RatingBook {
 public:
  RatingBook(ComparisonMode mode, MarginLattice lattice, HyperParams hp,
             std::vector<double> initial, bool record_history = true);

  ComparisonMode mode() const { return mode_; }
  const MarginLattice& lattice() const { return lattice_; }
  const HyperParams& params() const { return hp_; }
  const std::vector<double>& initial_ratings() const { return initial_; }
  bool history_enabled() const { return record_history_; }

  bool has_team(const std::string& team) const;
  // Current ratings; throws std::out_of_range for an unknown team.
  const std::vector<double>& ratings(const std::string& team) const;
  // Falls back to the initial per-line ratings for unseen teams.
  const std::vector<double>& ratings_or_initial(const std::string& team) const;
  std::vector<std::string> teams() const;  // sorted

  Date last_date() const { return last_date_; }
  int season() const { return season_; }
  bool empty() const { return current_.empty(); }

  const std::map<std::string, std::vector<double>>& current() const { return current_; }
  const std::map<std::string, std::vector<HistoryEntry>>& history() const { return history_; }

  // P(home outcome > line), home-field offset applied unless neutral.
  // line_value must be on the lattice.
  double expected_outcome(const std::string& home, const std::string& away,
                          double line_value, bool neutral = false) const;

  // Ingest games in nondecreasing date order. Games sharing a date are
  // simultaneous: all expectations come from the book as of the date start.
  // Unknown teams are initialized from the per-line initial ratings; season
  // label increases trigger regression toward those ratings.
  void rate_games(std::span<const GameRecord> games, Exec exec = Exec::parallel);
  void rate_game(const GameRecord& game);

  void ensure_team(const std::string& team);

  // One offseason step: new = initial + fraction * (current - initial).
  void regress_toward_initial(double fraction);

  // Snapshot restore (storage layer).
  void restore_state(std::map<std::string, std::vector<double>> current,
                     std::map<std::string, std::vector<HistoryEntry>> history,
                     Date last_date, int season);

 private:
  ComparisonMode mode_;
  MarginLattice lattice_;
  HyperParams hp_;
  std::vector<double> initial_;
  bool record_history_;

  std::map<std::string, std::vector<double>> current_;
  std::map<std::string, std::vector<HistoryEntry>> history_;
  Date last_date_{};
  int season_ = kNoSeason;

  static constexpr int kNoSeason = -2147483647;

  void rate_date_group(std::span<const GameRecord> group, Exec exec);
};

}  // namespace eloline
