#include "eloline/rating.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "eloline/numeric.hpp"

namespace eloline {

namespace {

// Group work (games x lines) below this runs serially; the parallel region
// is not worth spawning for a handful of updates.
constexpr long kParallelGrain = 1024;

}  // namespace

double win_probability(double rating_diff, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  return num::normal_cdf(rating_diff / sigma);
}

double observed_outcome(double value, double line, double tie_credit) {
  if (value > line) return 1.0;
  if (value == line) return tie_credit;
  return 0.0;
}

std::pair<double, double> update_pair(double r_team, double r_opp, double p_obs,
                                      const HyperParams& hp, double hfa_term) {
  double p_exp = win_probability(r_team - r_opp + hfa_term, hp.sigma);
  double delta = hp.kappa * (p_obs - p_exp);
  return {r_team + delta, r_opp - delta};
}

RatingBook::RatingBook(ComparisonMode mode, MarginLattice lattice, HyperParams hp,
                       std::vector<double> initial, bool record_history)
    : mode_(mode),
      lattice_(lattice),
      hp_(hp),
      initial_(std::move(initial)),
      record_history_(record_history) {
  lattice_.validate();
  hp_.validate();
  if (static_cast<int>(initial_.size()) != lattice_.size()) {
    throw std::invalid_argument("initial ratings size " + std::to_string(initial_.size()) +
                                " does not match lattice size " +
                                std::to_string(lattice_.size()));
  }
}

bool RatingBook::has_team(const std::string& team) const { return current_.contains(team); }

const std::vector<double>& RatingBook::ratings(const std::string& team) const {
  auto it = current_.find(team);
  if (it == current_.end()) throw std::out_of_range("unknown team '" + team + "'");
  return it->second;
}

const std::vector<double>& RatingBook::ratings_or_initial(const std::string& team) const {
  auto it = current_.find(team);
  return it == current_.end() ? initial_ : it->second;
}

std::vector<std::string> RatingBook::teams() const {
  std::vector<std::string> out;
  out.reserve(current_.size());
  for (const auto& [name, _] : current_) out.push_back(name);
  return out;
}

double RatingBook::expected_outcome(const std::string& home, const std::string& away,
                                    double line_value, bool neutral) const {
  const auto& rh = ratings_or_initial(home);
  const auto& ra = ratings_or_initial(away);
  int i = lattice_.index_of(line_value);
  double hfa = neutral ? 0.0 : hp_.r_hfa;
  return win_probability(rh[i] - ra[lattice_.mirror(i)] + hfa, hp_.sigma);
}

void RatingBook::ensure_team(const std::string& team) {
  current_.try_emplace(team, initial_);
}

void RatingBook::regress_toward_initial(double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) {
    throw std::invalid_argument("regress fraction must lie in [0, 1]");
  }
  for (auto& [_, r] : current_) {
    for (int i = 0; i < lattice_.size(); ++i) {
      r[i] = initial_[i] + fraction * (r[i] - initial_[i]);
    }
  }
}

void RatingBook::rate_games(std::span<const GameRecord> games, Exec exec) {
  std::size_t start = 0;
  while (start < games.size()) {
    std::size_t stop = start + 1;
    while (stop < games.size() && games[stop].date == games[start].date) ++stop;
    const GameRecord& first = games[start];
    if (last_date_ != Date() && first.date < last_date_) {
      throw std::invalid_argument("games not in date order at " + first.date.str());
    }
    if (season_ != kNoSeason && first.season < season_) {
      throw std::invalid_argument("season decreases at " + first.date.str());
    }
    if (season_ != kNoSeason && first.season > season_) {
      regress_toward_initial(hp_.regress_fraction);
    }
    season_ = first.season;
    rate_date_group(games.subspan(start, stop - start), exec);
    last_date_ = first.date;
    start = stop;
  }
}

void RatingBook::rate_game(const GameRecord& game) { rate_games({&game, 1}); }

void RatingBook::rate_date_group(std::span<const GameRecord> group, Exec exec) {
  const long n_games = static_cast<long>(group.size());
  const int n_lines = lattice_.size();

  struct GameSlot {
    double value;
    double hfa;
    const double* home;
    const double* away;
  };
  std::vector<GameSlot> slots(n_games);
  for (long g = 0; g < n_games; ++g) {
    const GameRecord& game = group[g];
    ensure_team(game.home);
    ensure_team(game.away);
    slots[g] = {comparison_value(game, mode_), game.neutral_site ? 0.0 : hp_.r_hfa,
                current_.find(game.home)->second.data(),
                current_.find(game.away)->second.data()};
  }

  // Phase 1: every delta from the date-start snapshot, disjoint slots.
  std::vector<double> delta(static_cast<std::size_t>(n_games) * n_lines);
  const long total = n_games * n_lines;
  const double sigma = hp_.sigma;
  const double kappa = hp_.kappa;
  const double tie_credit = hp_.tie_credit;

  auto body = [&](long k) {
    long g = k / n_lines;
    int i = static_cast<int>(k % n_lines);
    const GameSlot& s = slots[g];
    double p_obs = observed_outcome(s.value, lattice_.line(i), tie_credit);
    double p_exp = win_probability(s.home[i] - s.away[lattice_.mirror(i)] + s.hfa, sigma);
    delta[static_cast<std::size_t>(k)] = kappa * (p_obs - p_exp);
  };
  if (exec == Exec::parallel && total >= kParallelGrain) {
#pragma omp parallel for schedule(static)
    for (long k = 0; k < total; ++k) body(k);
  } else {
    for (long k = 0; k < total; ++k) body(k);
  }

  // Phase 2: serial application in group order. A team's line-n gain is the
  // opponent's mirror-line loss, so every line pair conserves rating exactly.
  for (long g = 0; g < n_games; ++g) {
    auto& rh = current_.find(group[g].home)->second;
    auto& ra = current_.find(group[g].away)->second;
    const double* d = delta.data() + static_cast<std::size_t>(g) * n_lines;
    for (int i = 0; i < n_lines; ++i) {
      rh[i] += d[i];
      ra[lattice_.mirror(i)] -= d[i];
    }
  }

  if (record_history_) {
    std::set<std::string> touched;
    for (const GameRecord& game : group) {
      touched.insert(game.home);
      touched.insert(game.away);
    }
    for (const std::string& team : touched) {
      history_[team].push_back({group.front().date, current_.find(team)->second});
    }
  }
}

void RatingBook::restore_state(std::map<std::string, std::vector<double>> current,
                               std::map<std::string, std::vector<HistoryEntry>> history,
                               Date last_date, int season) {
  for (const auto& [name, r] : current) {
    if (static_cast<int>(r.size()) != lattice_.size()) {
      throw std::invalid_argument("restored ratings for '" + name + "' have wrong size");
    }
  }
  current_ = std::move(current);
  history_ = std::move(history);
  last_date_ = last_date;
  season_ = season;
}

}  // namespace eloline
