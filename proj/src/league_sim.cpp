#include "eloline/league_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "eloline/distribution.hpp"
#include "eloline/numeric.hpp"

namespace eloline {

namespace {

std::vector<double> poisson_pmf(double lambda) {
  if (!(lambda > 0.0 && lambda < 700.0)) {
    throw std::invalid_argument("poisson lambda must lie in (0, 700)");
  }
  std::vector<double> pmf;
  double term = std::exp(-lambda);
  pmf.push_back(term);
  for (int i = 1; term > 1e-18 || i < lambda; ++i) {
    term *= lambda / i;
    pmf.push_back(term);
    if (i > 100000) break;
  }
  return pmf;
}

std::size_t sample_pmf(const std::vector<double>& cum, double u) {
  std::size_t idx = static_cast<std::size_t>(
      std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
  return std::min(idx, cum.size() - 1);
}

}  // namespace

std::vector<PoissonTeam> nine_team_league() {
  std::vector<PoissonTeam> teams;
  for (int lam = 11; lam <= 27; lam += 2) {
    teams.push_back({"team-" + std::to_string(lam), static_cast<double>(lam)});
  }
  return teams;
}

double exact_poisson_win_rate(double lambda_a, double lambda_b) {
  std::vector<double> pa = poisson_pmf(lambda_a);
  std::vector<double> pb = poisson_pmf(lambda_b);
  std::vector<double> cdf_b(pb.size());
  std::partial_sum(pb.begin(), pb.end(), cdf_b.begin());

  double win = 0.0;
  for (std::size_t i = 1; i < pa.size(); ++i) {
    std::size_t j = std::min(i - 1, cdf_b.size() - 1);
    win += pa[i] * cdf_b[j];
  }
  double tie = 0.0;
  for (std::size_t i = 0; i < std::min(pa.size(), pb.size()); ++i) tie += pa[i] * pb[i];
  return win + 0.5 * tie;
}

ToyLeagueResult run_toy_league(const std::vector<PoissonTeam>& teams, long n_games,
                               const HyperParams& hp, std::uint64_t seed,
                               double ref_lambda, long record_every, bool export_games) {
  if (teams.size() < 2) throw std::invalid_argument("toy league needs at least two teams");
  if (n_games < 1) throw std::invalid_argument("toy league needs at least one game");
  if (record_every < 1) throw std::invalid_argument("record_every must be positive");
  {
    std::set<std::string> labels;
    for (const PoissonTeam& t : teams) {
      if (!(t.lambda > 0.0)) throw std::invalid_argument("team lambda must be positive");
      if (!labels.insert(t.label).second) {
        throw std::invalid_argument("duplicate team label '" + t.label + "'");
      }
    }
  }
  std::size_t ref = teams.size();
  for (std::size_t t = 0; t < teams.size(); ++t) {
    if (teams[t].lambda == ref_lambda) {
      ref = t;
      break;
    }
  }
  if (ref == teams.size()) {
    throw std::invalid_argument("no team carries the reference lambda");
  }

  const std::size_t n_teams = teams.size();
  MarginLattice lattice{0.0, 1.0, 0};
  HyperParams hp0 = hp;
  hp0.r_hfa = 0.0;
  ToyLeagueResult out{teams,
                      RatingBook(ComparisonMode::spread, lattice, hp0, {hp0.r0}, false),
                      {},
                      {},
                      {},
                      {}};
  for (const PoissonTeam& t : teams) out.book.ensure_team(t.label);

  out.oracle_rate.resize(n_teams);
  for (std::size_t t = 0; t < n_teams; ++t) {
    out.oracle_rate[t] = exact_poisson_win_rate(teams[t].lambda, ref_lambda);
  }

  // Stable pointers into the book; std::map never relocates values.
  std::vector<const double*> rating(n_teams);
  for (std::size_t t = 0; t < n_teams; ++t) rating[t] = out.book.ratings(teams[t].label).data();

  auto predicted = [&](std::size_t t) {
    return win_probability(*rating[t] - *rating[ref], hp0.sigma);
  };

  auto rng = num::seeded(seed);
  Date date(2000, 1, 1);
  const long tail_start = n_games - std::max<long>(1, n_games / 10);
  std::vector<double> tail_sum(n_teams, 0.0);
  long tail_count = 0;
  if (export_games) out.games.reserve(n_games);

  for (long g = 0; g < n_games; ++g) {
    std::size_t i = num::uniform_below(rng, n_teams);
    std::size_t j = num::uniform_below(rng, n_teams - 1);
    if (j >= i) ++j;
    int si = num::poisson(rng, teams[i].lambda);
    int sj = num::poisson(rng, teams[j].lambda);
    GameRecord game{date, 1, teams[i].label, teams[j].label, si, sj, false};
    out.book.rate_game(game);
    if (export_games) {
      out.games.push_back(std::move(game));
      date = next_day(date);
    }

    if (g >= tail_start) {
      for (std::size_t t = 0; t < n_teams; ++t) tail_sum[t] += predicted(t);
      ++tail_count;
    }
    if ((g + 1) % record_every == 0 || g + 1 == n_games) {
      ToyLeagueResult::Sample sample;
      sample.game_index = g + 1;
      sample.predicted_rate.resize(n_teams);
      for (std::size_t t = 0; t < n_teams; ++t) sample.predicted_rate[t] = predicted(t);
      out.trajectory.push_back(std::move(sample));
    }
  }

  out.tail_mean_rate.resize(n_teams);
  for (std::size_t t = 0; t < n_teams; ++t) {
    out.tail_mean_rate[t] = tail_sum[t] / static_cast<double>(tail_count);
  }
  return out;
}

std::vector<GameRecord> random_schedule(const std::vector<std::string>& teams, int rounds,
                                        int season, std::uint64_t seed) {
  if (teams.size() < 2) throw std::invalid_argument("schedule needs at least two teams");
  if (season < 1 || season > 9999) throw std::invalid_argument("season must fit a calendar year");
  if (rounds < 1 || rounds > 12 * 28) throw std::invalid_argument("rounds must lie in [1, 336]");

  auto rng = num::seeded(seed, static_cast<std::uint64_t>(season));
  std::vector<std::size_t> order(teams.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<GameRecord> out;
  out.reserve(static_cast<std::size_t>(rounds) * (teams.size() / 2));
  for (int r = 0; r < rounds; ++r) {
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::size_t j = num::uniform_below(rng, i + 1);
      std::swap(order[i], order[j]);
    }
    Date date(season, 1 + r / 28, 1 + r % 28);
    for (std::size_t p = 0; p + 1 < order.size(); p += 2) {
      GameRecord game;
      game.date = date;
      game.season = season;
      game.home = teams[order[p]];
      game.away = teams[order[p + 1]];
      out.push_back(std::move(game));
    }
  }
  return out;
}

std::vector<GameRecord> generate_synthetic_season(const RatingBook& spread_book,
                                                  const RatingBook& total_book,
                                                  std::span<const GameRecord> schedule,
                                                  std::uint64_t seed, int max_retries) {
  if (spread_book.mode() != ComparisonMode::spread ||
      total_book.mode() != ComparisonMode::total) {
    throw std::invalid_argument("generation needs one spread book and one total book");
  }
  if (max_retries < 0) throw std::invalid_argument("max_retries must be nonnegative");

  std::vector<GameRecord> out;
  out.reserve(schedule.size());
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    const GameRecord& sched = schedule[k];
    auto curve_s = predict_survival(spread_book, sched.home, sched.away, sched.date,
                                    sched.neutral_site);
    auto curve_t = predict_survival(total_book, sched.home, sched.away, sched.date,
                                    sched.neutral_site);
    Pmf pmf_s = pmf_from_survival(curve_s);
    Pmf pmf_t = pmf_from_survival(curve_t);
    std::vector<double> cum_s(pmf_s.masses.size()), cum_t(pmf_t.masses.size());
    std::partial_sum(pmf_s.masses.begin(), pmf_s.masses.end(), cum_s.begin());
    std::partial_sum(pmf_t.masses.begin(), pmf_t.masses.end(), cum_t.begin());

    auto rng = num::seeded(seed, k);
    long spread = 0;
    long total = 0;
    bool ok = false;
    for (int attempt = 0; attempt <= max_retries && !ok; ++attempt) {
      spread = std::llround(pmf_s.support[sample_pmf(cum_s, num::uniform01(rng))]);
      total = std::llround(pmf_t.support[sample_pmf(cum_t, num::uniform01(rng))]);
      ok = total >= std::labs(spread) && (total + spread) % 2 == 0;
    }
    if (!ok) {
      total = std::max(total, std::labs(spread));
      if ((total + spread) % 2 != 0) ++total;
    }

    GameRecord game = sched;
    game.home_points = static_cast<int>((total + spread) / 2);
    game.away_points = static_cast<int>((total - spread) / 2);
    out.push_back(std::move(game));
  }
  return out;
}

}  // namespace eloline
