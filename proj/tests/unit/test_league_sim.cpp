#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "eloline/distribution.hpp"
#include "eloline/league_sim.hpp"
#include "eloline/numeric.hpp"

using namespace eloline;

namespace {

// Independent cross-check for the closed-form win rate: dense pmfs via
// lgamma, full double sum.
double brute_force_win_rate(double la, double lb) {
  const int n = 400;
  auto pmf = [](double lam, int k) {
    return std::exp(-lam + k * std::log(lam) - std::lgamma(k + 1.0));
  };
  double win = 0.0, tie = 0.0;
  for (int i = 0; i < n; ++i) {
    double pa = pmf(la, i);
    for (int j = 0; j < i; ++j) win += pa * pmf(lb, j);
    tie += pa * pmf(lb, i);
  }
  return win + 0.5 * tie;
}

// Two-team books whose predicted distributions put all mass on one value:
// a giant rating step at the target line pins the survival curve to 1
// above it and 0 from it on.
RatingBook step_book(ComparisonMode mode, double center, double step_line) {
  MarginLattice lat{center, 1.0, 50};
  HyperParams hp;
  RatingBook book(mode, lat, hp, std::vector<double>(lat.size(), 1500.0));
  book.ensure_team("A");
  book.ensure_team("B");
  auto cur = book.current();
  for (int i = 0; i < lat.size(); ++i) {
    cur["A"][i] = lat.line(i) < step_line ? 4500.0 : -1500.0;
  }
  book.restore_state(cur, {}, Date(), 2024);
  return book;
}

// Books with smooth normal-shaped predictions for A vs B: survival
// Phi((mid - line) / width) comes from a linear rating profile.
RatingBook slope_book(ComparisonMode mode, double center, double mid, double width) {
  MarginLattice lat{center, 1.0, 50};
  HyperParams hp;
  RatingBook book(mode, lat, hp, std::vector<double>(lat.size(), 1500.0));
  book.ensure_team("A");
  book.ensure_team("B");
  auto cur = book.current();
  for (int i = 0; i < lat.size(); ++i) {
    cur["A"][i] = 1500.0 + hp.sigma / width * (mid - lat.line(i));
  }
  book.restore_state(cur, {}, Date(), 2024);
  return book;
}

GameRecord matchup(const char* home, const char* away) {
  GameRecord g;
  g.date = Date(2024, 9, 1);
  g.season = 2024;
  g.home = home;
  g.away = away;
  return g;
}

}  // namespace

TEST_CASE("exact poisson win rate pins reference values") {
  CHECK(std::abs(exact_poisson_win_rate(27.0, 19.0) - 0.88115629249222615398) < 1e-13);
  CHECK(std::abs(exact_poisson_win_rate(11.0, 19.0) - 0.071100569246939434903) < 1e-13);
  CHECK(std::abs(exact_poisson_win_rate(19.0, 19.0) - 0.5) < 1e-12);
}

TEST_CASE("exact poisson win rate is complement-symmetric and monotone") {
  for (double la : {11.0, 15.0, 21.0, 27.0}) {
    for (double lb : {13.0, 19.0, 25.0}) {
      CHECK(std::abs(exact_poisson_win_rate(la, lb) + exact_poisson_win_rate(lb, la) - 1.0) <
            1e-12);
    }
  }
  double prev = 0.0;
  for (double la = 11.0; la <= 27.0; la += 2.0) {
    double p = exact_poisson_win_rate(la, 19.0);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("exact poisson win rate matches an independent dense summation") {
  for (double la : {11.0, 19.0, 27.0}) {
    for (double lb : {11.0, 19.0, 27.0}) {
      CHECK(std::abs(exact_poisson_win_rate(la, lb) - brute_force_win_rate(la, lb)) < 1e-9);
    }
  }
}

TEST_CASE("the nine-team league is the odd lambdas from 11 to 27") {
  auto teams = nine_team_league();
  REQUIRE(teams.size() == 9);
  CHECK(teams.front().label == "team-11");
  CHECK(teams.front().lambda == 11.0);
  CHECK(teams.back().label == "team-27");
  CHECK(teams.back().lambda == 27.0);
  for (size_t i = 1; i < teams.size(); ++i) {
    CHECK(teams[i].lambda - teams[i - 1].lambda == 2.0);
  }
}

TEST_CASE("a league of equals converges to even odds") {
  std::vector<PoissonTeam> teams = {{"a", 19.0}, {"b", 19.0}, {"c", 19.0}, {"d", 19.0}};
  HyperParams hp;
  hp.kappa = 0.005;
  hp.sigma = 300.0;
  auto res = run_toy_league(teams, 40000, hp, 5);
  for (size_t t = 0; t < teams.size(); ++t) {
    CHECK(std::abs(res.oracle_rate[t] - 0.5) < 1e-12);
    CHECK(res.tail_mean_rate[t] == doctest::Approx(0.5).epsilon(0.04));
  }
}

TEST_CASE("toy league ratings order themselves by scoring strength") {
  HyperParams hp;
  hp.kappa = 0.005;
  auto res = run_toy_league(nine_team_league(), 120000, hp, 7, 19.0, 20000);

  const auto& teams = res.teams;
  for (size_t t = 1; t < teams.size(); ++t) {
    CHECK(res.book.ratings(teams[t].label)[0] > res.book.ratings(teams[t - 1].label)[0]);
    CHECK(res.tail_mean_rate[t] > res.tail_mean_rate[t - 1]);
  }
  // The reference team measured against itself sits at exactly one half.
  CHECK(res.tail_mean_rate[4] == 0.5);
  CHECK(res.oracle_rate[4] == doctest::Approx(0.5).epsilon(1e-12));

  REQUIRE(!res.trajectory.empty());
  CHECK(res.trajectory.front().game_index == 20000);
  CHECK(res.trajectory.back().game_index == 120000);
  for (const auto& s : res.trajectory) {
    REQUIRE(s.predicted_rate.size() == teams.size());
    for (double p : s.predicted_rate) {
      CHECK(p > 0.0);
      CHECK(p < 1.0);
    }
  }
}

TEST_CASE("toy league runs are seed-deterministic") {
  std::vector<PoissonTeam> teams = {{"a", 15.0}, {"b", 19.0}, {"c", 23.0}};
  HyperParams hp;
  hp.kappa = 0.01;
  auto r1 = run_toy_league(teams, 5000, hp, 77, 19.0, 1000);
  auto r2 = run_toy_league(teams, 5000, hp, 77, 19.0, 1000);
  auto r3 = run_toy_league(teams, 5000, hp, 78, 19.0, 1000);

  REQUIRE(r1.trajectory.size() == r2.trajectory.size());
  for (size_t i = 0; i < r1.trajectory.size(); ++i) {
    CHECK(r1.trajectory[i].predicted_rate == r2.trajectory[i].predicted_rate);
  }
  CHECK(r1.book.current() == r2.book.current());
  CHECK(r1.book.current() != r3.book.current());
}

TEST_CASE("replaying exported toy games reproduces the simulation book exactly") {
  std::vector<PoissonTeam> teams = {{"a", 15.0}, {"b", 19.0}, {"c", 23.0}, {"d", 27.0}};
  HyperParams hp;
  hp.kappa = 0.02;
  auto res = run_toy_league(teams, 3000, hp, 9, 19.0, 10000, true);
  REQUIRE(res.games.size() == 3000);

  MarginLattice lat{0.0, 1.0, 0};
  HyperParams hp0 = hp;
  hp0.r_hfa = 0.0;
  RatingBook fresh(ComparisonMode::spread, lat, hp0, {hp0.r0}, false);
  for (const auto& t : teams) fresh.ensure_team(t.label);
  fresh.rate_games(res.games);
  CHECK(fresh.current() == res.book.current());

  for (size_t i = 1; i < res.games.size(); ++i) {
    CHECK(res.games[i - 1].date < res.games[i].date);
    CHECK(res.games[i].season == res.games[i - 1].season);
  }
}

TEST_CASE("toy league validates its inputs") {
  HyperParams hp;
  std::vector<PoissonTeam> one = {{"a", 19.0}};
  CHECK_THROWS_AS(run_toy_league(one, 100, hp, 1), std::invalid_argument);

  std::vector<PoissonTeam> dup = {{"a", 19.0}, {"a", 21.0}};
  CHECK_THROWS_AS(run_toy_league(dup, 100, hp, 1), std::invalid_argument);

  std::vector<PoissonTeam> no_ref = {{"a", 15.0}, {"b", 21.0}};
  CHECK_THROWS_AS(run_toy_league(no_ref, 100, hp, 1, 19.0), std::invalid_argument);

  std::vector<PoissonTeam> ok = {{"a", 15.0}, {"b", 19.0}};
  CHECK_THROWS_AS(run_toy_league(ok, 0, hp, 1), std::invalid_argument);
  CHECK_THROWS_AS(run_toy_league(ok, 100, hp, 1, 19.0, 0), std::invalid_argument);
}

TEST_CASE("random schedules play every team once per round") {
  std::vector<std::string> teams = {"p", "q", "r", "s", "t", "u"};
  auto sched = random_schedule(teams, 10, 2024, 3);
  CHECK(sched.size() == 30);

  for (int r = 0; r < 10; ++r) {
    std::set<std::string> seen;
    for (int g = 0; g < 3; ++g) {
      const auto& game = sched[r * 3 + g];
      CHECK(seen.insert(game.home).second);
      CHECK(seen.insert(game.away).second);
      CHECK(!game.played());
      CHECK(game.season == 2024);
      CHECK(game.date.year() == 2024);
    }
    CHECK(seen.size() == teams.size());
  }

  for (size_t i = 1; i < sched.size(); ++i) CHECK(sched[i - 1].date <= sched[i].date);
  CHECK(sched.front().date < sched.back().date);
}

TEST_CASE("odd team counts give one bye per round and both venues over time") {
  std::vector<std::string> teams = {"p", "q", "r", "s", "t"};
  auto sched = random_schedule(teams, 40, 2024, 5);
  CHECK(sched.size() == 80);

  std::map<std::string, int> home_count, away_count;
  for (const auto& g : sched) {
    ++home_count[g.home];
    ++away_count[g.away];
  }
  for (const auto& t : teams) {
    CHECK(home_count[t] > 0);
    CHECK(away_count[t] > 0);
  }
}

TEST_CASE("schedules are deterministic per seed and season") {
  std::vector<std::string> teams = {"p", "q", "r", "s"};
  auto a = random_schedule(teams, 5, 2024, 11);
  auto b = random_schedule(teams, 5, 2024, 11);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].home == b[i].home);
    CHECK(a[i].away == b[i].away);
  }

  auto c = random_schedule(teams, 5, 2025, 11);
  bool same = true;
  for (size_t i = 0; i < a.size() && same; ++i) same = a[i].home == c[i].home;
  CHECK(!same);

  CHECK_THROWS_AS(random_schedule(teams, 0, 2024, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_schedule(teams, 400, 2024, 1), std::invalid_argument);
  CHECK_THROWS_AS(random_schedule({"p"}, 5, 2024, 1), std::invalid_argument);
}

TEST_CASE("degenerate point predictions generate the implied score exactly") {
  RatingBook spread = step_book(ComparisonMode::spread, 0.0, 7.0);
  RatingBook total = step_book(ComparisonMode::total, 41.0, 41.0);
  std::vector<GameRecord> sched = {matchup("A", "B")};

  auto games = generate_synthetic_season(spread, total, sched, 123);
  REQUIRE(games.size() == 1);
  CHECK(*games[0].home_points == 24);
  CHECK(*games[0].away_points == 17);
  CHECK(games[0].home == "A");
  CHECK(games[0].date == sched[0].date);
}

TEST_CASE("parity conflicts resolve by nudging the total up") {
  RatingBook spread = step_book(ComparisonMode::spread, 0.0, 7.0);
  RatingBook total = step_book(ComparisonMode::total, 40.0, 40.0);
  std::vector<GameRecord> sched = {matchup("A", "B")};

  for (int retries : {0, 16}) {
    auto games = generate_synthetic_season(spread, total, sched, 123, retries);
    CHECK(*games[0].home_points == 24);  // total nudged 40 -> 41
    CHECK(*games[0].away_points == 17);
  }
}

TEST_CASE("sampled spreads follow the predicted distribution") {
  RatingBook spread = slope_book(ComparisonMode::spread, 0.0, 7.0, 4.0);
  RatingBook total = slope_book(ComparisonMode::total, 44.0, 44.3, 5.0);

  auto curve = predict_survival(spread, "A", "B", Date(2024, 9, 1));
  Pmf pmf = pmf_from_survival(curve);

  const int n = 100000;
  std::vector<GameRecord> sched(n, matchup("A", "B"));
  auto games = generate_synthetic_season(spread, total, sched, 1);
  REQUIRE(games.size() == size_t(n));

  std::map<long, long> counts;
  for (const auto& g : games) {
    CHECK(*g.home_points >= 0);
    CHECK(*g.away_points >= 0);
    ++counts[long(*g.home_points) - long(*g.away_points)];
  }

  double small_expected = 0.0;
  long small_observed = 0;
  for (size_t i = 0; i < pmf.support.size(); ++i) {
    double expected = n * pmf.masses[i];
    long observed = counts.count(long(pmf.support[i])) ? counts[long(pmf.support[i])] : 0;
    if (expected < 10.0) {
      small_expected += expected;
      small_observed += observed;
      continue;
    }
    double sigma = std::sqrt(expected * (1.0 - pmf.masses[i]));
    CHECK(std::abs(observed - expected) <= 3.0 * sigma);
  }
  if (small_expected > 0.0) {
    CHECK(std::abs(small_observed - small_expected) <=
          3.0 * std::sqrt(small_expected) + 3.0);
  }
}

TEST_CASE("synthetic generation is deterministic and validates book modes") {
  RatingBook spread = slope_book(ComparisonMode::spread, 0.0, 3.0, 6.0);
  RatingBook total = slope_book(ComparisonMode::total, 40.0, 40.0, 6.0);
  std::vector<GameRecord> sched(50, matchup("A", "B"));

  auto g1 = generate_synthetic_season(spread, total, sched, 5);
  auto g2 = generate_synthetic_season(spread, total, sched, 5);
  auto g3 = generate_synthetic_season(spread, total, sched, 6);
  bool same55 = true, same56 = true;
  for (size_t i = 0; i < sched.size(); ++i) {
    same55 = same55 && *g1[i].home_points == *g2[i].home_points &&
             *g1[i].away_points == *g2[i].away_points;
    same56 = same56 && *g1[i].home_points == *g3[i].home_points &&
             *g1[i].away_points == *g3[i].away_points;
  }
  CHECK(same55);
  CHECK(!same56);

  CHECK_THROWS_AS(generate_synthetic_season(total, spread, sched, 1), std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic_season(spread, total, sched, 1, -1),
                  std::invalid_argument);
}
