// Times the OpenMP kernels against the serial reference and verifies the
// two paths produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "eloline/backtest.hpp"
#include "eloline/calibration.hpp"
#include "eloline/exec.hpp"
#include "eloline/league_sim.hpp"
#include "eloline/numeric.hpp"
#include "eloline/rating.hpp"

namespace {

using namespace eloline;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<GameRecord> synthetic_stream(int n_teams, int seasons, int rounds,
                                         std::uint64_t seed) {
  std::vector<std::string> teams;
  for (int t = 0; t < n_teams; ++t) {
    teams.push_back("team-" + std::string(t < 9 ? "0" : "") + std::to_string(t + 1));
  }
  std::vector<GameRecord> games;
  for (int s = 1; s <= seasons; ++s) {
    auto season = random_schedule(teams, rounds, 2000 + s, seed + s);
    for (GameRecord& g : season) {
      auto rng = num::seeded(seed, games.size() + 1000000ull * s);
      g.home_points = num::poisson(rng, 24.0);
      g.away_points = num::poisson(rng, 21.0);
      games.push_back(std::move(g));
    }
  }
  return games;
}

bool same(const std::vector<double>& a, const std::vector<double>& b) { return a == b; }

int report(const char* name, double serial_ms, double parallel_ms, bool identical) {
  std::printf("%-24s serial %9.1f ms   parallel %9.1f ms   x%.2f   %s\n", name, serial_ms,
              parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
              identical ? "identical" : "MISMATCH");
  return identical ? 0 : 1;
}

}  // namespace

int main() {
  std::printf("threads available: %d\n\n", max_threads());
  int failures = 0;

  auto games = synthetic_stream(32, 4, 300, 7);
  MarginLattice lattice = spread_lattice(50, 1.0);
  HyperParams hp;
  hp.r_hfa = 40.0;

  // Rating kernel over date groups (16 games x 101 lines per date).
  {
    RatingBook serial_book(ComparisonMode::spread, lattice, hp,
                           std::vector<double>(lattice.size(), hp.r0), false);
    auto t0 = Clock::now();
    serial_book.rate_games(games, Exec::serial);
    double t_serial = ms_since(t0);

    RatingBook parallel_book(ComparisonMode::spread, lattice, hp,
                             std::vector<double>(lattice.size(), hp.r0), false);
    t0 = Clock::now();
    parallel_book.rate_games(games, Exec::parallel);
    double t_parallel = ms_since(t0);

    bool identical = serial_book.current() == parallel_book.current();
    failures += report("rate_games", t_serial, t_parallel, identical);
  }

  // Walk-forward records feed the diagnostic kernels.
  WalkForwardOptions wf;
  wf.keep_curves = true;
  WalkForwardResult run = walk_forward(games, ComparisonMode::spread, hp, lattice, wf);
  std::vector<double> percentiles(run.records.size());
  for (std::size_t i = 0; i < run.records.size(); ++i) percentiles[i] = run.records[i].percentile;

  {
    auto t0 = Clock::now();
    auto serial = percentile_diagnostic(percentiles, 2000, 11, Exec::serial);
    double t_serial = ms_since(t0);
    t0 = Clock::now();
    auto parallel = percentile_diagnostic(percentiles, 2000, 11, Exec::parallel);
    double t_parallel = ms_since(t0);
    bool identical = same(serial.band_lo, parallel.band_lo) &&
                     same(serial.band_hi, parallel.band_hi) &&
                     same(serial.deviation, parallel.deviation);
    failures += report("percentile_diagnostic", t_serial, t_parallel, identical);
  }

  {
    std::vector<double> edges;
    for (double e = -24.0; e <= 24.0; e += 6.0) edges.push_back(e);
    auto t0 = Clock::now();
    auto serial = model_home_field_ratio(run.records, 200, 13, edges, Exec::serial);
    double t_serial = ms_since(t0);
    t0 = Clock::now();
    auto parallel = model_home_field_ratio(run.records, 200, 13, edges, Exec::parallel);
    double t_parallel = ms_since(t0);
    bool identical = same(serial.ratio, parallel.ratio) &&
                     serial.count_biased == parallel.count_biased &&
                     serial.count_sym == parallel.count_sym;
    failures += report("model_home_field_ratio", t_serial, t_parallel, identical);
  }

  {
    TuneSpace space;
    space.kappa = {5.0, 80.0};
    space.r_hfa = {0.0, 80.0};
    std::span<const GameRecord> slice(games.data(), games.size() / 2);
    auto t0 = Clock::now();
    auto serial = tune(slice, ComparisonMode::spread, hp, space, TuneObjective::mae_median, 8, 2,
                       17, 50, 1.0, -1, Exec::serial);
    double t_serial = ms_since(t0);
    t0 = Clock::now();
    auto parallel = tune(slice, ComparisonMode::spread, hp, space, TuneObjective::mae_median, 8, 2,
                         17, 50, 1.0, -1, Exec::parallel);
    double t_parallel = ms_since(t0);
    bool identical = serial.ranked.size() == parallel.ranked.size();
    for (std::size_t i = 0; identical && i < serial.ranked.size(); ++i) {
      identical = serial.ranked[i].objective == parallel.ranked[i].objective &&
                  serial.ranked[i].index == parallel.ranked[i].index;
    }
    failures += report("tune", t_serial, t_parallel, identical);
  }

  if (failures > 0) {
    std::printf("\n%d kernel(s) diverged between serial and parallel paths\n", failures);
    return 1;
  }
  std::printf("\nall kernels bit-identical across execution paths\n");
  return 0;
}
