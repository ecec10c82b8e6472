// Command-line front end: rate, predict, simulate, backtest, tune.
// Exit codes: 0 success (or check passed), 1 usage/config error,
// 2 data error, 3 check failure.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eloline/backtest.hpp"
#include "eloline/calibration.hpp"
#include "eloline/config.hpp"
#include "eloline/distribution.hpp"
#include "eloline/io.hpp"
#include "eloline/league_sim.hpp"
#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace {

using namespace eloline;

constexpr int kOk = 0;
constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kCheckFailure = 3;

std::string g_mode = "both";  // --mode flag

std::vector<ComparisonMode> selected_modes() {
  if (g_mode == "spread") return {ComparisonMode::spread};
  if (g_mode == "total") return {ComparisonMode::total};
  return {ComparisonMode::spread, ComparisonMode::total};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

void log_config(const Config& cfg) {
  write_text(cfg.out_prefix + ".config.txt", resolved_config_text(cfg));
}

std::string require_games_path(const Config& cfg, const std::string& positional) {
  if (!positional.empty()) return positional;
  if (!cfg.games_path.empty()) return cfg.games_path;
  throw ConfigError("missing required config key 'games' (or pass a games file argument)");
}

std::vector<GameRecord> played_only(std::vector<GameRecord> games) {
  std::erase_if(games, [](const GameRecord& g) { return !g.played(); });
  return games;
}

MarginLattice lattice_for(ComparisonMode mode, const Config& cfg,
                          std::span<const GameRecord> pool) {
  if (mode == ComparisonMode::spread) return spread_lattice(cfg.half_lines, cfg.spacing);
  return total_lattice(pool, cfg.half_lines, cfg.spacing);
}

std::vector<double> starting_ratings(ComparisonMode mode, const Config& cfg,
                                     const MarginLattice& lattice,
                                     std::span<const GameRecord> pool) {
  const HyperParams& hp = cfg.params(mode);
  if (cfg.init == "flat") return std::vector<double>(lattice.size(), hp.r0);
  auto minbias = min_bias_survival(pool, lattice, mode, hp.tie_credit);
  return initial_ratings(minbias, hp);
}

std::string book_file(const std::string& prefix, ComparisonMode mode) {
  return prefix + "." + mode_name(mode) + ".json";
}

// ---- rate ----------------------------------------------------------------

int cmd_rate(const Config& cfg, const std::string& games_arg, const std::string& alias_path) {
  auto games = played_only(load_games(require_games_path(cfg, games_arg), alias_path));
  if (games.empty()) throw DataError("no completed games to rate");
  log_config(cfg);

  for (ComparisonMode mode : selected_modes()) {
    MarginLattice lattice = lattice_for(mode, cfg, games);
    RatingBook book(mode, lattice, cfg.params(mode),
                    starting_ratings(mode, cfg, lattice, games), cfg.history);
    book.rate_games(games);
    save_book(book, book_file(cfg.out_prefix, mode));

    std::vector<std::string> header{"team", "rating"};
    std::vector<std::vector<std::string>> rows;
    for (const std::string& team : book.teams()) {
      rows.push_back({team, format_double(book.ratings(team)[lattice.center_index()])});
    }
    write_csv(cfg.out_prefix + "." + mode_name(mode) + ".ratings.csv", header, rows);

    if (cfg.history) {
      std::vector<std::string> thead{"date", "team", "rating"};
      std::vector<std::vector<std::string>> trows;
      for (const auto& [team, entries] : book.history()) {
        for (const HistoryEntry& e : entries) {
          trows.push_back({e.date.str(), team, format_double(e.ratings[lattice.center_index()])});
        }
      }
      std::stable_sort(trows.begin(), trows.end(),
                       [](const auto& a, const auto& b) { return a[0] < b[0]; });
      write_csv(cfg.out_prefix + "." + mode_name(mode) + ".trajectory.csv", thead, trows);
    }
    std::cout << mode_name(mode) << ": rated " << games.size() << " games, "
              << book.teams().size() << " teams -> " << book_file(cfg.out_prefix, mode) << "\n";
  }
  return kOk;
}

// ---- predict ---------------------------------------------------------------

void require_known_team(const RatingBook& book, const std::string& team) {
  if (book.has_team(team)) return;
  std::string msg = "unknown team '" + team + "'; known teams:";
  for (const std::string& t : book.teams()) msg += " " + t;
  throw DataError(msg);
}

std::string unused_team_name(const RatingBook& book) {
  std::string name = "league-average";
  while (book.has_team(name)) name += "+";
  return name;
}

nlohmann::json curve_report(const RatingBook& book, const std::string& home,
                            const std::string& away, Date date, bool neutral) {
  SurvivalCurve curve = predict_survival(book, home, away, date, neutral);
  nlohmann::json j;
  j["median"] = median(curve);
  j["mean"] = mean_from_survival(curve);
  j["q05"] = quantile(curve, 0.05);
  j["q25"] = quantile(curve, 0.25);
  j["q75"] = quantile(curve, 0.75);
  j["q95"] = quantile(curve, 0.95);
  j["hfa_applied"] = curve.hfa_applied;
  j["lines"] = curve.lines;
  j["survival"] = curve.probs;
  return j;
}

int cmd_predict(const Config& cfg, const std::string& home, const std::string& away,
                const std::string& date_text, bool neutral, bool vs_average) {
  if (cfg.book_path.empty()) {
    throw ConfigError("missing required config key 'book' (snapshot prefix to load)");
  }
  auto modes = selected_modes();
  if (vs_average && modes.size() != 2) {
    throw ConfigError("--vs-average needs both books (--mode both)");
  }
  log_config(cfg);

  nlohmann::json report;
  report["home"] = home;
  report["away"] = away;
  report["neutral"] = neutral;

  double mean_spread_home = 0.0, mean_total_home = 0.0;
  double mean_spread_away = 0.0, mean_total_away = 0.0;

  for (ComparisonMode mode : modes) {
    RatingBook book = load_book(book_file(cfg.book_path, mode));
    require_known_team(book, home);
    require_known_team(book, away);
    Date date = date_text.empty() ? book.last_date() : Date::parse(date_text);
    report["date"] = date == Date() ? std::string() : date.str();

    nlohmann::json j = curve_report(book, home, away, date, neutral);
    std::cout << mode_name(mode) << ": median " << j["median"].get<double>() << "  mean "
              << j["mean"].get<double>() << "  q25 " << j["q25"].get<double>() << "  q75 "
              << j["q75"].get<double>() << "\n";

    std::vector<std::string> header{"line", "survival"};
    std::vector<std::vector<std::string>> rows;
    const auto& lines = j["lines"];
    const auto& surv = j["survival"];
    for (std::size_t i = 0; i < lines.size(); ++i) {
      rows.push_back({format_double(lines[i].get<double>()), format_double(surv[i].get<double>())});
    }
    write_csv(cfg.out_prefix + ".predict." + mode_name(mode) + ".csv", header, rows);

    if (vs_average) {
      const std::string average = unused_team_name(book);
      SurvivalCurve h = predict_survival(book, home, average, date, true);
      SurvivalCurve a = predict_survival(book, away, average, date, true);
      if (mode == ComparisonMode::spread) {
        mean_spread_home = mean_from_survival(h);
        mean_spread_away = mean_from_survival(a);
      } else {
        mean_total_home = mean_from_survival(h);
        mean_total_away = mean_from_survival(a);
      }
    }
    report[mode_name(mode)] = std::move(j);
  }

  if (vs_average) {
    auto [hs, ha] = orthogonal_points(mean_spread_home, mean_total_home);
    auto [as, aa] = orthogonal_points(mean_spread_away, mean_total_away);
    report["vs_average"] = {
        {home, {{"points_scored", hs}, {"points_allowed", ha}}},
        {away, {{"points_scored", as}, {"points_allowed", aa}}},
    };
    std::cout << "vs average: " << home << " " << hs << " / " << ha << ", " << away << " " << as
              << " / " << aa << "\n";
  }

  write_text(cfg.out_prefix + ".predict.json", report.dump(2) + "\n");
  return kOk;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const Config& cfg, long n_games, long record_every,
                 const std::string& export_path, bool check) {
  log_config(cfg);
  HyperParams hp;
  hp.kappa = 0.005;
  hp.sigma = 300.0;
  hp.r0 = 1500.0;
  ToyLeagueResult res = run_toy_league(nine_team_league(), n_games, hp, cfg.seed, 19.0,
                                       record_every, !export_path.empty());

  std::vector<std::string> shead{"team", "lambda", "oracle_rate", "tail_mean_rate", "abs_dev"};
  std::vector<std::vector<std::string>> srows;
  double worst = 0.0;
  for (std::size_t t = 0; t < res.teams.size(); ++t) {
    double dev = std::abs(res.tail_mean_rate[t] - res.oracle_rate[t]);
    worst = std::max(worst, dev);
    srows.push_back({res.teams[t].label, format_double(res.teams[t].lambda),
                     format_double(res.oracle_rate[t]), format_double(res.tail_mean_rate[t]),
                     format_double(dev)});
    std::cout << res.teams[t].label << ": oracle " << res.oracle_rate[t] << "  tail mean "
              << res.tail_mean_rate[t] << "  dev " << dev << "\n";
  }
  write_csv(cfg.out_prefix + ".simulate.summary.csv", shead, srows);

  std::vector<std::string> thead{"game_index", "team", "predicted_rate"};
  std::vector<std::vector<std::string>> trows;
  for (const auto& sample : res.trajectory) {
    for (std::size_t t = 0; t < res.teams.size(); ++t) {
      trows.push_back({std::to_string(sample.game_index), res.teams[t].label,
                       format_double(sample.predicted_rate[t])});
    }
  }
  write_csv(cfg.out_prefix + ".simulate.trajectory.csv", thead, trows);

  if (!export_path.empty()) save_games(export_path, res.games);

  std::cout << "worst deviation " << worst << " over " << n_games << " games\n";
  if (check && worst > 0.02) {
    std::cout << "check FAILED: worst deviation " << worst << " > 0.02\n";
    return kCheckFailure;
  }
  if (check) std::cout << "check passed: worst deviation " << worst << " <= 0.02\n";
  return kOk;
}

// ---- backtest --------------------------------------------------------------

int cmd_backtest(const Config& cfg, const std::string& games_arg, const std::string& alias_path,
                 int n_mc, bool check) {
  auto games = played_only(load_games(require_games_path(cfg, games_arg), alias_path));
  if (games.empty()) throw DataError("no completed games to backtest");
  log_config(cfg);

  bool all_pass = true;
  for (ComparisonMode mode : selected_modes()) {
    const long burn = resolved_burn_in(games, cfg.burn_in_games);
    auto pool = burn > 0 ? std::span<const GameRecord>(games).first(burn)
                         : std::span<const GameRecord>(games);
    MarginLattice lattice = lattice_for(mode, cfg, pool);

    WalkForwardOptions opts;
    opts.burn_in_games = cfg.burn_in_games;
    WalkForwardResult run = walk_forward(games, mode, cfg.params(mode), lattice, opts);
    if (run.records.empty()) throw DataError("burn-in consumed every game; nothing to score");

    MaeSummary mae = mean_absolute_error(run.records, PointEstimator::median, lattice.center);

    std::vector<double> percentiles(run.records.size());
    for (std::size_t i = 0; i < run.records.size(); ++i) {
      percentiles[i] = run.records[i].percentile;
    }
    PercentileDiagnostic diag = percentile_diagnostic(percentiles, n_mc, cfg.seed);

    std::vector<std::string> rhead{"date",     "season",      "home",      "away",
                                   "observed", "median_pred", "mean_pred", "percentile"};
    std::vector<std::vector<std::string>> rrows;
    for (const BacktestRecord& rec : run.records) {
      rrows.push_back({rec.game.date.str(), std::to_string(rec.game.season), rec.game.home,
                       rec.game.away, format_double(rec.observed), format_double(rec.median_pred),
                       format_double(rec.mean_pred), format_double(rec.percentile)});
    }
    write_csv(cfg.out_prefix + ".backtest." + mode_name(mode) + ".records.csv", rhead, rrows);

    std::vector<std::string> phead{"rank",      "expected", "sorted_percentile",
                                   "deviation", "band_lo",  "band_hi"};
    std::vector<std::vector<std::string>> prows;
    for (std::size_t i = 0; i < diag.sorted_percentiles.size(); ++i) {
      prows.push_back({std::to_string(i + 1), format_double(diag.expected[i]),
                       format_double(diag.sorted_percentiles[i]), format_double(diag.deviation[i]),
                       format_double(diag.band_lo[i]), format_double(diag.band_hi[i])});
    }
    write_csv(cfg.out_prefix + ".backtest." + mode_name(mode) + ".percentiles.csv", phead, prows);

    std::vector<std::string> shead{"mode",         "games",        "burn_in",
                                   "mae_model",    "mae_baseline", "band_within_frac",
                                   "max_abs_deviation"};
    std::vector<std::vector<std::string>> srows{
        {mode_name(mode), std::to_string(mae.n), std::to_string(run.burn_in_used),
         format_double(mae.model), format_double(mae.baseline),
         format_double(diag.frac_within_band), format_double(diag.max_abs_deviation)}};
    write_csv(cfg.out_prefix + ".backtest." + mode_name(mode) + ".summary.csv", shead, srows);

    std::cout << mode_name(mode) << ": " << mae.n << " scored games (burn-in "
              << run.burn_in_used << ")\n";
    std::cout << mode_name(mode) << ": MAE model " << mae.model << " vs baseline " << mae.baseline
              << "\n";
    std::cout << mode_name(mode) << ": " << 100.0 * diag.frac_within_band
              << "% of ordered percentiles inside the 95% band\n";

    if (check && !(mae.model < mae.baseline && diag.frac_within_band >= 0.9)) {
      std::cout << mode_name(mode) << ": check FAILED (need MAE below baseline and >=90% in band)\n";
      all_pass = false;
    }
  }
  if (check && all_pass) std::cout << "check passed\n";
  return check && !all_pass ? kCheckFailure : kOk;
}

// ---- tune ------------------------------------------------------------------

int cmd_tune(Config cfg, const std::string& games_arg, const std::string& alias_path,
             int candidates, int folds, const std::string& objective_name, double kappa_lo,
             double kappa_hi, double hfa_lo, double hfa_hi, double regress_lo,
             double regress_hi) {
  auto games = played_only(load_games(require_games_path(cfg, games_arg), alias_path));
  if (games.empty()) throw DataError("no completed games to tune on");
  log_config(cfg);

  TuneSpace space;
  space.kappa = {kappa_lo, kappa_hi};
  space.r_hfa = {hfa_lo, hfa_hi};
  space.regress = {regress_lo, regress_hi};
  TuneObjective objective =
      objective_name == "rps" ? TuneObjective::rps : TuneObjective::mae_median;

  for (ComparisonMode mode : selected_modes()) {
    TuneResult result = tune(games, mode, cfg.params(mode), space, objective, candidates, folds,
                             cfg.seed, cfg.half_lines, cfg.spacing,
                             static_cast<int>(cfg.burn_in_games));

    std::vector<std::string> header{"rank", "kappa", "r_hfa", "regress", "objective"};
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < result.ranked.size(); ++i) {
      const TuneCandidate& c = result.ranked[i];
      rows.push_back({std::to_string(i + 1), format_double(c.hp.kappa),
                      format_double(c.hp.r_hfa), format_double(c.hp.regress_fraction),
                      format_double(c.objective)});
    }
    write_csv(cfg.out_prefix + ".tune." + mode_name(mode) + ".csv", header, rows);

    cfg.params(mode) = result.best;
    std::cout << mode_name(mode) << ": best kappa " << result.best.kappa << "  r_hfa "
              << result.best.r_hfa << "  regress " << result.best.regress_fraction
              << "  objective " << result.ranked.front().objective << "\n";
  }
  write_text(cfg.out_prefix + ".tune.config.txt", resolved_config_text(cfg));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Margin-dependent Elo ratings: full score-distribution predictions"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  std::uint64_t seed_flag = 0;
  bool check = false;
  app.add_option("--config", config_path, "Key/value config file");
  app.add_option("--set", overrides, "Override one config key (key=value, repeatable)")
      ->allow_extra_args(false);
  auto* seed_opt = app.add_option("--seed", seed_flag, "Random seed (overrides config)");
  app.add_option("--mode", g_mode, "Comparison mode: spread, total, or both")
      ->check(CLI::IsMember({"spread", "total", "both"}))
      ->capture_default_str();
  app.add_flag("--check", check, "Exit 3 when the command's acceptance thresholds fail");

  std::string games_arg, alias_path;
  std::string home, away, date_text;
  bool neutral = false, vs_average = false;
  long sim_games = 5000000, record_every = 10000;
  std::string export_path;
  int n_mc = 2000;
  int candidates = 40, folds = 3;
  std::string objective = "mae";
  double kappa_lo = 1.0, kappa_hi = 100.0;
  double hfa_lo = 0.0, hfa_hi = 0.0;
  double regress_lo = 1.0, regress_hi = 1.0;

  auto check_date = [](const std::string& text) -> std::string {
    try {
      Date::parse(text);
    } catch (const std::exception& e) {
      return std::string(e.what());
    }
    return {};
  };

  CLI::App* rate = app.add_subcommand("rate", "Rate a game file and save book snapshots");
  rate->add_option("games", games_arg, "Games CSV (falls back to config key 'games')");
  rate->add_option("--aliases", alias_path, "Two-column team alias file");
  rate->fallthrough();

  CLI::App* predict = app.add_subcommand("predict", "Predict one matchup from saved books");
  predict->add_option("home", home, "Home team")->required();
  predict->add_option("away", away, "Away team")->required();
  predict->add_option("--date", date_text, "Prediction date (YYYY-MM-DD)")->check(check_date);
  predict->add_flag("--neutral", neutral, "Neutral site (no home-field offset)");
  predict->add_flag("--vs-average", vs_average,
                    "Also report mean points scored/allowed vs a league-average opponent");
  predict->fallthrough();

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Run the nine-team Poisson league (kappa 0.005, sigma 300, start 1500)");
  simulate->add_option("--games", sim_games, "Number of games")->capture_default_str();
  simulate->add_option("--record-every", record_every, "Trajectory sampling stride")
      ->capture_default_str();
  simulate->add_option("--export", export_path, "Also write the simulated games as a CSV");
  simulate->fallthrough();

  CLI::App* backtest = app.add_subcommand("backtest", "Walk-forward backtest of a game file");
  backtest->add_option("games", games_arg, "Games CSV (falls back to config key 'games')");
  backtest->add_option("--aliases", alias_path, "Two-column team alias file");
  backtest->add_option("--n-mc", n_mc, "Monte-Carlo band sample count")->capture_default_str();
  backtest->fallthrough();

  CLI::App* tune_cmd = app.add_subcommand("tune", "Random-search hyperparameters by backtest");
  tune_cmd->add_option("games", games_arg, "Games CSV (falls back to config key 'games')");
  tune_cmd->add_option("--aliases", alias_path, "Two-column team alias file");
  tune_cmd->add_option("--candidates", candidates, "Candidates to draw")->capture_default_str();
  tune_cmd->add_option("--folds", folds, "Contiguous scoring segments")->capture_default_str();
  tune_cmd->add_option("--objective", objective, "mae (median) or rps")
      ->check(CLI::IsMember({"mae", "rps"}))
      ->capture_default_str();
  tune_cmd->add_option("--kappa-lo", kappa_lo, "")->capture_default_str();
  tune_cmd->add_option("--kappa-hi", kappa_hi, "")->capture_default_str();
  tune_cmd->add_option("--hfa-lo", hfa_lo, "")->capture_default_str();
  tune_cmd->add_option("--hfa-hi", hfa_hi, "")->capture_default_str();
  tune_cmd->add_option("--regress-lo", regress_lo, "")->capture_default_str();
  tune_cmd->add_option("--regress-hi", regress_hi, "")->capture_default_str();
  tune_cmd->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const std::string& assignment : overrides) apply_override(cfg, assignment);
    if (seed_opt->count() > 0) cfg.seed = seed_flag;
    cfg.validate();

    if (rate->parsed()) return cmd_rate(cfg, games_arg, alias_path);
    if (predict->parsed()) return cmd_predict(cfg, home, away, date_text, neutral, vs_average);
    if (simulate->parsed()) return cmd_simulate(cfg, sim_games, record_every, export_path, check);
    if (backtest->parsed()) return cmd_backtest(cfg, games_arg, alias_path, n_mc, check);
    if (tune_cmd->parsed()) {
      return cmd_tune(cfg, games_arg, alias_path, candidates, folds, objective, kappa_lo,
                      kappa_hi, hfa_lo, hfa_hi, regress_lo, regress_hi);
    }
    return kUsageError;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
}
