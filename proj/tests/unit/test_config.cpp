#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "eloline/config.hpp"

using namespace eloline;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("eloline-config-tests-" + std::to_string(++counter));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string write_config(const std::string& text) {
  static int counter = 0;
  fs::path path = scratch_dir() / ("cfg-" + std::to_string(++counter) + ".txt");
  std::ofstream out(path);
  out << text;
  out.close();
  return path.string();
}

}  // namespace

TEST_CASE("defaults describe a spread edge and a softer total regression") {
  Config cfg;
  CHECK(cfg.spread.r_hfa == 54.0);
  CHECK(cfg.total.r_hfa == 0.0);
  CHECK(cfg.spread.regress_fraction == 0.6);
  CHECK(cfg.total.regress_fraction == 0.7);
  CHECK(cfg.seed == 2024);
  CHECK(cfg.half_lines == 50);
  CHECK(cfg.spacing == 1.0);
  CHECK(cfg.init == "minbias");
  CHECK(cfg.burn_in_games == -1);
  CHECK(cfg.history);
  CHECK(cfg.out_prefix == "out");
  CHECK_NOTHROW(cfg.validate());

  CHECK(&cfg.params(ComparisonMode::spread) == &cfg.spread);
  CHECK(&cfg.params(ComparisonMode::total) == &cfg.total);
}

TEST_CASE("config files accept comments, blanks, and padding") {
  auto path = write_config(
      "# run setup\n"
      "\n"
      "seed = 99\n"
      "  half_lines=30  # inline comment\n"
      "kappa = 12.5\n"
      "spread.r_hfa = 40\n"
      "total.regress = 0.8\n"
      "init = flat\n"
      "history = false\n"
      "games = data/games.csv\n"
      "out = runs/demo\n");
  Config cfg = load_config(path);
  CHECK(cfg.seed == 99);
  CHECK(cfg.half_lines == 30);
  CHECK(cfg.spread.kappa == 12.5);
  CHECK(cfg.total.kappa == 12.5);
  CHECK(cfg.spread.r_hfa == 40.0);
  CHECK(cfg.total.r_hfa == 0.0);
  CHECK(cfg.total.regress_fraction == 0.8);
  CHECK(cfg.spread.regress_fraction == 0.6);
  CHECK(cfg.init == "flat");
  CHECK(!cfg.history);
  CHECK(cfg.games_path == "data/games.csv");
  CHECK(cfg.out_prefix == "runs/demo");
}

TEST_CASE("bare hyperparameter keys set both modes, prefixed ones narrow") {
  Config cfg;
  apply_override(cfg, "sigma=250");
  CHECK(cfg.spread.sigma == 250.0);
  CHECK(cfg.total.sigma == 250.0);

  apply_override(cfg, "total.sigma=280");
  CHECK(cfg.spread.sigma == 250.0);
  CHECK(cfg.total.sigma == 280.0);

  apply_override(cfg, "r_hfa=0");
  CHECK(cfg.spread.r_hfa == 0.0);
  CHECK(cfg.total.r_hfa == 0.0);
}

TEST_CASE("unknown keys and bad values are named in the error") {
  Config cfg;
  try {
    apply_override(cfg, "kapa=10");
    FAIL("expected an unknown-key error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("kapa") != std::string::npos);
  }
  CHECK_THROWS_AS(apply_override(cfg, "spread.speed=10"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "kappa=fast"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "seed=-1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "history=yes"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "half_lines=200000"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "no-equals-sign"), ConfigError);
}

TEST_CASE("file errors carry the line number") {
  auto path = write_config("seed = 1\nbogus_key = 2\n");
  try {
    load_config(path);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    std::string msg = e.what();
    CHECK(msg.find(":2:") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }
  CHECK_THROWS_AS(load_config("does-not-exist.cfg"), ConfigError);
}

TEST_CASE("validation rejects inconsistent settings with a mode prefix") {
  Config cfg;
  apply_override(cfg, "spread.kappa=0");
  try {
    cfg.validate();
    FAIL("expected a validation error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("spread") != std::string::npos);
  }

  Config bad_init;
  apply_override(bad_init, "init=warm");
  CHECK_THROWS_AS(bad_init.validate(), ConfigError);

  Config bad_burn;
  apply_override(bad_burn, "burn_in=-2");
  CHECK_THROWS_AS(bad_burn.validate(), ConfigError);

  Config bad_spacing;
  apply_override(bad_spacing, "spacing=0");
  CHECK_THROWS_AS(bad_spacing.validate(), ConfigError);
}

TEST_CASE("the resolved config text reloads to the identical configuration") {
  Config cfg;
  apply_override(cfg, "seed=777");
  apply_override(cfg, "half_lines=40");
  apply_override(cfg, "spacing=0.5");
  apply_override(cfg, "init=flat");
  apply_override(cfg, "burn_in=120");
  apply_override(cfg, "history=false");
  apply_override(cfg, "spread.kappa=11.25");
  apply_override(cfg, "total.kappa=9.75");
  apply_override(cfg, "total.r_hfa=13");
  apply_override(cfg, "regress=0.85");
  apply_override(cfg, "games=g.csv");
  apply_override(cfg, "book=runs/book");
  apply_override(cfg, "out=runs/out");

  auto path = write_config(resolved_config_text(cfg));
  Config back = load_config(path);

  CHECK(back.seed == cfg.seed);
  CHECK(back.half_lines == cfg.half_lines);
  CHECK(back.spacing == cfg.spacing);
  CHECK(back.init == cfg.init);
  CHECK(back.burn_in_games == cfg.burn_in_games);
  CHECK(back.history == cfg.history);
  CHECK(back.games_path == cfg.games_path);
  CHECK(back.book_path == cfg.book_path);
  CHECK(back.out_prefix == cfg.out_prefix);
  CHECK(back.spread.kappa == cfg.spread.kappa);
  CHECK(back.spread.sigma == cfg.spread.sigma);
  CHECK(back.spread.r0 == cfg.spread.r0);
  CHECK(back.spread.r_hfa == cfg.spread.r_hfa);
  CHECK(back.spread.regress_fraction == cfg.spread.regress_fraction);
  CHECK(back.spread.tie_credit == cfg.spread.tie_credit);
  CHECK(back.total.kappa == cfg.total.kappa);
  CHECK(back.total.sigma == cfg.total.sigma);
  CHECK(back.total.r_hfa == cfg.total.r_hfa);
  CHECK(back.total.regress_fraction == cfg.total.regress_fraction);
  CHECK(back.total.tie_credit == cfg.total.tie_credit);

  // Emitting twice is stable.
  CHECK(resolved_config_text(cfg) == resolved_config_text(back));
}
