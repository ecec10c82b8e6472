#include "doctest.h"
#include "eloline/types.hpp"

using namespace eloline;

TEST_CASE("date parses ISO text and round-trips") {
  Date d = Date::parse("2024-09-15");
  CHECK(d.year() == 2024);
  CHECK(d.month() == 9);
  CHECK(d.day() == 15);
  CHECK(d.str() == "2024-09-15");
}

TEST_CASE("date rejects malformed and impossible inputs") {
  CHECK_THROWS_AS(Date::parse("2024-13-01"), std::invalid_argument);
  CHECK_THROWS_AS(Date::parse("2024-02-30"), std::invalid_argument);
  CHECK_THROWS_AS(Date::parse("2023-02-29"), std::invalid_argument);
  CHECK_THROWS_AS(Date::parse("2024/09/15"), std::invalid_argument);
  CHECK_THROWS_AS(Date::parse("24-09-15"), std::invalid_argument);
  CHECK_THROWS_AS(Date::parse("2024-09-5"), std::invalid_argument);
  CHECK_THROWS_AS(Date(2024, 0, 1), std::invalid_argument);
  CHECK_NOTHROW(Date::parse("2024-02-29"));
}

TEST_CASE("date comparison follows the calendar") {
  CHECK(Date::parse("2023-12-31") < Date::parse("2024-01-01"));
  CHECK(Date::parse("2024-09-01") < Date::parse("2024-10-01"));
  CHECK(Date::parse("2024-09-15") == Date::parse("2024-09-15"));
}

TEST_CASE("next_day rolls months and years") {
  CHECK(next_day(Date(2024, 9, 15)) == Date(2024, 9, 16));
  CHECK(next_day(Date(2024, 9, 30)) == Date(2024, 10, 1));
  CHECK(next_day(Date(2024, 12, 31)) == Date(2025, 1, 1));
  CHECK(next_day(Date(2024, 2, 28)) == Date(2024, 2, 29));
  CHECK(next_day(Date(2023, 2, 28)) == Date(2023, 3, 1));
}

TEST_CASE("comparison value is home minus away or home plus away") {
  GameRecord g;
  g.date = Date(2024, 9, 15);
  g.home = "A";
  g.away = "B";
  g.home_points = 24;
  g.away_points = 10;
  CHECK(comparison_value(g, ComparisonMode::spread) == 14.0);
  CHECK(comparison_value(g, ComparisonMode::total) == 34.0);

  g.home_points = 7;
  g.away_points = 7;
  CHECK(comparison_value(g, ComparisonMode::spread) == 0.0);
  CHECK(comparison_value(g, ComparisonMode::total) == 14.0);
}

TEST_CASE("comparison value refuses unplayed games") {
  GameRecord g;
  g.date = Date(2024, 9, 15);
  g.home = "A";
  g.away = "B";
  CHECK(!g.played());
  CHECK_THROWS_AS(comparison_value(g, ComparisonMode::spread), std::invalid_argument);
}

TEST_CASE("mode names round-trip") {
  CHECK(mode_from_name("spread") == ComparisonMode::spread);
  CHECK(mode_from_name("total") == ComparisonMode::total);
  CHECK(std::string(mode_name(ComparisonMode::spread)) == "spread");
  CHECK(std::string(mode_name(ComparisonMode::total)) == "total");
  CHECK_THROWS_AS(mode_from_name("margin"), std::invalid_argument);
}

TEST_CASE("lattice geometry: lines, center, mirror") {
  MarginLattice lat{0.0, 1.0, 50};
  CHECK(lat.size() == 101);
  CHECK(lat.line(0) == -50.0);
  CHECK(lat.line(50) == 0.0);
  CHECK(lat.line(100) == 50.0);
  CHECK(lat.center_index() == 50);

  for (int i = 0; i < lat.size(); ++i) {
    CHECK(lat.mirror(lat.mirror(i)) == i);
    CHECK(lat.line(i) + lat.line(lat.mirror(i)) == doctest::Approx(2.0 * lat.center));
  }

  MarginLattice tot{44.0, 1.0, 50};
  CHECK(tot.line(0) == -6.0);
  CHECK(tot.line(tot.center_index()) == 44.0);
  CHECK(tot.mirror(0) == 100);
}

TEST_CASE("lattice index_of accepts lattice lines and rejects off-grid values") {
  MarginLattice lat{0.0, 1.0, 50};
  CHECK(lat.index_of(-50.0) == 0);
  CHECK(lat.index_of(0.0) == 50);
  CHECK(lat.index_of(13.0) == 63);
  CHECK_THROWS_AS(lat.index_of(0.5), std::out_of_range);
  CHECK_THROWS_AS(lat.index_of(51.0), std::out_of_range);
  CHECK_THROWS_AS(lat.index_of(-51.0), std::out_of_range);

  MarginLattice half{0.0, 0.5, 4};
  CHECK(half.index_of(-2.0) == 0);
  CHECK(half.index_of(1.5) == 7);
}

TEST_CASE("lattice validate rejects bad geometry") {
  CHECK_THROWS_AS((MarginLattice{0.0, 0.0, 50}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MarginLattice{0.0, -1.0, 50}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((MarginLattice{0.0, 1.0, -1}.validate()), std::invalid_argument);
  CHECK_NOTHROW((MarginLattice{0.0, 1.0, 0}.validate()));
}

TEST_CASE("hyperparameter validation enforces ranges") {
  HyperParams hp;
  CHECK_NOTHROW(hp.validate());

  HyperParams bad = hp;
  bad.kappa = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hp;
  bad.sigma = -300.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hp;
  bad.regress_fraction = 1.5;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hp;
  bad.tie_credit = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = hp;
  bad.regress_fraction = 0.0;
  CHECK_NOTHROW(bad.validate());
  bad.regress_fraction = 1.0;
  CHECK_NOTHROW(bad.validate());
}
