#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eloline {

// Calendar date, ISO-8601 text form. Packed as y*10000+m*100+d so that
// comparison order equals chronological order.
class Date {
 public:
  Date() = default;
  Date(int year, int month, int day);

  static Date parse(const std::string& iso);  // "YYYY-MM-DD"

  int year() const { return ymd_ / 10000; }
  int month() const { return (ymd_ / 100) % 100; }
  int day() const { return ymd_ % 100; }

  std::string str() const;

  auto operator<=>(const Date&) const = default;

 private:
  int ymd_ = 0;
};

struct GameRecord {
  Date date;
  int season = 0;
  std::string home;
  std::string away;
  std::optional<int> home_points;  // absent for scheduled games
  std::optional<int> away_points;
  bool neutral_site = false;

  bool played() const { return home_points.has_value() && away_points.has_value(); }
};

int days_in_month(int year, int month);

// The day after d; rolls months and years.
Date next_day(Date d);

enum class ComparisonMode { spread, total };

const char* mode_name(ComparisonMode mode);
ComparisonMode mode_from_name(const std::string& name);

// Game outcome from the home team's perspective: home-away for spreads,
// home+away for totals. Throws std::invalid_argument for unplayed games.
double comparison_value(const GameRecord& game, ComparisonMode mode);

// Uniformly spaced handicap lines, symmetric about a center line which is
// itself on the lattice. Index i maps to center + spacing*(i - half_lines);
// mirror(i) is the reflection through the center.
struct MarginLattice {
  double center = 0.0;
  double spacing = 1.0;
  int half_lines = 50;

  int size() const { return 2 * half_lines + 1; }
  double line(int i) const { return center + spacing * (i - half_lines); }
  int mirror(int i) const { return 2 * half_lines - i; }
  int center_index() const { return half_lines; }
  std::vector<double> lines() const;

  // Index of an exact lattice line; throws std::out_of_range when the value
  // is off-grid or outside the span.
  int index_of(double line_value) const;

  void validate() const;
};

struct HyperParams {
  double kappa = 32.0;            // rating points moved per unit of surprise
  double sigma = 300.0;           // rating-difference scale
  double r0 = 1500.0;             // rating origin
  double r_hfa = 0.0;             // home-side rating offset
  double regress_fraction = 0.6;  // deviation retained across an offseason
  double tie_credit = 0.5;        // observed outcome credited on a push

  void validate() const;  // throws std::invalid_argument
};

}  // namespace eloline
