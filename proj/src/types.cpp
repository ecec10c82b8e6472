#include "eloline/types.hpp"

#include <cmath>
#include <cstdio>

namespace eloline {

int days_in_month(int year, int month) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month == 2) {
    bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return table[month - 1];
}

Date next_day(Date d) {
  int y = d.year();
  int m = d.month();
  int day = d.day() + 1;
  if (day > days_in_month(y, m)) {
    day = 1;
    if (++m > 12) {
      m = 1;
      ++y;
    }
  }
  return Date(y, m, day);
}

Date::Date(int year, int month, int day) {
  if (year < 1 || year > 9999 || month < 1 || month > 12 || day < 1 ||
      day > days_in_month(year, month)) {
    throw std::invalid_argument("invalid date: year=" + std::to_string(year) +
                                " month=" + std::to_string(month) +
                                " day=" + std::to_string(day));
  }
  ymd_ = year * 10000 + month * 100 + day;
}

Date Date::parse(const std::string& iso) {
  auto bad = [&] { throw std::invalid_argument("invalid date '" + iso + "', expected YYYY-MM-DD"); };
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') bad();
  for (int i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (iso[i] < '0' || iso[i] > '9') bad();
  }
  int year = std::stoi(iso.substr(0, 4));
  int month = std::stoi(iso.substr(5, 2));
  int day = std::stoi(iso.substr(8, 2));
  try {
    return Date(year, month, day);
  } catch (const std::invalid_argument&) {
    bad();
  }
  return Date();  // unreachable
}

std::string Date::str() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year(), month(), day());
  return buf;
}

const char* mode_name(ComparisonMode mode) {
  return mode == ComparisonMode::spread ? "spread" : "total";
}

ComparisonMode mode_from_name(const std::string& name) {
  if (name == "spread") return ComparisonMode::spread;
  if (name == "total") return ComparisonMode::total;
  throw std::invalid_argument("unknown comparison mode '" + name + "' (spread|total)");
}

double comparison_value(const GameRecord& game, ComparisonMode mode) {
  if (!game.played()) {
    throw std::invalid_argument("game " + game.home + " vs " + game.away + " on " +
                                game.date.str() + " has no score");
  }
  double h = *game.home_points;
  double a = *game.away_points;
  return mode == ComparisonMode::spread ? h - a : h + a;
}

std::vector<double> MarginLattice::lines() const {
  std::vector<double> out(size());
  for (int i = 0; i < size(); ++i) out[i] = line(i);
  return out;
}

int MarginLattice::index_of(double line_value) const {
  double pos = (line_value - center) / spacing + half_lines;
  int idx = static_cast<int>(std::lround(pos));
  if (idx < 0 || idx >= size() || std::abs(line(idx) - line_value) > 1e-9 * spacing) {
    throw std::out_of_range("value " + std::to_string(line_value) + " is not a lattice line");
  }
  return idx;
}

void MarginLattice::validate() const {
  if (!(spacing > 0.0)) throw std::invalid_argument("lattice spacing must be positive");
  if (half_lines < 0) throw std::invalid_argument("lattice half_lines must be nonnegative");
  if (!std::isfinite(center)) throw std::invalid_argument("lattice center must be finite");
}

void HyperParams::validate() const {
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!std::isfinite(r0)) throw std::invalid_argument("r0 must be finite");
  if (!std::isfinite(r_hfa)) throw std::invalid_argument("r_hfa must be finite");
  if (!(regress_fraction >= 0.0 && regress_fraction <= 1.0)) {
    throw std::invalid_argument("regress_fraction must lie in [0, 1]");
  }
  if (!(tie_credit >= 0.0 && tie_credit <= 1.0)) {
    throw std::invalid_argument("tie_credit must lie in [0, 1]");
  }
}

}  // namespace eloline
