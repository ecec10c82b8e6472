#pragma once

#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "eloline/rating.hpp"
#include "eloline/types.hpp"

namespace eloline {

// Raised for unreadable, malformed, or schema-incompatible inputs. Messages
// carry the path and, for row-level problems, the 1-based line number.
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Games CSV: header "date,season,home,away,home_points,away_points,neutral",
// ISO dates, neutral 0/1, score fields both present or both empty
// (empty marks a scheduled game). Returned sorted by date, stable.
std::vector<GameRecord> load_games(const std::string& path,
                                   const std::string& alias_path = "");

void save_games(const std::string& path, std::span<const GameRecord> games);

// Two-column alias file: old_name,canonical_name (header optional).
std::map<std::string, std::string> load_aliases(const std::string& path);

// Book snapshots are JSON with a schema_version field. Ratings are written
// with 17 significant digits so a load reproduces the doubles exactly.
void save_book(const RatingBook& book, const std::string& path);
RatingBook load_book(const std::string& path);

// Full-precision decimal formatting (shortest text that parses back to the
// same double).
std::string format_double(double x);

// Minimal CSV writer for report tables; fields containing commas or quotes
// are quoted.
void write_csv(const std::string& path, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows);

}  // namespace eloline
