#include "eloline/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>

#include "json.hpp"

namespace eloline {

namespace {

using nlohmann::json;

constexpr const char* kGamesHeader = "date,season,home,away,home_points,away_points,neutral";

std::vector<std::string> parse_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"' && field.empty()) {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

int parse_int(const std::string& s) {
  int value = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw std::invalid_argument("invalid integer '" + s + "'");
  }
  return value;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::map<std::string, std::string> load_aliases(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open alias file '" + path + "'");
  std::map<std::string, std::string> out;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    if (line_no == 1 && line == "old_name,canonical_name") continue;
    auto fields = parse_csv_line(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw DataError(path + ":" + std::to_string(line_no) +
                      ": expected old_name,canonical_name");
    }
    out[fields[0]] = fields[1];
  }
  return out;
}

std::vector<GameRecord> load_games(const std::string& path, const std::string& alias_path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open games file '" + path + "'");
  std::map<std::string, std::string> aliases;
  if (!alias_path.empty()) aliases = load_aliases(alias_path);
  auto canonical = [&](const std::string& name) {
    auto it = aliases.find(name);
    return it == aliases.end() ? name : it->second;
  };

  std::string line;
  long line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw DataError(path + ":" + std::to_string(line_no) + ": " + msg);
  };

  if (!std::getline(in, line)) fail("empty file, expected header '" + std::string(kGamesHeader) + "'");
  ++line_no;
  strip_cr(line);
  if (line != kGamesHeader) fail("unknown header, expected '" + std::string(kGamesHeader) + "'");

  std::vector<GameRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    strip_cr(line);
    if (line.empty()) continue;
    auto fields = parse_csv_line(line);
    if (fields.size() != 7) {
      fail("expected 7 fields, got " + std::to_string(fields.size()));
    }
    GameRecord game;
    try {
      game.date = Date::parse(fields[0]);
      game.season = parse_int(fields[1]);
      game.home = canonical(fields[2]);
      game.away = canonical(fields[3]);
      if (game.home.empty() || game.away.empty()) throw std::invalid_argument("empty team name");
      if (game.home == game.away) {
        throw std::invalid_argument("team '" + game.home + "' plays itself");
      }
      bool has_home = !fields[4].empty();
      bool has_away = !fields[5].empty();
      if (has_home != has_away) {
        throw std::invalid_argument("scores must both be present or both be empty");
      }
      if (has_home) {
        int hp = parse_int(fields[4]);
        int ap = parse_int(fields[5]);
        if (hp < 0 || ap < 0) throw std::invalid_argument("points must be nonnegative");
        game.home_points = hp;
        game.away_points = ap;
      }
      if (fields[6] == "0") {
        game.neutral_site = false;
      } else if (fields[6] == "1") {
        game.neutral_site = true;
      } else {
        throw std::invalid_argument("neutral must be 0 or 1, got '" + fields[6] + "'");
      }
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    out.push_back(std::move(game));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const GameRecord& a, const GameRecord& b) { return a.date < b.date; });
  return out;
}

void save_games(const std::string& path, std::span<const GameRecord> games) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write games file '" + path + "'");
  out << kGamesHeader << "\n";
  for (const GameRecord& game : games) {
    out << game.date.str() << ',' << game.season << ',' << csv_escape(game.home) << ','
        << csv_escape(game.away) << ',';
    if (game.home_points) out << *game.home_points;
    out << ',';
    if (game.away_points) out << *game.away_points;
    out << ',' << (game.neutral_site ? 1 : 0) << "\n";
  }
  if (!out) throw DataError("failed writing games file '" + path + "'");
}

std::string format_double(double x) {
  char buf[32];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, p);
}

void save_book(const RatingBook& book, const std::string& path) {
  json j;
  j["schema_version"] = 1;
  j["mode"] = mode_name(book.mode());
  j["lattice"] = {{"center", book.lattice().center},
                  {"spacing", book.lattice().spacing},
                  {"half_lines", book.lattice().half_lines}};
  const HyperParams& hp = book.params();
  j["hyperparams"] = {{"kappa", hp.kappa},
                      {"sigma", hp.sigma},
                      {"r0", hp.r0},
                      {"r_hfa", hp.r_hfa},
                      {"regress_fraction", hp.regress_fraction},
                      {"tie_credit", hp.tie_credit}};
  j["initial"] = book.initial_ratings();
  j["record_history"] = book.history_enabled();
  j["last_date"] = book.last_date() == Date() ? std::string() : book.last_date().str();
  j["season"] = book.season();

  json current = json::object();
  for (const auto& [team, ratings] : book.current()) current[team] = ratings;
  j["current"] = std::move(current);

  json history = json::object();
  for (const auto& [team, entries] : book.history()) {
    json arr = json::array();
    for (const HistoryEntry& e : entries) {
      arr.push_back({{"date", e.date.str()}, {"ratings", e.ratings}});
    }
    history[team] = std::move(arr);
  }
  j["history"] = std::move(history);

  std::ofstream out(path);
  if (!out) throw DataError("cannot write book snapshot '" + path + "'");
  out << j.dump(2) << "\n";
  if (!out) throw DataError("failed writing book snapshot '" + path + "'");
}

RatingBook load_book(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open book snapshot '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(path + ": " + e.what());
  }
  try {
    int version = j.at("schema_version").get<int>();
    if (version != 1) {
      throw DataError(path + ": snapshot schema version " + std::to_string(version) +
                      " is not supported (this build reads version 1)");
    }
    ComparisonMode mode = mode_from_name(j.at("mode").get<std::string>());
    const json& jl = j.at("lattice");
    MarginLattice lattice{jl.at("center").get<double>(), jl.at("spacing").get<double>(),
                          jl.at("half_lines").get<int>()};
    const json& jh = j.at("hyperparams");
    HyperParams hp;
    hp.kappa = jh.at("kappa").get<double>();
    hp.sigma = jh.at("sigma").get<double>();
    hp.r0 = jh.at("r0").get<double>();
    hp.r_hfa = jh.at("r_hfa").get<double>();
    hp.regress_fraction = jh.at("regress_fraction").get<double>();
    hp.tie_credit = jh.at("tie_credit").get<double>();

    RatingBook book(mode, lattice, hp, j.at("initial").get<std::vector<double>>(),
                    j.at("record_history").get<bool>());

    std::map<std::string, std::vector<double>> current;
    for (const auto& [team, ratings] : j.at("current").items()) {
      current[team] = ratings.get<std::vector<double>>();
    }
    std::map<std::string, std::vector<HistoryEntry>> history;
    for (const auto& [team, entries] : j.at("history").items()) {
      auto& list = history[team];
      for (const json& e : entries) {
        list.push_back({Date::parse(e.at("date").get<std::string>()),
                        e.at("ratings").get<std::vector<double>>()});
      }
    }
    std::string last = j.at("last_date").get<std::string>();
    book.restore_state(std::move(current), std::move(history),
                       last.empty() ? Date() : Date::parse(last), j.at("season").get<int>());
    return book;
  } catch (const json::exception& e) {
    throw DataError(path + ": malformed book snapshot: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw DataError(path + ": malformed book snapshot: " + e.what());
  }
}

void write_csv(const std::string& path, std::span<const std::string> header,
               std::span<const std::vector<std::string>> rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write '" + path + "'");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ',';
    out << csv_escape(header[i]);
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << csv_escape(row[i]);
    }
    out << "\n";
  }
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace eloline
