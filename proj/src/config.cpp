#include "eloline/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eloline/io.hpp"

namespace eloline {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& value) {
  const char* begin = value.c_str();
  char* end = nullptr;
  double x = std::strtod(begin, &end);
  if (end != begin + value.size() || value.empty()) {
    throw ConfigError("config key '" + key + "': invalid number '" + value + "'");
  }
  return x;
}

long parse_long(const std::string& key, const std::string& value) {
  long x = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': invalid integer '" + value + "'");
  }
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError("config key '" + key + "': invalid unsigned integer '" + value + "'");
  }
  return x;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

// Bare hyperparameter keys apply to both modes; `spread.` / `total.`
// prefixes narrow to one.
bool apply_hyper_key(HyperParams& hp, const std::string& key, const std::string& name,
                     const std::string& value) {
  if (name == "kappa") {
    hp.kappa = parse_double(key, value);
  } else if (name == "sigma") {
    hp.sigma = parse_double(key, value);
  } else if (name == "r0") {
    hp.r0 = parse_double(key, value);
  } else if (name == "r_hfa") {
    hp.r_hfa = parse_double(key, value);
  } else if (name == "regress") {
    hp.regress_fraction = parse_double(key, value);
  } else if (name == "tie_credit") {
    hp.tie_credit = parse_double(key, value);
  } else {
    return false;
  }
  return true;
}

void apply_key(Config& cfg, const std::string& key, const std::string& value) {
  if (key.rfind("spread.", 0) == 0) {
    if (!apply_hyper_key(cfg.spread, key, key.substr(7), value)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    return;
  }
  if (key.rfind("total.", 0) == 0) {
    if (!apply_hyper_key(cfg.total, key, key.substr(6), value)) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    return;
  }
  if (apply_hyper_key(cfg.spread, key, key, value)) {
    apply_hyper_key(cfg.total, key, key, value);
    return;
  }
  if (key == "seed") {
    cfg.seed = parse_u64(key, value);
  } else if (key == "half_lines") {
    long n = parse_long(key, value);
    if (n < 0 || n > 100000) throw ConfigError("config key 'half_lines': out of range: " + value);
    cfg.half_lines = static_cast<int>(n);
  } else if (key == "spacing") {
    cfg.spacing = parse_double(key, value);
  } else if (key == "init") {
    cfg.init = value;
  } else if (key == "burn_in") {
    cfg.burn_in_games = parse_long(key, value);
  } else if (key == "history") {
    cfg.history = parse_bool(key, value);
  } else if (key == "games") {
    cfg.games_path = value;
  } else if (key == "book") {
    cfg.book_path = value;
  } else if (key == "out") {
    cfg.out_prefix = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

void Config::validate() const {
  try {
    spread.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("spread hyperparameters: ") + e.what());
  }
  try {
    total.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("total hyperparameters: ") + e.what());
  }
  if (half_lines < 0) throw ConfigError("half_lines must be nonnegative");
  if (!(spacing > 0.0)) throw ConfigError("spacing must be positive");
  if (init != "minbias" && init != "flat") {
    throw ConfigError("init must be minbias or flat, got '" + init + "'");
  }
  if (burn_in_games < -1) throw ConfigError("burn_in must be -1 (first season) or nonnegative");
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Config cfg;
  std::string line;
  long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::string text = trim(line);
    if (text.empty()) continue;
    std::size_t eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": expected key = value");
    }
    try {
      apply_key(cfg, trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

void apply_override(Config& cfg, const std::string& assignment) {
  std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("override '" + assignment + "': expected key=value");
  }
  apply_key(cfg, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

std::string resolved_config_text(const Config& cfg) {
  std::ostringstream out;
  out << "seed = " << cfg.seed << "\n";
  out << "half_lines = " << cfg.half_lines << "\n";
  out << "spacing = " << format_double(cfg.spacing) << "\n";
  out << "init = " << cfg.init << "\n";
  out << "burn_in = " << cfg.burn_in_games << "\n";
  out << "history = " << (cfg.history ? "true" : "false") << "\n";
  out << "games = " << cfg.games_path << "\n";
  out << "book = " << cfg.book_path << "\n";
  out << "out = " << cfg.out_prefix << "\n";
  const struct {
    const char* prefix;
    const HyperParams& hp;
  } modes[] = {{"spread", cfg.spread}, {"total", cfg.total}};
  for (const auto& m : modes) {
    out << m.prefix << ".kappa = " << format_double(m.hp.kappa) << "\n";
    out << m.prefix << ".sigma = " << format_double(m.hp.sigma) << "\n";
    out << m.prefix << ".r0 = " << format_double(m.hp.r0) << "\n";
    out << m.prefix << ".r_hfa = " << format_double(m.hp.r_hfa) << "\n";
    out << m.prefix << ".regress = " << format_double(m.hp.regress_fraction) << "\n";
    out << m.prefix << ".tie_credit = " << format_double(m.hp.tie_credit) << "\n";
  }
  return out.str();
}

}  // namespace eloline
