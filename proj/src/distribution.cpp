#include "eloline/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eloline {

namespace {

void require_curve(const SurvivalCurve& curve) {
  if (curve.lines.size() != curve.probs.size() || curve.lines.size() < 2) {
    throw std::invalid_argument("survival curve needs matching lines/probs, at least 2 points");
  }
  for (std::size_t i = 0; i + 1 < curve.probs.size(); ++i) {
    if (curve.probs[i] < curve.probs[i + 1]) {
      throw std::invalid_argument("survival curve is not nonincreasing");
    }
  }
  for (double p : curve.probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("survival prob outside [0, 1]");
  }
}

}  // namespace

std::vector<double> monotone_project(std::vector<double> raw) {
  std::vector<double> level;
  std::vector<int> weight;
  level.reserve(raw.size());
  weight.reserve(raw.size());
  for (double x : raw) {
    double lv = x;
    int w = 1;
    while (!level.empty() && level.back() < lv) {
      lv = (level.back() * weight.back() + lv * w) / (weight.back() + w);
      w += weight.back();
      level.pop_back();
      weight.pop_back();
    }
    level.push_back(lv);
    weight.push_back(w);
  }
  std::vector<double> out;
  out.reserve(raw.size());
  for (std::size_t b = 0; b < level.size(); ++b) {
    double v = std::clamp(level[b], 0.0, 1.0);
    for (int k = 0; k < weight[b]; ++k) out.push_back(v);
  }
  return out;
}

SurvivalCurve predict_survival(const RatingBook& book, const std::string& home,
                               const std::string& away, Date date, bool neutral) {
  const MarginLattice& lat = book.lattice();
  const auto& rh = book.ratings_or_initial(home);
  const auto& ra = book.ratings_or_initial(away);
  double hfa = neutral ? 0.0 : book.params().r_hfa;

  std::vector<double> raw(lat.size());
  for (int i = 0; i < lat.size(); ++i) {
    raw[i] = win_probability(rh[i] - ra[lat.mirror(i)] + hfa, book.params().sigma);
  }

  SurvivalCurve curve;
  curve.lines = lat.lines();
  curve.probs = monotone_project(std::move(raw));
  curve.home = home;
  curve.away = away;
  curve.date = date;
  curve.mode = book.mode();
  curve.hfa_applied = hfa;
  return curve;
}

Pmf pmf_from_survival(const SurvivalCurve& curve) {
  require_curve(curve);
  const auto& s = curve.probs;
  const std::size_t n = s.size();
  Pmf pmf;
  pmf.support = curve.lines;
  pmf.masses.resize(n);
  pmf.masses[0] = 1.0 - s[0];
  for (std::size_t i = 1; i < n; ++i) pmf.masses[i] = s[i - 1] - s[i];
  pmf.masses[n - 1] += s[n - 1];
  return pmf;
}

double median(const SurvivalCurve& curve) {
  require_curve(curve);
  const auto& s = curve.probs;
  const auto& l = curve.lines;
  const std::size_t n = s.size();
  if (s.front() < 0.5) return l.front();
  if (s.back() > 0.5) return l.back();

  // Last line still at or above 1/2; the curve crosses within the next cell.
  std::size_t i = n - 1;
  while (s[i] < 0.5) --i;
  if (s[i] == 0.5) {
    std::size_t j = i;
    while (j > 0 && s[j - 1] == 0.5) --j;
    return 0.5 * (l[j] + l[i]);
  }
  double d_lo = s[i] - 0.5;
  double d_hi = 0.5 - s[i + 1];
  if (d_lo < d_hi) return l[i];
  if (d_lo > d_hi) return l[i + 1];
  return l[i] + d_lo / (s[i] - s[i + 1]) * (l[i + 1] - l[i]);
}

double mean(const Pmf& pmf) {
  double e = 0.0;
  for (std::size_t i = 0; i < pmf.support.size(); ++i) e += pmf.support[i] * pmf.masses[i];
  return e;
}

double mean_from_survival(const SurvivalCurve& curve) {
  require_curve(curve);
  double e = curve.lines.front();
  for (std::size_t i = 0; i + 1 < curve.probs.size(); ++i) {
    e += curve.probs[i] * (curve.lines[i + 1] - curve.lines[i]);
  }
  return e;
}

double quantile(const SurvivalCurve& curve, double q) {
  require_curve(curve);
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile level must lie in (0, 1)");
  const auto& s = curve.probs;
  const auto& l = curve.lines;
  const std::size_t n = s.size();
  double t = 1.0 - q;
  if (s.front() < t) return l.front();
  if (s.back() > t) return l.back();

  // Indices in [lo, hi) sit exactly at t; a run of them resolves to its
  // midpoint, an empty run to interpolation across the crossing cell.
  std::size_t hi = 0;
  while (hi < n && s[hi] >= t) ++hi;
  std::size_t lo = n;
  while (lo > 0 && s[lo - 1] <= t) --lo;
  if (hi > lo) return 0.5 * (l[lo] + l[hi - 1]);
  return l[lo - 1] + (s[lo - 1] - t) / (s[lo - 1] - s[lo]) * (l[lo] - l[lo - 1]);
}

double interval_probability(const SurvivalCurve& curve, double lo, double hi) {
  if (!(lo < hi)) throw std::invalid_argument("interval requires lo < hi");
  return survival_at(curve, lo) - survival_at(curve, hi);
}

double survival_at(const SurvivalCurve& curve, double value) {
  require_curve(curve);
  const auto& l = curve.lines;
  const auto& s = curve.probs;
  if (value <= l.front()) return s.front();
  if (value >= l.back()) return s.back();
  std::size_t i = static_cast<std::size_t>(
      std::upper_bound(l.begin(), l.end(), value) - l.begin() - 1);
  if (l[i] == value) return s[i];
  double w = (value - l[i]) / (l[i + 1] - l[i]);
  return s[i] + w * (s[i + 1] - s[i]);
}

double observed_percentile(const SurvivalCurve& curve, double observed) {
  return 1.0 - survival_at(curve, observed);
}

std::pair<double, double> orthogonal_points(double spread_mean, double total_mean) {
  return {0.5 * (total_mean + spread_mean), 0.5 * (total_mean - spread_mean)};
}

}  // namespace eloline
