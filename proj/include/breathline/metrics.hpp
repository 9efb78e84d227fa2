#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "breathline/core.hpp"

namespace breathline {

// ---------------------------------------------------------------------------
// Classification statistics (Exhalation is the positive class)
// ---------------------------------------------------------------------------

struct ConfusionMatrix {
  std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

  std::size_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

inline ConfusionMatrix confusion(const std::vector<BreathState>& pred,
                                 const std::vector<BreathState>& truth) {
  if (pred.size() != truth.size())
    throw InvalidInputError("prediction/truth length mismatch: " +
                            std::to_string(pred.size()) + " vs " +
                            std::to_string(truth.size()));
  ConfusionMatrix m;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == BreathState::Exhalation;
    const bool t = truth[i] == BreathState::Exhalation;
    if (p && t) ++m.tp;
    else if (p && !t) ++m.fp;
    else if (!p && t) ++m.fn;
    else ++m.tn;
  }
  return m;
}

struct ClassificationReport {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double accuracy = 0.0;
};

/// Per-class precision/recall/F1 with each class taken as positive in turn,
/// averaged weighted by truth-class support. A class never predicted gets
/// precision 0 for that term.
inline ClassificationReport weighted_report(const std::vector<BreathState>& pred,
                                            const std::vector<BreathState>& truth) {
  const ConfusionMatrix m = confusion(pred, truth);
  const double support_pos = static_cast<double>(m.tp + m.fn);
  const double support_neg = static_cast<double>(m.tn + m.fp);
  if (support_pos == 0.0 || support_neg == 0.0)
    throw InvalidInputError("degenerate truth: both classes must be present");
  const double total = static_cast<double>(m.total());

  auto safe_div = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  auto f1_of = [&](double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; };

  const double prec_pos = safe_div(static_cast<double>(m.tp),
                                   static_cast<double>(m.tp + m.fp));
  const double rec_pos = safe_div(static_cast<double>(m.tp), support_pos);
  const double prec_neg = safe_div(static_cast<double>(m.tn),
                                   static_cast<double>(m.tn + m.fn));
  const double rec_neg = safe_div(static_cast<double>(m.tn), support_neg);

  ClassificationReport r;
  r.precision = (prec_pos * support_pos + prec_neg * support_neg) / total;
  r.recall = (rec_pos * support_pos + rec_neg * support_neg) / total;
  r.f1 = (f1_of(prec_pos, rec_pos) * support_pos +
          f1_of(prec_neg, rec_neg) * support_neg) / total;
  r.accuracy = static_cast<double>(m.tp + m.tn) / total;
  return r;
}

// ---------------------------------------------------------------------------
// Rater panels
// ---------------------------------------------------------------------------

/// Rectangular rating grid: rows are raters, columns are items; entries may
/// be missing.
struct RaterMatrix {
  std::size_t raters = 0;
  std::size_t items = 0;
  std::vector<std::optional<double>> cells;

  RaterMatrix() = default;
  RaterMatrix(std::size_t r, std::size_t i)
      : raters(r), items(i), cells(r * i) {}

  std::optional<double>& at(std::size_t rater, std::size_t item) {
    return cells[rater * items + item];
  }
  const std::optional<double>& at(std::size_t rater, std::size_t item) const {
    return cells[rater * items + item];
  }

  std::vector<double> item_ratings(std::size_t item) const {
    std::vector<double> out;
    for (std::size_t r = 0; r < raters; ++r)
      if (at(r, item)) out.push_back(*at(r, item));
    return out;
  }
};

/// CSV: one row per rater, one column per item, blank cells for missing
/// ratings.
inline RaterMatrix parse_rater_csv(std::string_view text) {
  std::vector<std::vector<std::optional<double>>> rows;
  std::size_t pos = 0, lineno = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    std::vector<std::optional<double>> row;
    std::size_t p = 0;
    while (true) {
      auto comma = line.find(',', p);
      std::string_view field = line.substr(
          p, comma == std::string_view::npos ? line.size() - p : comma - p);
      // trim spaces
      while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
      while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
      if (field.empty()) {
        row.push_back(std::nullopt);
      } else {
        std::string tmp(field);
        char* end = nullptr;
        const double v = std::strtod(tmp.c_str(), &end);
        if (end != tmp.c_str() + tmp.size())
          throw FormatError("ratings CSV line " + std::to_string(lineno) +
                            ": bad number '" + tmp + "'");
        row.push_back(v);
      }
      if (comma == std::string_view::npos) break;
      p = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw FormatError("ratings CSV is empty");
  const std::size_t items = rows.front().size();
  for (const auto& row : rows)
    if (row.size() != items)
      throw FormatError("ratings CSV rows have differing column counts");
  RaterMatrix m(rows.size(), items);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t i = 0; i < items; ++i) m.at(r, i) = rows[r][i];
  return m;
}

/// Per-item modal agreement: the fraction of raters whose rating (rounded to
/// the nearest whole breath) equals the item's most common rating.
inline std::vector<double> percent_agreement(const RaterMatrix& ratings) {
  std::vector<double> out;
  out.reserve(ratings.items);
  for (std::size_t item = 0; item < ratings.items; ++item) {
    std::map<long long, std::size_t> counts;
    std::size_t total = 0;
    for (std::size_t r = 0; r < ratings.raters; ++r)
      if (ratings.at(r, item)) {
        ++counts[std::llround(*ratings.at(r, item))];
        ++total;
      }
    if (total == 0)
      throw InvalidInputError("item " + std::to_string(item) +
                              " has no ratings");
    std::size_t modal = 0;
    for (const auto& [value, count] : counts) modal = std::max(modal, count);
    out.push_back(static_cast<double>(modal) / static_cast<double>(total));
  }
  return out;
}

/// Krippendorff's alpha with the interval (squared difference) metric over
/// real-valued ratings: alpha = 1 - D_o / D_e, where D_o is the observed
/// within-item disagreement of pairable values and D_e the expected
/// disagreement over all pairs of pairable values. Items with fewer than two
/// ratings drop out. All-identical ratings leave D_e = 0 and alpha
/// undefined, which throws.
inline double krippendorff_alpha(const RaterMatrix& ratings) {
  double n = 0.0;           // pairable values
  double grand_sum = 0.0;   // over pairable values
  double grand_sumsq = 0.0;
  double observed = 0.0;    // sum over units of pair disagreement / (m_u - 1)
  for (std::size_t item = 0; item < ratings.items; ++item) {
    const auto vals = ratings.item_ratings(item);
    const double m = static_cast<double>(vals.size());
    if (vals.size() < 2) continue;
    double s = 0.0, ss = 0.0;
    for (double v : vals) {
      s += v;
      ss += v * v;
    }
    // sum over ordered pairs (i != j) of (x_i - x_j)^2 = 2*m*ss - 2*s^2
    observed += (2.0 * m * ss - 2.0 * s * s) / (m - 1.0);
    n += m;
    grand_sum += s;
    grand_sumsq += ss;
  }
  if (n < 2.0)
    throw InvalidInputError(
        "alpha requires at least one item with two or more ratings");
  const double d_o = observed / n;
  const double pair_sum = 2.0 * n * grand_sumsq - 2.0 * grand_sum * grand_sum;
  const double d_e = pair_sum / (n * (n - 1.0));
  if (d_e <= 0.0)
    throw InvalidInputError(
        "alpha undefined: zero expected disagreement (all ratings identical)");
  return 1.0 - d_o / d_e;
}

// ---------------------------------------------------------------------------
// Rate-estimate error versus observer panels
// ---------------------------------------------------------------------------

struct ErrorReport {
  double error_pct = 0.0;
  double sigma_pct = 0.0;

  friend bool operator==(const ErrorReport&, const ErrorReport&) = default;
};

/// Absolute relative error of a rate estimate against an observer mean, as a
/// percentage of the *prediction*, with first-order uncertainty propagation:
///   error = 100 |m - p| / p
///   sigma = 100 sqrt((sigma_m / p)^2 + (m sigma_p / p^2)^2)
/// A no-estimate input yields an empty result (rendered as a dash).
inline std::optional<ErrorReport> relative_error(
    const RespirationEstimate& pred, double obs_mean, double obs_std) {
  if (!pred.ok) return std::nullopt;
  if (!(pred.rate_bpm > 0.0))
    throw InvalidInputError("relative error needs a positive predicted rate");
  if (obs_std < 0.0) throw InvalidInputError("observer std must be >= 0");
  const double p = pred.rate_bpm;
  ErrorReport report;
  report.error_pct = 100.0 * std::abs(obs_mean - p) / p;
  report.sigma_pct =
      100.0 * std::hypot(obs_std / p, obs_mean * pred.std_bpm / (p * p));
  return report;
}

}  // namespace breathline
