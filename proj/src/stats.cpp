#include "fakerev/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>

#include "fakerev/csv.hpp"
#include "fakerev/distributions.hpp"
#include "fakerev/error.hpp"

namespace fakerev {
namespace {

double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  // Avoid printing "-0.0000".
  std::string s = buf;
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string general(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

AnovaResult anova_oneway(std::span<const std::vector<double>> groups) {
  if (groups.size() < 2) throw PreconditionError("anova: need at least two groups");
  AnovaResult r;
  std::size_t n = 0;
  double total = 0.0;
  for (const auto& g : groups) {
    if (g.empty()) throw PreconditionError("anova: empty group");
    for (double x : g) {
      if (!std::isfinite(x)) throw PreconditionError("anova: non-finite observation");
      total += x;
    }
    n += g.size();
    r.group_sizes.push_back(g.size());
    r.group_means.push_back(mean_of(g));
  }
  if (n <= groups.size()) throw PreconditionError("anova: need more observations than groups");
  r.grand_mean = total / static_cast<double>(n);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    const double d = r.group_means[i] - r.grand_mean;
    r.ss_between += static_cast<double>(groups[i].size()) * d * d;
    for (double x : groups[i]) {
      const double e = x - r.group_means[i];
      r.ss_within += e * e;
    }
  }
  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(n - groups.size());
  const bool equal_means = std::all_of(r.group_means.begin(), r.group_means.end(),
                                       [&](double m) { return m == r.group_means.front(); });
  if (r.ss_within == 0.0) {
    if (equal_means || r.ss_between == 0.0) {
      r.f = 0.0;
      r.p = 1.0;
    } else {
      r.f = std::numeric_limits<double>::infinity();
      r.p = 0.0;
      r.infinite_f = true;
    }
    return r;
  }
  r.f = (r.ss_between / r.df_between) / (r.ss_within / r.df_within);
  r.p = f_sf(r.f, r.df_between, r.df_within);
  return r;
}

std::string_view stars(Significance s) noexcept {
  switch (s) {
    case Significance::p001: return "***";
    case Significance::p01: return "**";
    case Significance::p05: return "*";
    case Significance::none: break;
  }
  return "";
}

Significance significance_of(double p) noexcept {
  if (p < 0.001) return Significance::p001;
  if (p < 0.01) return Significance::p01;
  if (p < 0.05) return Significance::p05;
  return Significance::none;
}

double TukeyResult::mean_diff(std::string_view a, std::string_view b) const {
  for (const auto& p : pairs) {
    if (p.group_a == a && p.group_b == b) return p.mean_diff;
    if (p.group_a == b && p.group_b == a) return -p.mean_diff;
  }
  throw PreconditionError("tukey: no pair " + std::string(a) + " / " + std::string(b));
}

TukeyResult tukey_hsd(std::span<const LabeledSample> groups, std::span<const double> alphas) {
  if (groups.size() < 2) throw PreconditionError("tukey: need at least two groups");
  std::vector<std::vector<double>> values;
  for (const auto& g : groups) {
    if (g.values.size() < 2) throw PreconditionError("tukey: group '" + g.name + "' needs at least two values");
    values.push_back(g.values);
  }
  const auto anova = anova_oneway(values);
  TukeyResult r;
  r.df_within = anova.df_within;
  r.ms_within = anova.ss_within / anova.df_within;
  r.degenerate = r.ms_within == 0.0;
  std::vector<double> sorted_alphas(alphas.begin(), alphas.end());
  std::sort(sorted_alphas.begin(), sorted_alphas.end());
  const int k = static_cast<int>(groups.size());
  for (std::size_t a = 0; a < groups.size(); ++a) {
    for (std::size_t b = a + 1; b < groups.size(); ++b) {
      TukeyPair p;
      p.group_a = groups[a].name;
      p.group_b = groups[b].name;
      p.mean_diff = anova.group_means[a] - anova.group_means[b];
      const double se = std::sqrt(r.ms_within / 2.0 *
                                  (1.0 / static_cast<double>(values[a].size()) + 1.0 / static_cast<double>(values[b].size())));
      if (r.degenerate) {
        p.q = p.mean_diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        p.p = p.mean_diff == 0.0 ? 1.0 : 0.0;
      } else {
        p.q = std::abs(p.mean_diff) / se;
        p.p = std::clamp(1.0 - ptukey(p.q, k, r.df_within), 0.0, 1.0);
      }
      p.level = Significance::none;
      for (double alpha : sorted_alphas) {
        if (p.p < alpha) {
          p.level = alpha <= 0.001 ? Significance::p001 : alpha <= 0.01 ? Significance::p01 : Significance::p05;
          break;
        }
      }
      r.pairs.push_back(std::move(p));
    }
  }
  return r;
}

void write_tukey_csv(std::ostream& out, const TukeyResult& result) {
  out << "group_a,group_b,mean_diff,q,p,stars\n";
  for (const auto& p : result.pairs) {
    const std::vector<std::string> row = {p.group_a, p.group_b, fixed(p.mean_diff, 4), fixed(p.q, 4), fixed(p.p, 4),
                                          std::string(stars(p.level))};
    csv::write_row(out, row);
  }
}

MeanCi mean_ci(std::span<const double> values, double level) {
  if (values.size() < 2) throw PreconditionError("mean_ci: need at least two values");
  if (!(level > 0.0 && level < 1.0)) throw PreconditionError("mean_ci: level must lie in (0, 1)");
  const double m = mean_of(values);
  double ss = 0.0;
  for (double x : values) ss += (x - m) * (x - m);
  const double n = static_cast<double>(values.size());
  const double half = t_quantile(0.5 + level / 2.0, n - 1.0) * std::sqrt(ss / (n - 1.0) / n);
  return {m, m - half, m + half};
}

VariableTable build_variable_table(const ReviewSet& set, std::span<const StyleMetricVector> style,
                                   const ChainMap& chains) {
  if (style.size() != set.size()) throw PreconditionError("variable table: style rows do not match reviews");
  VariableTable t;
  t.names = {"Rating",      "#Friends", "#Reviews",    "#Photos",   "AvgRating", "PriceLevel",
             "#RestReviews", "#Visits",  "NormVisits",  "ChainStatus", "Perplexity", "Coherence",
             "ARI",          "#DW",      "RTime",       "Sentiment"};
  t.categories = {"Review",     "User",       "User",       "User",    "Restaurant", "Restaurant",
                  "Restaurant", "Restaurant", "Restaurant", "Restaurant", "Writing", "Writing",
                  "Writing",    "Writing",    "Writing",    "Writing"};
  t.columns.assign(t.names.size(), std::vector<double>(set.size()));
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto& r = set[i];
    const auto& s = style[i];
    const double row[] = {static_cast<double>(r.rating),
                          static_cast<double>(r.num_friends),
                          static_cast<double>(r.num_user_reviews),
                          static_cast<double>(r.num_user_photos),
                          r.avg_rating,
                          static_cast<double>(r.price_level),
                          static_cast<double>(r.num_rest_reviews),
                          static_cast<double>(r.num_visits),
                          r.norm_visits,
                          is_chain(chains, r.restaurant_name) ? 1.0 : 0.0,
                          s.ppl,
                          s.tc,
                          s.ari,
                          static_cast<double>(s.num_difficult_words),
                          s.rtime_seconds,
                          s.sentiment};
    for (std::size_t v = 0; v < t.columns.size(); ++v) t.columns[v][i] = row[v];
  }
  return t;
}

SensitivityTable sensitivity(const VariableTable& vars, std::span<const SweepColumn> sweep, Exec exec) {
  if (vars.names.size() != vars.columns.size() || vars.categories.size() != vars.columns.size()) {
    throw PreconditionError("sensitivity: variable table is inconsistent");
  }
  const std::size_t n = vars.rows();
  for (const auto& col : vars.columns) {
    if (col.size() != n) throw PreconditionError("sensitivity: ragged variable table");
  }
  for (const auto& s : sweep) {
    if (s.flags.size() != n) throw PreconditionError("sensitivity: flags for threshold " + s.label + " do not cover every review");
  }
  SensitivityTable t;
  t.variables = vars.names;
  t.categories = vars.categories;
  t.total = n;
  for (const auto& s : sweep) {
    t.threshold_labels.push_back(s.label);
    t.thresholds.push_back(s.threshold);
    const auto flagged = static_cast<std::size_t>(std::count(s.flags.begin(), s.flags.end(), std::uint8_t{1}));
    t.flagged_count.push_back(flagged);
    t.flagged_fraction.push_back(n ? static_cast<double>(flagged) / static_cast<double>(n) : 0.0);
  }
  const std::size_t nv = vars.columns.size();
  t.rows.resize(sweep.size() * nv);
  for_each_index(t.rows.size(), exec, [&](std::size_t job) {
    const std::size_t ti = job / nv;
    const std::size_t vi = job % nv;
    std::vector<std::vector<double>> groups(2);
    for (std::size_t i = 0; i < n; ++i) groups[sweep[ti].flags[i] ? 1 : 0].push_back(vars.columns[vi][i]);
    SensitivityRow row;
    row.threshold_label = sweep[ti].label;
    row.threshold = sweep[ti].threshold;
    row.variable = vars.names[vi];
    row.category = vars.categories[vi];
    row.n_human = groups[0].size();
    row.n_ai = groups[1].size();
    row.mean_human = groups[0].empty() ? std::numeric_limits<double>::quiet_NaN() : mean_of(groups[0]);
    row.mean_ai = groups[1].empty() ? std::numeric_limits<double>::quiet_NaN() : mean_of(groups[1]);
    row.flagged_fraction = t.flagged_fraction[ti];
    row.computable = !groups[0].empty() && !groups[1].empty() && n > 2;
    if (row.computable) row.anova = anova_oneway(groups);
    t.rows[job] = std::move(row);
  });
  return t;
}

void write_sensitivity_csv(std::ostream& out, const SensitivityTable& table) {
  out << "threshold,variable,mean_human,mean_ai,f,p,stars,flagged_fraction\n";
  for (const auto& r : table.rows) {
    const auto mean = [](double v) { return std::isnan(v) ? std::string("NA") : fixed(v, 4); };
    std::vector<std::string> row = {r.threshold_label, r.variable, mean(r.mean_human), mean(r.mean_ai)};
    if (r.computable) {
      row.push_back(fixed(r.anova.f, 4));
      row.push_back(fixed(r.anova.p, 4));
      row.emplace_back(stars(significance_of(r.anova.p)));
    } else {
      row.insert(row.end(), {"NA", "NA", ""});
    }
    row.push_back(fixed(r.flagged_fraction, 6));
    csv::write_row(out, row);
  }
}

void write_sensitivity_text(std::ostream& out, const SensitivityTable& table) {
  for (std::size_t ti = 0; ti < table.threshold_labels.size(); ++ti) {
    if (ti) out << '\n';
    out << "Threshold " << table.threshold_labels[ti] << " (t=" << fixed(table.thresholds[ti], 4) << "): "
        << table.flagged_count[ti] << " of " << table.total << " flagged AI ("
        << fixed(100.0 * table.flagged_fraction[ti], 2) << "%)\n";
    out << std::left << std::setw(14) << "Name" << std::setw(12) << "Category" << std::right << std::setw(12) << "Human"
        << std::setw(12) << "AI" << "  " << "F-statistic" << '\n';
    for (std::size_t vi = 0; vi < table.variables.size(); ++vi) {
      const auto& r = table.at(ti, vi);
      const auto mean = [](double v) { return std::isnan(v) ? std::string("n/a") : fixed(v, 2); };
      std::string f = "n/a";
      if (r.computable) f = fixed(r.anova.f, 2) + std::string(stars(significance_of(r.anova.p)));
      out << std::left << std::setw(14) << r.variable << std::setw(12) << r.category << std::right << std::setw(12)
          << mean(r.mean_human) << std::setw(12) << mean(r.mean_ai) << "  " << f << '\n';
    }
    out << "*p<.05, **p<.01, ***p<.001\n";
  }
}

std::vector<std::filesystem::path> write_figure_csvs(const std::filesystem::path& dir, const SensitivityTable& table,
                                                     const VariableTable& vars, std::span<const SweepColumn> sweep) {
  std::vector<std::filesystem::path> written;
  auto open = [&](const std::string& name) {
    written.push_back(dir / name);
    std::ofstream out(written.back(), std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + written.back().string() + "'");
    return out;
  };
  {
    auto out = open("flagged_fraction.csv");
    out << "threshold,t,flagged,total,percent\n";
    for (std::size_t ti = 0; ti < table.thresholds.size(); ++ti) {
      const std::vector<std::string> row = {table.threshold_labels[ti], general(table.thresholds[ti]),
                                            std::to_string(table.flagged_count[ti]), std::to_string(table.total),
                                            fixed(100.0 * table.flagged_fraction[ti], 4)};
      csv::write_row(out, row);
    }
  }
  const std::pair<const char*, std::vector<std::string>> figures[] = {
      {"sensitivity_review_user.csv", {"Review", "User"}},
      {"sensitivity_restaurant.csv", {"Restaurant"}},
      {"sensitivity_writing.csv", {"Writing"}},
  };
  for (const auto& [name, cats] : figures) {
    auto out = open(name);
    out << "threshold,t,variable,group,n,mean,ci_low,ci_high,p,stars\n";
    for (std::size_t ti = 0; ti < table.thresholds.size(); ++ti) {
      for (std::size_t vi = 0; vi < table.variables.size(); ++vi) {
        if (std::find(cats.begin(), cats.end(), table.categories[vi]) == cats.end()) continue;
        const auto& r = table.at(ti, vi);
        for (int g = 0; g < 2; ++g) {
          std::vector<double> values;
          for (std::size_t i = 0; i < vars.rows(); ++i) {
            if ((sweep[ti].flags[i] != 0) == (g == 1)) values.push_back(vars.columns[vi][i]);
          }
          std::vector<std::string> row = {table.threshold_labels[ti], general(table.thresholds[ti]), r.variable,
                                          g ? "AI" : "Human", std::to_string(values.size())};
          if (values.empty()) {
            row.insert(row.end(), {"NA", "NA", "NA"});
          } else if (values.size() == 1) {
            row.insert(row.end(), {fixed(values[0], 4), "NA", "NA"});
          } else {
            const auto ci = mean_ci(values);
            row.insert(row.end(), {fixed(ci.mean, 4), fixed(ci.low, 4), fixed(ci.high, 4)});
          }
          if (r.computable) {
            row.push_back(fixed(r.anova.p, 4));
            row.emplace_back(stars(significance_of(r.anova.p)));
          } else {
            row.insert(row.end(), {"NA", ""});
          }
          csv::write_row(out, row);
        }
      }
    }
  }
  return written;
}

}  // namespace fakerev
