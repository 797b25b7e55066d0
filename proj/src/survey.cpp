#include "fakerev/survey.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fakerev/csv.hpp"
#include "fakerev/error.hpp"
#include "fakerev/random.hpp"
#include "fakerev/text.hpp"

namespace fakerev {
namespace {

struct Candidate {
  std::size_t index;
  std::size_t words;
};

std::string numbered(char prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%02zu", prefix, i + 1);
  return buf;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

void mean_std(const std::vector<double>& v, double& mean, double& sd) {
  mean = 0.0;
  sd = 0.0;
  if (v.empty()) return;
  mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() < 2) return;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

std::string_view to_string(SurveyCategory c) noexcept {
  switch (c) {
    case SurveyCategory::same_long: return "Same-Long";
    case SurveyCategory::same_short: return "Same-Short";
    case SurveyCategory::different_long: return "Different-Long";
    case SurveyCategory::different_short: return "Different-Short";
  }
  return "";
}

std::optional<SurveyCategory> parse_category(std::string_view text) noexcept {
  for (auto c : kSurveyCategories) {
    if (to_string(c) == text) return c;
  }
  return std::nullopt;
}

std::size_t word_count(std::string_view text) { return tokenize_words(text).size(); }

const SurveyPair* SurveyForm::find(std::string_view question_id) const {
  for (const auto* list : {&questions, &training}) {
    for (const auto& p : *list) {
      if (p.question_id == question_id) return &p;
    }
  }
  return nullptr;
}

SurveyForm build_survey(const ReviewSet& humans, const ReviewSet& fakes, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Candidate> hs;
  std::vector<Candidate> ais;
  for (std::size_t i = 0; i < humans.size(); ++i) hs.push_back({i, word_count(humans[i].text)});
  for (std::size_t i = 0; i < fakes.size(); ++i) ais.push_back({i, word_count(fakes[i].text)});
  rng.shuffle(std::span(hs));
  rng.shuffle(std::span(ais));
  std::vector<char> human_used(humans.size(), 0);
  std::vector<char> ai_used(fakes.size(), 0);

  auto is_long = [](std::size_t w) { return w > kLongThreshold && w <= kLongMax; };
  auto is_short = [](std::size_t w) { return w >= kShortMin && w < kLongThreshold; };

  // Greedy matching over the shuffled candidates; `same` is nullopt when the
  // restaurant does not matter.
  auto take = [&](const std::string& stratum, std::size_t wanted, auto&& length_ok, std::optional<bool> same) {
    std::vector<SurveyPair> out;
    for (const auto& h : hs) {
      if (out.size() == wanted) break;
      if (human_used[h.index] || !length_ok(h.words)) continue;
      const auto& hr = humans[h.index];
      for (const auto& a : ais) {
        if (ai_used[a.index]) continue;
        const auto gap = h.words > a.words ? h.words - a.words : a.words - h.words;
        if (gap > kMaxWordGap) continue;
        const auto& ar = fakes[a.index];
        if (same && (*same != (ar.restaurant_id == hr.restaurant_id))) continue;
        human_used[h.index] = 1;
        ai_used[a.index] = 1;
        SurveyPair p;
        p.human_id = hr.id;
        p.ai_id = ar.id;
        p.human_words = h.words;
        p.ai_words = a.words;
        // Held in (human, AI) order until the pair is presented.
        p.text_a = hr.text;
        p.text_b = ar.text;
        out.push_back(std::move(p));
        break;
      }
    }
    if (out.size() < wanted) {
      throw DataError("survey: stratum " + stratum + " has " + std::to_string(out.size()) + " of " +
                      std::to_string(wanted) + " pairs (short by " + std::to_string(wanted - out.size()) + ")");
    }
    return out;
  };

  std::vector<SurveyPair> questions;
  const std::pair<SurveyCategory, bool> plan[] = {{SurveyCategory::same_long, true},
                                                  {SurveyCategory::same_short, true},
                                                  {SurveyCategory::different_long, false},
                                                  {SurveyCategory::different_short, false}};
  for (const auto& [cat, same] : plan) {
    const bool long_cat = cat == SurveyCategory::same_long || cat == SurveyCategory::different_long;
    auto pairs = long_cat ? take(std::string(to_string(cat)), kPairsPerCategory, is_long, same)
                          : take(std::string(to_string(cat)), kPairsPerCategory, is_short, same);
    for (auto& p : pairs) {
      p.category = cat;
      questions.push_back(std::move(p));
    }
  }
  auto training = take("training", kTrainingPairs, [&](std::size_t w) { return is_long(w) || is_short(w); },
                       std::nullopt);

  auto present = [&](SurveyPair& p) {
    p.ai_position = rng.coin() ? 'B' : 'A';
    p.expected = p.ai_position;
    if (p.ai_position == 'A') std::swap(p.text_a, p.text_b);
  };

  rng.shuffle(std::span(questions));
  for (std::size_t i = 0; i < questions.size(); ++i) {
    questions[i].question_id = numbered('q', i);
    present(questions[i]);
  }
  for (std::size_t i = 0; i < training.size(); ++i) {
    training[i].question_id = numbered('t', i);
    training[i].category = SurveyCategory::different_short;
    present(training[i]);
  }
  std::set<std::size_t> checks;
  while (checks.size() < kAttentionChecks) checks.insert(static_cast<std::size_t>(rng.below(questions.size())));
  for (auto i : checks) {
    auto& q = questions[i];
    q.attention_check = true;
    q.expected = rng.coin() ? 'B' : 'A';
    q.instruction = std::string("Attention check: whatever you think of these reviews, select option ") + q.expected + ".";
  }

  SurveyForm form;
  form.seed = seed;
  form.training = std::move(training);
  form.questions = std::move(questions);
  return form;
}

namespace {

nlohmann::ordered_json pair_json(const SurveyPair& p, bool with_category) {
  nlohmann::ordered_json j;
  j["question_id"] = p.question_id;
  if (with_category) j["category"] = std::string(to_string(p.category));
  j["human_id"] = p.human_id;
  j["ai_id"] = p.ai_id;
  j["human_words"] = p.human_words;
  j["ai_words"] = p.ai_words;
  j["ai_position"] = std::string(1, p.ai_position);
  j["attention_check"] = p.attention_check;
  j["instruction"] = p.instruction;
  j["expected"] = std::string(1, p.expected);
  j["text_a"] = p.text_a;
  j["text_b"] = p.text_b;
  return j;
}

SurveyPair pair_from_json(const nlohmann::json& j, bool with_category) {
  SurveyPair p;
  p.question_id = j.at("question_id").get<std::string>();
  if (with_category) {
    const auto c = parse_category(j.at("category").get<std::string>());
    if (!c) throw DataError("survey form: unknown category in " + p.question_id);
    p.category = *c;
  }
  p.human_id = j.at("human_id").get<std::string>();
  p.ai_id = j.at("ai_id").get<std::string>();
  p.human_words = j.at("human_words").get<std::size_t>();
  p.ai_words = j.at("ai_words").get<std::size_t>();
  auto letter = [&](const char* key) {
    const auto s = j.at(key).get<std::string>();
    if (s != "A" && s != "B") throw DataError(std::string("survey form: ") + key + " must be A or B");
    return s[0];
  };
  p.ai_position = letter("ai_position");
  p.attention_check = j.at("attention_check").get<bool>();
  p.instruction = j.at("instruction").get<std::string>();
  p.expected = letter("expected");
  p.text_a = j.at("text_a").get<std::string>();
  p.text_b = j.at("text_b").get<std::string>();
  return p;
}

}  // namespace

std::string SurveyForm::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["training"] = nlohmann::ordered_json::array();
  for (const auto& p : training) j["training"].push_back(pair_json(p, false));
  j["questions"] = nlohmann::ordered_json::array();
  for (const auto& p : questions) j["questions"].push_back(pair_json(p, true));
  return j.dump(2) + "\n";
}

SurveyForm SurveyForm::from_json(std::string_view text) {
  SurveyForm f;
  try {
    const auto j = nlohmann::json::parse(text);
    f.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("training")) f.training.push_back(pair_from_json(p, false));
    for (const auto& p : j.at("questions")) f.questions.push_back(pair_from_json(p, true));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("survey form: ") + e.what());
  }
  return f;
}

void SurveyForm::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << to_json();
}

SurveyForm SurveyForm::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

std::vector<SurveyResponse> read_responses(std::istream& in) {
  const auto rows = csv::read(in);
  const std::vector<std::string> header = {"respondent_id", "question_id", "choice"};
  if (rows.empty() || rows.front().fields != header) {
    throw DataError("responses: expected header respondent_id,question_id,choice");
  }
  std::vector<SurveyResponse> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& f = rows[i].fields;
    const auto where = "responses: line " + std::to_string(rows[i].line) + ": ";
    if (f.size() != 3) throw DataError(where + "expected 3 fields");
    if (f[0].empty() || f[1].empty()) throw DataError(where + "empty respondent or question id");
    SurveyResponse r{f[0], f[1], Choice::abstain};
    if (f[2] == "A" || f[2] == "a") {
      r.choice = Choice::a;
    } else if (f[2] == "B" || f[2] == "b") {
      r.choice = Choice::b;
    } else if (f[2] != "abstain") {
      throw DataError(where + "choice must be A, B or abstain");
    }
    out.push_back(std::move(r));
  }
  return out;
}

SurveyScore score_survey(const SurveyForm& form, const std::vector<SurveyResponse>& responses) {
  std::map<std::string, std::map<std::string, Choice>> by_respondent;
  for (const auto& r : responses) {
    const auto* q = form.find(r.question_id);
    if (!q) throw DataError("responses: unknown question id '" + r.question_id + "'");
    if (!by_respondent[r.respondent_id].emplace(r.question_id, r.choice).second) {
      throw DataError("responses: respondent '" + r.respondent_id + "' answered '" + r.question_id + "' twice");
    }
  }

  SurveyScore s;
  for (std::size_t c = 0; c < 4; ++c) s.categories[c].category = kSurveyCategories[c];
  s.respondents = by_respondent.size();
  std::vector<double> resp_acc;
  std::vector<double> resp_abst;
  std::array<std::vector<double>, 4> cat_acc;
  for (const auto& [respondent, answers] : by_respondent) {
    bool attentive = true;
    for (const auto& q : form.questions) {
      if (!q.attention_check) continue;
      const auto it = answers.find(q.question_id);
      const char picked = it == answers.end() ? 0 : it->second == Choice::a ? 'A' : it->second == Choice::b ? 'B' : 0;
      if (picked != q.expected) attentive = false;
    }
    if (!attentive) {
      ++s.respondents_dropped;
      continue;
    }
    std::size_t answered = 0, correct = 0, abstained = 0;
    std::array<std::size_t, 4> ca{}, cc{};
    for (const auto& q : form.questions) {
      if (q.attention_check) continue;
      const auto it = answers.find(q.question_id);
      if (it == answers.end()) continue;
      const auto c = static_cast<std::size_t>(q.category);
      auto& cat = s.categories[c];
      if (it->second == Choice::abstain) {
        ++abstained;
        ++cat.abstained;
        continue;
      }
      const bool right = (it->second == Choice::a ? 'A' : 'B') == q.ai_position;
      ++answered;
      ++cat.answered;
      ++ca[c];
      if (right) {
        ++correct;
        ++cat.correct;
        ++cc[c];
      }
    }
    s.answered += answered;
    s.correct += correct;
    s.abstained += abstained;
    s.responses += answered + abstained;
    if (answered) resp_acc.push_back(static_cast<double>(correct) / static_cast<double>(answered));
    if (answered + abstained) resp_abst.push_back(static_cast<double>(abstained) / static_cast<double>(answered + abstained));
    for (std::size_t c = 0; c < 4; ++c) {
      if (ca[c]) cat_acc[c].push_back(100.0 * static_cast<double>(cc[c]) / static_cast<double>(ca[c]));
    }
  }
  if (s.answered) s.overall_accuracy = static_cast<double>(s.correct) / static_cast<double>(s.answered);
  if (s.responses) s.abstention_rate = static_cast<double>(s.abstained) / static_cast<double>(s.responses);
  for (auto& cat : s.categories) {
    if (cat.answered) cat.accuracy = static_cast<double>(cat.correct) / static_cast<double>(cat.answered);
  }
  mean_std(resp_acc, s.respondent_accuracy_mean, s.respondent_accuracy_std);
  mean_std(resp_abst, s.respondent_abstention_mean, s.respondent_abstention_std);

  std::vector<LabeledSample> groups;
  bool enough = true;
  for (std::size_t c = 0; c < 4; ++c) {
    enough = enough && cat_acc[c].size() >= 2;
    groups.push_back({std::string(to_string(kSurveyCategories[c])), cat_acc[c]});
  }
  if (enough) {
    s.tukey = tukey_hsd(groups);
  } else {
    s.notes.push_back("Tukey HSD not computable: a category has fewer than two respondents with answers");
  }
  if (!s.overall_accuracy) s.notes.push_back("overall accuracy not computable: every scored response abstained");
  return s;
}

void write_survey_report(std::ostream& out, const SurveyScore& s) {
  out << "respondents: " << s.respondents << " (" << s.respondents_dropped << " dropped for failed attention checks)\n";
  out << "scored responses: " << s.responses << '\n';
  out << "overall accuracy: "
      << (s.overall_accuracy ? pct(*s.overall_accuracy) + " (" + std::to_string(s.correct) + " of " +
                                   std::to_string(s.answered) + " answered)"
                             : std::string("not computable"))
      << '\n';
  out << "abstention rate: " << pct(s.abstention_rate) << '\n';
  out << "per-respondent accuracy: mean " << pct(s.respondent_accuracy_mean) << ", std "
      << pct(s.respondent_accuracy_std) << '\n';
  out << "per-respondent abstention: mean " << pct(s.respondent_abstention_mean) << ", std "
      << pct(s.respondent_abstention_std) << '\n';
  for (const auto& c : s.categories) {
    out << to_string(c.category) << ": " << (c.accuracy ? pct(*c.accuracy) : std::string("not computable")) << '\n';
  }
  for (const auto& n : s.notes) out << "note: " << n << '\n';
  if (!s.tukey) return;
  out << "\nTukey HSD across categories (category accuracy %, MeanDiff = category 2 - category 1)\n";
  char line[256];
  for (const auto& p : s.tukey->pairs) {
    std::snprintf(line, sizeof line, "%-16s %-16s %8.2f%s  (q=%.3f, p=%.4f)\n", p.group_a.c_str(), p.group_b.c_str(),
                  -p.mean_diff, std::string(stars(p.level)).c_str(), p.q, p.p);
    out << line;
  }
  out << "*p<.05, **p<.01, ***p<.001\n";
}

}  // namespace fakerev
