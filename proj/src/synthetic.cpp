#include "fakerev/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string_view>

#include "fakerev/genclient.hpp"
#include "fakerev/text.hpp"

namespace fakerev::synthetic {
namespace {

using Words = std::vector<std::string_view>;

const Words kPositive = {"good", "great", "amazing", "excellent", "wonderful", "fantastic", "nice", "lovely", "pleasant"};
const Words kNegative = {"bad", "terrible", "awful", "disappointing", "horrible", "lousy", "poor"};
const Words kDishes = {"pasta", "tacos", "burger", "ramen", "curry", "salad", "steak", "noodles",
                       "dumplings", "pizza", "soup", "sandwich", "brisket", "risotto", "pho", "burrito"};
const Words kSides = {"fries", "rice", "bread", "corn", "beans", "greens", "chips", "potatoes"};
const Words kDrinks = {"lemonade", "iced tea", "house wine", "draft beer", "espresso", "milkshake"};
const Words kPeople = {"sister", "brother", "coworker", "roommate", "husband", "wife", "dad", "mom", "neighbor"};
const Words kDays = {"Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"};

// {s} is a sentiment slot; other braces are neutral fillers.
const Words kHumanTemplates = {
    "we came here on a {day} night with my {person}.",
    "i got the {dish} and it was {s}.",
    "my {person} had the {dish} which was {s}.",
    "parking took a while to find.",
    "the {side} was {s} too.",
    "prices are about what you would expect around here.",
    "we waited maybe twenty minutes for a table.",
    "frankly the {dish} was sort of {s}.",
    "the {drink} was {s} and cheap.",
    "i would not drive across town for it.",
    "the server was {s} and checked on us twice.",
    "they were out of the {dish} so i got the {dish} instead.",
    "place was packed on a {day} so get there early.",
};
const Words kAiTemplates = {
    "The atmosphere at {name} was {s} and the decor felt modern.",
    "The {dish} was {s}, with a careful balance of spices.",
    "The staff were attentive and {s} throughout our visit.",
    "Overall, the experience was {s}.",
    "The {dish} was {s} and arrived on a slate board.",
    "The {drink} complemented the meal.",
    "The portions were substantial and the {side} was {s}.",
    "In summary, {name} offers a {s} dining experience.",
    "Every dish arrived promptly and tasted {s}.",
    "The menu features a variety of options for every palate.",
    "From start to finish, the service was {s}.",
};
// Neutral sentences of 1 to 6 words used to land on an exact word count.
const std::array<Words, 6> kFillers = {{
    {"Anyway.", "Noted.", "Also."},
    {"We returned.", "Seating varies.", "Cash only."},
    {"We sat outside.", "Lines form early.", "Parking is limited."},
    {"The menu is long.", "Reservations are a must.", "We split two plates."},
    {"We went back last week.", "The kitchen closes at ten.", "They also do takeout orders."},
    {"The dining room holds about forty.", "We stopped by after a movie."},
}};

const Words kCommon = {"the", "a", "we", "it", "was", "and", "with", "for", "on", "table", "menu", "order",
                       "night", "plate", "came", "our", "they", "this", "place", "time", "after", "some",
                       "there", "dinner", "lunch", "kitchen", "room", "late", "early", "went"};
const Words kTopicA = {"pasta", "basil", "parmesan", "risotto", "espresso", "lasagna", "gelato", "olive",
                       "tiramisu", "prosciutto", "marinara", "gnocchi", "focaccia", "ravioli", "pesto", "ricotta"};
const Words kTopicB = {"salmon", "wasabi", "miso", "tempura", "sashimi", "ginger", "nori", "udon",
                       "edamame", "sake", "teriyaki", "yuzu", "ponzu", "unagi", "katsu", "matcha"};

const Words kRestaurantNames = {"Noona Noodles", "Blue Fern Bistro", "Casa Lupita", "The Copper Pot", "Saffron House",
                                "Harbor Grill", "Little Saigon Kitchen", "Maple and Rye", "Pho Real", "Osteria Nove",
                                "Smoke Pit BBQ", "Tandoor Nights", "Jade Dragon", "The Daily Crumb", "Sol Taqueria",
                                "Kyoto Table", "Red Barn Diner", "Olive Branch Cafe", "Seoul Food", "Bayou Shack",
                                "Green Leaf Eatery", "Corner Slice", "Marrow", "Luna Pizzeria", "Three Pines Tavern",
                                "Spice Route", "The Hungry Fox", "Ember and Ash", "Peking Garden", "Sunrise Cafe"};
const Words kChainNames = {"Golden Wok Express", "Burger Barn"};

std::string_view pick(Rng& rng, const Words& w) { return w[static_cast<std::size_t>(rng.below(w.size()))]; }

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string render(std::string_view tmpl, Rng& rng, const TextOptions& o) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] != '{') {
      out.push_back(tmpl[i++]);
      continue;
    }
    const auto close = tmpl.find('}', i);
    const auto slot = tmpl.substr(i + 1, close - i - 1);
    if (slot == "s") out += pick(rng, rng.unit() < o.positive_share ? kPositive : kNegative);
    else if (slot == "dish") out += pick(rng, kDishes);
    else if (slot == "side") out += pick(rng, kSides);
    else if (slot == "drink") out += pick(rng, kDrinks);
    else if (slot == "person") out += pick(rng, kPeople);
    else if (slot == "day") out += pick(rng, kDays);
    else if (slot == "name") out += o.restaurant_name;
    i = close + 1;
  }
  return capitalize(out);
}

std::string date(int year, Rng& rng) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, static_cast<int>(1 + rng.below(12)),
                static_cast<int>(1 + rng.below(28)));
  return buf;
}

int draw_rating(Rng& rng, Voice voice) {
  // Means 3.91 (human) and 4.33 (AI).
  static constexpr std::array<double, 5> human = {0.05, 0.08, 0.17, 0.31, 0.39};
  static constexpr std::array<double, 5> ai = {0.02, 0.04, 0.10, 0.27, 0.57};
  const auto& p = voice == Voice::ai ? ai : human;
  double u = rng.unit();
  for (int r = 0; r < 5; ++r) {
    if (u < p[r]) return r + 1;
    u -= p[r];
  }
  return 5;
}

std::int64_t nonneg(double v) { return std::max<std::int64_t>(0, std::llround(v)); }

struct Restaurant {
  std::string id;
  std::string name;
  double avg_rating;
  int price_level;
  std::int64_t num_reviews;
  std::int64_t visits;
  double norm_visits;
};

std::vector<Restaurant> restaurants(Rng& rng) {
  std::vector<Restaurant> out;
  auto add = [&](std::string_view name) {
    char id[16];
    std::snprintf(id, sizeof id, "r%03zu", out.size() + 1);
    const double visits = std::max(200.0, rng.normal(3000.0, 900.0));
    out.push_back({id, std::string(name), std::round(rng.uniform(3.0, 4.8) * 10.0) / 10.0,
                   static_cast<int>(1 + rng.below(4)), nonneg(std::max(20.0, rng.normal(750.0, 300.0))),
                   nonneg(visits), visits / 16000.0});
  };
  for (const auto& n : kRestaurantNames) add(n);
  for (int i = 0; i < 7; ++i) add(kChainNames[0]);
  for (int i = 0; i < 6; ++i) add(kChainNames[1]);
  return out;
}

Review base_review(const Restaurant& r) {
  Review v;
  v.restaurant_id = r.id;
  v.restaurant_name = r.name;
  v.avg_rating = r.avg_rating;
  v.price_level = r.price_level;
  v.num_rest_reviews = r.num_reviews;
  v.num_visits = r.visits;
  v.norm_visits = r.norm_visits;
  return v;
}

void user_covariates(Review& v, Rng& rng, Voice voice, double friends_shift) {
  v.rating = draw_rating(rng, voice);
  v.num_friends = nonneg(rng.normal(70.0 + (voice == Voice::ai ? friends_shift : 0.0), 15.0));
  v.num_user_reviews = nonneg(std::abs(rng.normal(40.0, 20.0)));
  v.num_user_photos = nonneg(std::abs(rng.normal(50.0, 30.0)));
}

std::string numbered(const char* prefix, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05zu", prefix, i + 1);
  return buf;
}

}  // namespace

std::string review_text(Rng& rng, const TextOptions& o) {
  const auto& templates = o.voice == Voice::ai ? kAiTemplates : kHumanTemplates;
  std::vector<std::string> sentences;
  std::size_t total = 0;
  for (int misses = 0; misses < 12 && total < o.words;) {
    auto s = render(pick(rng, templates), rng, o);
    const auto w = tokenize_words(s).size();
    if (total + w > o.words) {
      ++misses;
      continue;
    }
    total += w;
    sentences.push_back(std::move(s));
  }
  while (total < o.words) {
    const std::size_t k = std::min<std::size_t>(o.words - total, kFillers.size());
    const auto filler = pick(rng, kFillers[k - 1]);
    // Insert fillers at random positions so they do not cluster at the end.
    const auto at = static_cast<std::ptrdiff_t>(rng.below(sentences.size() + 1));
    sentences.insert(sentences.begin() + at, std::string(filler));
    total += k;
  }
  std::string out;
  for (const auto& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
  }
  return out;
}

std::vector<std::string> neutral_vocabulary() {
  std::vector<std::string> out;
  auto add_text = [&](std::string_view text) {
    std::string cleaned;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '{') {
        i = text.find('}', i);
        cleaned.push_back(' ');
      } else {
        cleaned.push_back(text[i]);
      }
    }
    for (auto& w : tokenize_words(cleaned)) out.push_back(std::move(w));
  };
  for (const auto* list : {&kHumanTemplates, &kAiTemplates, &kDishes, &kSides, &kDrinks, &kPeople, &kDays, &kCommon,
                           &kTopicA, &kTopicB, &kRestaurantNames, &kChainNames}) {
    for (auto t : *list) add_text(t);
  }
  for (const auto& group : kFillers) {
    for (auto t : group) add_text(t);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::string> positive_words() { return {kPositive.begin(), kPositive.end()}; }
std::vector<std::string> negative_words() { return {kNegative.begin(), kNegative.end()}; }

ReviewSet two_topic_corpus(std::uint64_t seed, std::size_t n) {
  Rng rng(seed);
  std::vector<Review> out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool topic_b = i % 2 == 1;
    const auto& topic = topic_b ? kTopicB : kTopicA;
    const std::size_t len = 40 + rng.below(41);
    std::string text;
    for (std::size_t w = 0; w < len; ++w) {
      std::string word(rng.unit() < 0.3 ? pick(rng, topic) : pick(rng, kCommon));
      if (w % 10 == 0) word = capitalize(word);
      if (!text.empty()) text.push_back(' ');
      text += word;
      if (w % 10 == 9 || w + 1 == len) text.push_back('.');
    }
    Review r;
    r.id = numbered("topic-", i);
    r.text = std::move(text);
    r.date = date(2021, rng);
    r.rating = 4;
    r.restaurant_id = topic_b ? "r-sushi" : "r-trattoria";
    r.restaurant_name = topic_b ? "Sushi Bar" : "Trattoria";
    r.avg_rating = 4.0;
    r.price_level = 2;
    r.label = topic_b ? Label::fake : Label::real;
    out.push_back(std::move(r));
  }
  return ReviewSet(std::move(out), "synthetic:two-topic");
}

std::vector<std::string> ordered_language_corpus(std::uint64_t seed, std::size_t n) {
  static const Words hours = {"six", "seven", "eight", "noon", "nine"};
  static const Words spots = {"window", "bar", "kitchen", "patio", "fireplace"};
  static const Words minutes = {"ten", "fifteen", "twenty", "twelve"};
  static const Words adjectives = {"smoky", "salty", "rich", "spicy", "sweet", "tangy"};
  static const Words vehicles = {"car", "train", "bus", "hotel"};
  Rng rng(seed);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto name = pick(rng, kRestaurantNames);
    const auto dish = pick(rng, kDishes);
    std::string text;
    text += "We arrived at " + std::string(name) + " just after " + std::string(pick(rng, hours)) + ". ";
    text += "A host led us to a table near the " + std::string(pick(rng, spots)) + ". ";
    text += "We ordered the " + std::string(dish) + " and a " + std::string(pick(rng, kDrinks)) + ". ";
    text += "Our food came out after " + std::string(pick(rng, minutes)) + " minutes. ";
    text += "The " + std::string(dish) + " tasted " + std::string(pick(rng, adjectives)) + ". ";
    text += "We paid the check and walked back to the " + std::string(pick(rng, vehicles)) + ". ";
    text += "Next time we will try the " + std::string(pick(rng, kDishes)) + ".";
    out.push_back(std::move(text));
  }
  return out;
}

PlantedPool planted_pool(std::uint64_t seed, const PoolOptions& o) {
  Rng rng(seed);
  const auto rs = restaurants(rng);
  const std::size_t n = o.n_human + o.n_ai;
  std::vector<std::uint8_t> planted(n, 0);
  std::fill(planted.begin(), planted.begin() + static_cast<std::ptrdiff_t>(o.n_ai), std::uint8_t{1});
  rng.shuffle(std::span(planted));
  std::vector<Review> out;
  for (std::size_t i = 0; i < n; ++i) {
    const Voice voice = planted[i] ? Voice::ai : Voice::human;
    const auto& rest = rs[static_cast<std::size_t>(rng.below(rs.size()))];
    Review v = base_review(rest);
    v.id = numbered("pool-", i);
    // Placebo: drawn the same way for both groups.
    v.price_level = static_cast<int>(1 + rng.below(4));
    user_covariates(v, rng, voice, o.friends_shift);
    TextOptions t;
    t.voice = voice;
    t.positive_share = 0.7 + (voice == Voice::ai ? o.sentiment_shift / 2.0 : 0.0);
    t.words = 50 + rng.below(90);
    t.restaurant_name = rest.name;
    v.text = review_text(rng, t);
    v.date = date(2021 + static_cast<int>(rng.below(2)), rng);
    v.elite = false;
    v.label = Label::unknown;
    out.push_back(std::move(v));
  }
  return {ReviewSet(std::move(out), "synthetic:planted"), std::move(planted)};
}

ReviewSet voiced_training_set(std::uint64_t seed, std::size_t n_per_class, const PoolOptions& o) {
  Rng rng(seed);
  const auto rs = restaurants(rng);
  std::vector<Review> out;
  for (std::size_t i = 0; i < 2 * n_per_class; ++i) {
    const Voice voice = i % 2 ? Voice::ai : Voice::human;
    const auto& rest = rs[static_cast<std::size_t>(rng.below(rs.size()))];
    Review v = base_review(rest);
    v.id = numbered("train-", i);
    user_covariates(v, rng, voice, o.friends_shift);
    TextOptions t;
    t.voice = voice;
    t.positive_share = 0.7 + (voice == Voice::ai ? o.sentiment_shift / 2.0 : 0.0);
    t.words = 50 + rng.below(90);
    t.restaurant_name = rest.name;
    v.text = review_text(rng, t);
    v.date = date(2018 + static_cast<int>(rng.below(3)), rng);
    v.elite = voice == Voice::human;
    v.label = voice == Voice::ai ? Label::fake : Label::real;
    out.push_back(std::move(v));
  }
  return ReviewSet(std::move(out), "synthetic:voiced-training");
}

ReviewSet bundled_corpus(std::uint64_t seed, std::size_t n_elite, std::size_t n_non_elite) {
  Rng rng(seed);
  const auto rs = restaurants(rng);
  MockBackend mock;
  std::vector<Review> out;
  for (std::size_t i = 0; i < n_elite; ++i) {
    const auto& rest = rs[static_cast<std::size_t>(rng.below(rs.size()))];
    Review v = base_review(rest);
    v.id = numbered("elite-", i);
    user_covariates(v, rng, Voice::human, 0.0);
    v.num_user_reviews += 60;  // elite reviewers are prolific
    TextOptions t;
    t.words = 60 + rng.below(120);
    t.restaurant_name = rest.name;
    v.text = review_text(rng, t);
    v.date = date(2015 + static_cast<int>(rng.below(6)), rng);
    v.elite = true;
    v.label = Label::real;
    out.push_back(std::move(v));
  }
  for (std::size_t i = 0; i < n_non_elite; ++i) {
    const auto& rest = rs[static_cast<std::size_t>(rng.below(rs.size()))];
    const bool ai = rng.unit() < 0.3;
    Review v = base_review(rest);
    v.id = numbered("user-", i);
    user_covariates(v, rng, ai ? Voice::ai : Voice::human, -5.0);
    TextOptions t;
    t.words = 50 + rng.below(110);
    t.positive_share = ai ? 0.8 : 0.7;
    t.restaurant_name = rest.name;
    v.text = review_text(rng, t);
    if (ai) {
      // Posted machine text: a paraphrase of a human-voiced draft.
      Rng params(derive_seed(seed, v.id));
      const auto p = sample_gen_params(params);
      v.text = mock.generate({rest.name, v.text, p.model, p.temperature});
    }
    v.date = date(2019 + static_cast<int>(rng.below(4)), rng);
    v.elite = false;
    v.label = Label::unknown;
    out.push_back(std::move(v));
  }
  return ReviewSet(std::move(out), "synthetic:bundled");
}

SurveyPools survey_pools(std::uint64_t seed, std::size_t n_restaurants) {
  Rng rng(seed);
  std::vector<Review> humans;
  std::vector<Review> fakes;
  for (std::size_t r = 0; r < n_restaurants; ++r) {
    Restaurant rest{numbered("sv-r", r), std::string(kRestaurantNames[r % kRestaurantNames.size()]), 4.0, 2, 500, 3000,
                    0.2};
    for (int long_review = 0; long_review < 2; ++long_review) {
      const std::size_t hw = long_review ? 145 + rng.below(34) : 104 + rng.below(33);
      const std::size_t aw = hw + rng.below(21) - 10;
      Review h = base_review(rest);
      h.id = numbered("sv-h", humans.size());
      user_covariates(h, rng, Voice::human, 0.0);
      h.text = review_text(rng, {Voice::human, 0.7, hw, rest.name});
      h.date = date(2020, rng);
      h.label = Label::real;
      Review a = base_review(rest);
      a.id = numbered("sv-a", fakes.size());
      user_covariates(a, rng, Voice::ai, 0.0);
      a.text = review_text(rng, {Voice::ai, 0.8, aw, rest.name});
      a.date = date(2020, rng);
      a.label = Label::fake;
      humans.push_back(std::move(h));
      fakes.push_back(std::move(a));
    }
  }
  return {ReviewSet(std::move(humans), "synthetic:survey-humans"), ReviewSet(std::move(fakes), "synthetic:survey-ai")};
}

}  // namespace fakerev::synthetic
