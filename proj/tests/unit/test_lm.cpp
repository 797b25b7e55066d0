#include <doctest.h>

#include <cmath>

#include "fakerev/error.hpp"
#include "fakerev/lm.hpp"
#include "fakerev/synthetic.hpp"
#include "fakerev/text.hpp"
#include "helpers.hpp"

using namespace fakerev;
using Strings = std::vector<std::string>;

namespace {

// Every token gets the same fixed probability.
class ConstantModel final : public PerplexityProvider {
 public:
  explicit ConstantModel(double p) : p_(p) {}
  std::vector<double> token_log_probs(std::span<const std::string> tokens) const override {
    return std::vector<double>(tokens.size(), std::log(p_));
  }
  std::string name() const override { return "constant"; }

 private:
  double p_;
};

// Uniform unigram over `v` outcomes, built through the real trainer: the
// v - 1 modelled tokens and one out-of-vocabulary token each occur once.
NGramModel uniform_unigram(int v) {
  Strings vocab;
  Strings doc;
  for (int i = 0; i + 1 < v; ++i) {
    vocab.push_back("t" + std::to_string(i));
    doc.push_back(vocab.back());
  }
  doc.push_back("never-modelled");
  NGramOptions o;
  o.order = 1;
  o.k = 0.1;
  o.vocabulary = vocab;
  return NGramModel::train(std::vector<Strings>{doc}, o);
}

}  // namespace

TEST_CASE("add-k unigram arithmetic") {
  NGramOptions o;
  o.order = 1;
  o.k = 1;
  const auto m = NGramModel::train(std::vector<Strings>{{"a"}, {"a"}}, o);
  CHECK(m.vocab_size() == 2);
  CHECK(m.probability({}, "a") == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(m.probability({}, "zzz") == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("each context distribution sums to one") {
  const auto m = NGramModel::train(std::vector<Strings>{{"a", "b", "a", "c"}, {"b", "b", "c"}});
  const Strings ctx = {"a", "b"};
  double total = m.probability(ctx, std::string(NGramModel::kUnknown));
  for (const auto& t : m.tokens()) total += m.probability(ctx, t);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  const Strings seen = {"b", "a"};
  total = m.probability(seen, std::string(NGramModel::kUnknown));
  for (const auto& t : m.tokens()) total += m.probability(seen, t);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("uniform usage gives a uniform unigram") {
  for (int v : {2, 10, 50}) {
    const auto m = uniform_unigram(v);
    for (const auto& t : m.tokens()) CHECK(m.probability({}, t) == doctest::Approx(1.0 / v).epsilon(1e-14));
    CHECK(perplexity(m, Strings{"t0", "t0", "other", "t1"}) == doctest::Approx(v).epsilon(1e-12));
  }
}

TEST_CASE("training is deterministic") {
  const std::vector<Strings> corpus = {{"x", "y", "z"}, {"y", "z", "x", "x"}};
  CHECK(NGramModel::train(corpus) == NGramModel::train(corpus));
}

TEST_CASE("perplexity of constant models") {
  CHECK(perplexity(ConstantModel(1.0), Strings{"a", "b"}) == 1.0);
  CHECK(perplexity(ConstantModel(0.5), Strings{"a", "b", "c", "d"}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(perplexity(ConstantModel(0.5), Strings{}), PreconditionError);
}

TEST_CASE("a token less likely than the geometric mean raises perplexity") {
  const auto m = NGramModel::train(std::vector<Strings>{{"a", "b", "a", "b", "a", "c"}});
  const Strings base = {"a", "b", "a"};
  const double before = perplexity(m, base);
  Strings longer = base;
  longer.push_back("unseen-token");
  CHECK(perplexity(m, longer) > before);
  CHECK(before >= 1.0);
}

TEST_CASE("save and load round trip") {
  testing::TempDir dir;
  const auto m = NGramModel::train(std::vector<Strings>{{"a", "b", "c"}, {"c", "b", "a", "a"}});
  m.save(dir / "lm.tsv");
  const auto back = NGramModel::load(dir / "lm.tsv");
  CHECK(back == m);
  const Strings probe = {"a", "c", "q", "b"};
  CHECK(perplexity(back, probe) == perplexity(m, probe));
}

TEST_CASE("shuffle test sizes") {
  const auto m = NGramModel::train(std::vector<Strings>{{"one", "two", "three"}});
  const auto single = coherence(m, "Just one sentence here.", 1);
  CHECK(single.permutation_ppls.size() == 1);
  CHECK(single.tc == 0.0);
  CHECK(coherence(m, "One two. Three one.", 1).permutation_ppls.size() == 2);
  const auto seven = coherence(m, "A. B. C. D. E. F. G.", 7);
  CHECK(seven.sampled_sentences.size() == 5);
  CHECK(seven.permutation_ppls.size() == 120);
  CHECK(seven.permutation_ppls.front() == seven.original_ppl);
}

TEST_CASE("sampled sentences are seeded") {
  const auto m = NGramModel::train(std::vector<Strings>{{"one", "two", "three"}});
  const std::string text = "A b. C d. E f. G h. I j. K l. M n. O p.";
  CHECK(coherence(m, text, 11).sampled_sentences == coherence(m, text, 11).sampled_sentences);
  CHECK(coherence(m, text, 11).tc == coherence(m, text, 11).tc);
}

TEST_CASE("ordered text has positive coherence under a model trained on it") {
  const auto texts = synthetic::ordered_language_corpus(3, 200);
  std::vector<Strings> docs;
  for (const auto& t : texts) docs.push_back(tokenize_words(t));
  const auto m = NGramModel::train(docs);
  CHECK(coherence(m, texts.front(), 5).tc > 0.0);
}
