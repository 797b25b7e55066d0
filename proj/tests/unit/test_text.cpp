#include <doctest.h>

#include <numeric>

#include "fakerev/bpe.hpp"
#include "fakerev/error.hpp"
#include "fakerev/text.hpp"
#include "helpers.hpp"

using namespace fakerev;
using Strings = std::vector<std::string>;

TEST_CASE("sentence splitting") {
  CHECK(split_sentences("Good food. Bad service.") == Strings{"Good food.", "Bad service."});
  CHECK(split_sentences("No terminal punctuation") == Strings{"No terminal punctuation"});
  CHECK(split_sentences("Wow!! Really?") == Strings{"Wow!!", "Really?"});
  CHECK(split_sentences("Price was $4.50 total.  Fine") == Strings{"Price was $4.50 total.", "Fine"});
  CHECK(split_sentences("   ").empty());
  CHECK(split_sentences("...").size() == 1);
}

TEST_CASE("word tokens") {
  CHECK(tokenize_words("The cat, the CAT") == Strings{"the", "cat", "the", "cat"});
  CHECK(tokenize_words("").empty());
  CHECK(tokenize_words("5-star place!") == Strings{"5", "star", "place"});
  CHECK(tokenize_words("Caf\xC3\xA9 \xE2\x80\x9Cnice\xE2\x80\x9D") == Strings{"caf\xC3\xA9", "nice"});
}

TEST_CASE("utf8 code points") {
  CHECK(utf8::length("caf\xC3\xA9") == 4);
  CHECK(utf8::code_points("a\xC3\xA9").size() == 2);
}

TEST_CASE("vocabulary is a bijection") {
  const Vocabulary v({"b", "a", "c"});
  CHECK(*v.index_of("a") == 1);
  CHECK(v.token(2) == "c");
  CHECK_FALSE(v.index_of("z"));
  CHECK_THROWS_AS(Vocabulary({"a", "a"}), PreconditionError);
  CHECK(Vocabulary({"a", "b"}).fingerprint() != Vocabulary({"b", "a"}).fingerprint());

  testing::TempDir dir;
  v.save(dir / "v.txt");
  CHECK(Vocabulary::load(dir / "v.txt") == v);
}

TEST_CASE("document-term counts") {
  const std::vector<Strings> docs = {{"a", "b", "a"}};
  const auto [m, vocab] = vectorize(docs);
  REQUIRE(vocab.tokens() == Strings{"a", "b"});
  const auto row = m.row(0);
  REQUIRE(row.size() == 2);
  CHECK(row[0] == TermCount{0, 2});
  CHECK(row[1] == TermCount{1, 1});

  const std::vector<Strings> unseen = {{"q", "r"}, {"a", "z", "b", "b"}, {"a", "z", "b", "b"}};
  const auto fixed = vectorize(unseen, &vocab).first;
  CHECK(fixed.row(0).empty());
  CHECK(std::vector(fixed.row(1).begin(), fixed.row(1).end()) == std::vector(fixed.row(2).begin(), fixed.row(2).end()));
  const auto sum = [](auto r) { return std::accumulate(r.begin(), r.end(), 0u, [](unsigned s, TermCount t) { return s + t.count; }); };
  CHECK(sum(fixed.row(1)) == 3);
}

TEST_CASE("parallel vectorize matches serial") {
  std::vector<Strings> docs;
  for (int i = 0; i < 300; ++i) docs.push_back(tokenize_words("doc " + std::to_string(i % 17) + " word w" + std::to_string(i % 5)));
  const auto a = vectorize(docs, nullptr, Exec::serial);
  const auto b = vectorize(docs, nullptr, Exec::parallel);
  CHECK(a.first == b.first);
  CHECK(a.second == b.second);
}

TEST_CASE("bpe merges by pair frequency") {
  const Strings corpus = {"aaabdaaabac"};
  const auto one = BpeModel::train(corpus, 1);
  REQUIRE(one.merges().size() == 1);
  CHECK(one.merges()[0] == BpeModel::Pair{"a", "a"});
  CHECK(BpeModel::train(corpus, 0).merges().empty());
  CHECK(BpeModel::train(Strings{"a b c d"}, 10).merges().empty());
}

TEST_CASE("bpe encoding") {
  const BpeModel m(std::vector<BpeModel::Pair>{{"a", "a"}});
  CHECK(m.encode("aaab") == Strings{"aa", "a", "b"});
  CHECK(m.encode("").empty());
  CHECK(m.encode("xyz") == Strings{"x", "y", "z"});
}

TEST_CASE("bpe token count does not grow with more merges") {
  const Strings corpus = {"the cat sat on the mat", "the hat was on the cat", "that cat is fat and flat"};
  const std::string text = "the fat cat that sat flat on the hat";
  std::size_t previous = SIZE_MAX;
  for (std::size_t merges = 0; merges <= 40; merges += 4) {
    const auto model = BpeModel::train(corpus, merges);
    const auto tokens = model.encode(text);
    CHECK(tokens.size() <= previous);
    previous = tokens.size();
    std::string joined;
    for (const auto& t : tokens) joined += t;
    CHECK(joined == "thefatcatthatsatflatonthehat");
  }
}

TEST_CASE("bpe save and load") {
  testing::TempDir dir;
  const auto m = BpeModel::train(Strings{"low lower lowest newer newest"}, 20);
  m.save(dir / "bpe.txt");
  CHECK(BpeModel::load(dir / "bpe.txt") == m);
  testing::write_file(dir / "bad.txt", "not a bpe file\n");
  CHECK_THROWS_AS(BpeModel::load(dir / "bad.txt"), DataError);
}
