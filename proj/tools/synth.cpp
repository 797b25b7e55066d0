// Writes the synthetic demo corpus and, optionally, survey pools.
#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "fakerev/corpus.hpp"
#include "fakerev/error.hpp"
#include "fakerev/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic review corpora", "fakerev-synth"};
  std::uint64_t seed = 7;
  std::size_t n_elite = 150;
  std::size_t n_non_elite = 250;
  std::size_t survey_restaurants = 0;
  std::filesystem::path out = "data/reviews.jsonl";
  std::filesystem::path survey_dir = "data";
  app.add_option("--seed", seed);
  app.add_option("--elite", n_elite, "elite reviews (label real)");
  app.add_option("--non-elite", n_non_elite, "non-elite reviews (label unknown)");
  app.add_option("--out", out, "corpus file (.jsonl or .csv)");
  app.add_option("--survey-restaurants", survey_restaurants, "also write survey pools for this many restaurants");
  app.add_option("--survey-dir", survey_dir, "where survey_humans.jsonl and survey_fakes.jsonl go");
  CLI11_PARSE(app, argc, argv);

  try {
    const auto format = fakerev::format_from_path(out);
    if (!format) {
      std::cerr << "fakerev-synth: unknown extension on '" << out.string() << "'\n";
      return 1;
    }
    const auto corpus = fakerev::synthetic::bundled_corpus(seed, n_elite, n_non_elite);
    fakerev::save_reviews(out, corpus, *format);
    std::cout << "wrote " << corpus.size() << " reviews to " << out.string() << '\n';
    if (survey_restaurants > 0) {
      const auto pools = fakerev::synthetic::survey_pools(seed, survey_restaurants);
      fakerev::save_reviews(survey_dir / "survey_humans.jsonl", pools.humans, fakerev::Format::jsonl);
      fakerev::save_reviews(survey_dir / "survey_fakes.jsonl", pools.fakes, fakerev::Format::jsonl);
      std::cout << "wrote " << pools.humans.size() << " human and " << pools.fakes.size() << " AI survey reviews to "
                << survey_dir.string() << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "fakerev-synth: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
