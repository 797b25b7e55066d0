#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "fakerev/corpus.hpp"

namespace testing {

// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fakerev-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& content) {
  std::ofstream(p, std::ios::binary) << content;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline fakerev::Review review(std::string id, std::string text = "Nice soup.", std::string date = "2021-05-01",
                              bool elite = false, fakerev::Label label = fakerev::Label::unknown) {
  fakerev::Review r;
  r.id = std::move(id);
  r.text = std::move(text);
  r.date = std::move(date);
  r.rating = 4;
  r.elite = elite;
  r.num_friends = 10;
  r.num_user_reviews = 3;
  r.num_user_photos = 1;
  r.restaurant_id = "r1";
  r.restaurant_name = "Noona Noodles";
  r.avg_rating = 4.0;
  r.price_level = 2;
  r.num_rest_reviews = 100;
  r.num_visits = 500;
  r.norm_visits = 0.25;
  r.label = label;
  return r;
}

}  // namespace testing
