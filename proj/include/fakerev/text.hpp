#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fakerev/parallel.hpp"

namespace fakerev {

namespace utf8 {

/// Splits text into code points, each returned as its UTF-8 byte sequence.
/// Malformed bytes come back as single-byte units.
std::vector<std::string> code_points(std::string_view text);

std::size_t length(std::string_view text) noexcept;

}  // namespace utf8

/// Sentences end at a run of '.', '!' or '?' followed by whitespace or the
/// end of the text. Terminators stay with their sentence; surrounding
/// whitespace is trimmed and empty pieces are dropped.
std::vector<std::string> split_sentences(std::string_view text);

/// Lowercased alphanumeric word tokens. Every other ASCII character is a
/// separator, so "5-star" yields {"5", "star"}. Non-ASCII letters are kept
/// as word characters; typographic quotes and dashes are separators.
std::vector<std::string> tokenize_words(std::string_view text);

/// Bijective token <-> index map with contiguous indices from 0.
class Vocabulary {
 public:
  Vocabulary() = default;
  /// Indices follow the order of `tokens`; throws PreconditionError on duplicates.
  explicit Vocabulary(std::vector<std::string> tokens);

  /// Sorted set of every token in the documents.
  static Vocabulary build(std::span<const std::vector<std::string>> docs);

  std::optional<std::uint32_t> index_of(std::string_view token) const;
  const std::string& token(std::uint32_t index) const { return tokens_.at(index); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  std::size_t size() const noexcept { return tokens_.size(); }

  /// Order-sensitive fingerprint, stored in model headers.
  std::uint64_t fingerprint() const noexcept;

  /// One token per line; the line number is the index.
  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const { return tokens_ == other.tokens_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

struct TermCount {
  std::uint32_t term;
  std::uint32_t count;
  bool operator==(const TermCount&) const = default;
};

/// Sparse document-term counts in compressed-row form. Each row lists its
/// strictly positive counts in increasing term order.
class DocTermMatrix {
 public:
  DocTermMatrix() = default;
  DocTermMatrix(std::size_t n_terms, std::vector<std::size_t> row_offsets, std::vector<TermCount> entries);

  std::size_t n_docs() const noexcept { return row_offsets_.empty() ? 0 : row_offsets_.size() - 1; }
  std::size_t n_terms() const noexcept { return n_terms_; }
  std::size_t nnz() const noexcept { return entries_.size(); }

  std::span<const TermCount> row(std::size_t doc) const {
    return {entries_.data() + row_offsets_[doc], row_offsets_[doc + 1] - row_offsets_[doc]};
  }

  /// Rows in the given order, e.g. one cross-validation fold.
  DocTermMatrix select_rows(std::span<const std::size_t> docs) const;

  bool operator==(const DocTermMatrix&) const = default;

 private:
  std::size_t n_terms_ = 0;
  std::vector<std::size_t> row_offsets_{0};
  std::vector<TermCount> entries_;
};

/// Counts each document's tokens. With a vocabulary the term set is fixed
/// and unseen tokens are dropped; without one a sorted vocabulary is built
/// from the documents.
std::pair<DocTermMatrix, Vocabulary> vectorize(std::span<const std::vector<std::string>> docs,
                                               const Vocabulary* vocab = nullptr,
                                               Exec exec = Exec::parallel);

}  // namespace fakerev
