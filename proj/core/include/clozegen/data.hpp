#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace clozegen {

/// One training pair: token ids plus the gold blank position (0-based).
struct BlankExample {
  std::vector<int> tokens;
  std::size_t blank = 0;
};

/// Whitespace split with leading/trailing ASCII punctuation detached as
/// separate tokens; everything lowercased. Internal punctuation (as in
/// "don't") is kept.
std::vector<std::string> tokenize(std::string_view text);

/// Token<->id bijection with reserved ids for padding, unknown tokens and
/// the blank sentinel used when re-feeding partially blanked sentences.
/// Non-reserved ids are dense and ordered by descending training frequency,
/// ties broken lexicographically, which makes vocabularies reproducible
/// byte-for-byte.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kBlank = 2;
  static constexpr std::size_t kReservedCount = 3;

  Vocabulary();

  static Vocabulary build(const std::vector<std::vector<std::string>>& corpus,
                          std::size_t min_freq = 1);
  static Vocabulary from_tokens(std::vector<std::string> tokens,
                                std::size_t min_freq);

  int id(std::string_view token) const;  // kUnk when unseen
  const std::string& token(int id) const;
  std::size_t size() const { return id_to_token_.size(); }
  std::size_t min_freq() const { return min_freq_; }

  /// Non-reserved tokens in id order.
  std::span<const std::string> tokens() const;

  std::vector<int> encode(std::span<const std::string> tokens) const;
  std::vector<std::string> decode(std::span<const int> ids) const;

  void save(const std::filesystem::path& path) const;
  static Vocabulary load(const std::filesystem::path& path);

  bool operator==(const Vocabulary& other) const;

 private:
  std::size_t min_freq_ = 1;
  std::vector<std::string> id_to_token_;  // includes reserved entries
  std::unordered_map<std::string, int> token_to_id_;
};

/// One corpus record: raw token strings plus the gold blank position.
struct Sentence {
  std::vector<std::string> tokens;
  std::size_t blank = 0;
};

struct Corpus {
  std::string split;  // train | valid | test | ""
  std::vector<Sentence> items;

  std::size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

/// JSONL, one {"tokens": [...], "blank": n} object per line.
Corpus load_corpus(const std::filesystem::path& path,
                   std::string split_name = "");
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

std::vector<BlankExample> encode_corpus(const Corpus& corpus,
                                        const Vocabulary& vocab);

struct SplitRatios {
  double train = 0.7;
  double valid = 0.1;
  double test = 0.2;
};

/// Seeded shuffle, then contiguous slices of floor(ratio * N) examples for
/// train and valid with the remainder going to test. Requires N >= 3.
std::array<Corpus, 3> split_dataset(const Corpus& all, SplitRatios ratios,
                                    std::uint64_t seed);

}  // namespace clozegen
