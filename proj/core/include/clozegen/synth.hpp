#pragma once

#include "clozegen/data.hpp"

namespace clozegen {

/// Deterministic stand-ins for a hand-written blanking system, in order of
/// difficulty: pure lexical (rarest), lexical with a stop list
/// (rarest-content), and positional (marker-adjacent).
enum class TeacherRule { kRarest, kRarestContent, kMarkerAdjacent };

TeacherRule teacher_rule_from_string(std::string_view s);
std::string_view to_string(TeacherRule r);

struct TeacherConfig {
  std::size_t vocab_size = 300;  // >= 10
  std::size_t len_min = 5;       // >= 2
  std::size_t len_max = 15;
  std::size_t count = 5000;
  double zipf_exponent = 1.1;  // > 0
  TeacherRule rule = TeacherRule::kRarest;
  std::uint64_t seed = 1;
  std::string marker = "not";
  std::vector<std::string> stop_list;  // empty -> default_stop_list()

  void validate() const;
};

/// Function words skipped by the rarest-content rule by default.
const std::vector<std::string>& default_stop_list();

/// The generator's vocabulary: a fixed frequency-ranked list of common
/// English words, extended with synthetic pseudo-words when n exceeds the
/// built-in list.
std::vector<std::string> teacher_word_list(std::size_t n);

using FreqTable = std::unordered_map<std::string, std::size_t>;

FreqTable count_tokens(const Corpus& corpus);

/// Applies one teacher rule to a sentence given corpus-wide frequencies.
///   rarest          position of the lowest-frequency token, ties leftmost
///   rarest-content  same, skipping stop-list tokens (falls back to rarest
///                   when every token is a stop word)
///   marker-adjacent position immediately after the first marker token that
///                   has a successor, falling back to rarest otherwise
std::size_t teacher_blank_rule(std::span<const std::string> tokens,
                               const FreqTable& freq, TeacherRule rule,
                               std::span<const std::string> stop_list = {},
                               std::string_view marker = {});

/// Samples `count` sentences token-by-token from a Zipf distribution over
/// the ranked word list, then labels every sentence with the configured
/// rule using the emitted corpus' own frequencies. Bit-for-bit reproducible
/// by seed, and the labels can be re-derived from the output alone.
Corpus generate_teacher_corpus(const TeacherConfig& cfg);

}  // namespace clozegen
