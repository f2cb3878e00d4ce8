#include "clozegen/synth.hpp"

#include <algorithm>
#include <cmath>

#include "clozegen/rng.hpp"

namespace clozegen {

namespace {

// Frequency-ranked common-word list; rank order drives the Zipf weights.
const char* const kWordList[] = {
    "the",     "of",      "and",     "a",        "to",       "in",
    "is",      "you",     "that",    "it",       "he",       "was",
    "for",     "on",      "are",     "as",       "with",     "his",
    "they",    "i",       "at",      "be",       "this",     "have",
    "from",    "or",      "one",     "had",      "by",       "word",
    "but",     "not",     "what",    "all",      "were",     "we",
    "when",    "your",    "can",     "said",     "there",    "use",
    "an",      "each",    "which",   "she",      "do",       "how",
    "their",   "if",      "will",    "up",       "other",    "about",
    "out",     "many",    "then",    "them",     "these",    "so",
    "some",    "her",     "would",   "make",     "like",     "him",
    "into",    "time",    "has",     "look",     "two",      "more",
    "write",   "go",      "see",     "number",   "no",       "way",
    "could",   "people",  "my",      "than",     "first",    "water",
    "been",    "call",    "who",     "oil",      "its",      "now",
    "find",    "long",    "down",    "day",      "did",      "get",
    "come",    "made",    "may",     "part",     "over",     "new",
    "sound",   "take",    "only",    "little",   "work",     "know",
    "place",   "year",    "live",    "me",       "back",     "give",
    "most",    "very",    "after",   "thing",    "our",      "just",
    "name",    "good",    "sentence", "man",     "think",    "say",
    "great",   "where",   "help",    "through",  "much",     "before",
    "line",    "right",   "too",     "mean",     "old",      "any",
    "same",    "tell",    "boy",     "follow",   "came",     "want",
    "show",    "also",    "around",  "form",     "three",    "small",
    "set",     "put",     "end",     "does",     "another",  "well",
    "large",   "must",    "big",     "even",     "such",     "because",
    "turn",    "here",    "why",     "ask",      "went",     "men",
    "read",    "need",    "land",    "different", "home",    "us",
    "move",    "try",     "kind",    "hand",     "picture",  "again",
    "change",  "off",     "play",    "spell",    "air",      "away",
    "animal",  "house",   "point",   "page",     "letter",   "mother",
    "answer",  "found",   "study",   "still",    "learn",    "should",
    "world",   "high",    "every",   "near",     "add",      "food",
    "between", "own",     "below",   "country",  "plant",    "last",
    "school",  "father",  "keep",    "tree",     "never",    "start",
    "city",    "earth",   "eye",     "light",    "thought",  "head",
    "under",   "story",   "saw",     "left",     "don't",    "few",
    "while",   "along",   "might",   "close",    "something", "seem",
    "next",    "hard",    "open",    "example",  "begin",    "life",
    "always",  "those",   "both",    "paper",    "together", "got",
    "group",   "often",   "run",     "important", "until",   "children",
    "side",    "feet",    "car",     "mile",     "night",    "walk",
    "white",   "sea",     "began",   "grow",     "took",     "river",
    "four",    "carry",   "state",   "once",     "book",     "hear",
    "stop",    "without", "second",  "later",    "miss",     "idea",
    "enough",  "eat",     "face",    "watch",    "far",      "really",
    "almost",  "let",     "above",   "girl",     "sometimes", "mountain",
    "cut",     "young",   "talk",    "soon",     "list",     "song",
    "being",   "leave",   "family",  "it's",     "cat",      "dog",
    "sun",     "moon",    "rain",    "snow",     "sat",      "mat",
    "red",     "blue",    "green",   "bird",     "fish",     "tall",
    "door",    "window",  "garden",  "bridge",   "market",   "winter",
    "summer",  "spring",  "autumn",  "morning",  "evening",  "silver",
    "golden",  "stone",   "forest",  "meadow",   "village",  "castle",
    "harbor",  "island",  "valley",  "desert",   "ocean",    "cloud",
    "thunder", "lantern", "basket",  "ribbon",   "candle",   "mirror",
    "saddle",  "anchor",  "barrel",  "copper",   "marble",   "velvet",
    "whistle", "feather", "shadow",  "ember",    "frost",    "pebble",
    "willow",  "cedar",   "maple",   "heron",    "falcon",   "otter",
    "badger",  "weasel",  "thistle", "clover",   "bramble",  "fern",
};

constexpr std::size_t kWordListSize = std::size(kWordList);

// Pseudo-words for ranks beyond the built-in list. The leading 'x'
// guarantees no collision with the list above.
std::string pseudo_word(std::size_t index) {
  static const char* const kSyllables[] = {
      "ba", "be", "bi", "bo", "bu", "da", "de", "di", "do", "du",
      "fa", "fe", "fi", "fo", "fu", "ga", "ge", "gi", "go", "gu",
      "ka", "ke", "ki", "ko", "ku", "la", "le", "li", "lo", "lu",
      "ma", "me", "mi", "mo", "mu", "na", "ne", "ni", "no", "nu",
      "pa", "pe", "pi", "po", "pu", "ra", "re", "ri", "ro", "ru",
      "sa", "se", "si", "so", "su", "ta", "te", "ti", "to", "tu",
      "va", "ve", "vi", "vo", "vu", "za", "ze", "zi", "zo", "zu"};
  constexpr std::size_t base = std::size(kSyllables);
  std::string word = "x";
  std::size_t rem = index;
  do {
    word += kSyllables[rem % base];
    rem /= base;
  } while (rem > 0);
  return word;
}

}  // namespace

TeacherRule teacher_rule_from_string(std::string_view s) {
  if (s == "rarest") return TeacherRule::kRarest;
  if (s == "rarest-content") return TeacherRule::kRarestContent;
  if (s == "marker-adjacent") return TeacherRule::kMarkerAdjacent;
  throw std::invalid_argument("unknown teacher rule '" + std::string(s) + "'");
}

std::string_view to_string(TeacherRule r) {
  switch (r) {
    case TeacherRule::kRarest:
      return "rarest";
    case TeacherRule::kRarestContent:
      return "rarest-content";
    case TeacherRule::kMarkerAdjacent:
      return "marker-adjacent";
  }
  throw std::invalid_argument("unknown teacher rule");
}

void TeacherConfig::validate() const {
  if (vocab_size < 10) {
    throw std::invalid_argument("TeacherConfig: vocab_size must be >= 10");
  }
  if (len_min < 2 || len_max < len_min) {
    throw std::invalid_argument("TeacherConfig: bad sentence length range");
  }
  if (count == 0) {
    throw std::invalid_argument("TeacherConfig: count must be positive");
  }
  if (zipf_exponent <= 0.0) {
    throw std::invalid_argument("TeacherConfig: zipf exponent must be > 0");
  }
}

const std::vector<std::string>& default_stop_list() {
  static const std::vector<std::string> stops(kWordList, kWordList + 30);
  return stops;
}

std::vector<std::string> teacher_word_list(std::size_t n) {
  std::vector<std::string> words;
  words.reserve(n);
  for (std::size_t i = 0; i < n && i < kWordListSize; ++i) {
    words.emplace_back(kWordList[i]);
  }
  for (std::size_t i = kWordListSize; i < n; ++i) {
    words.push_back(pseudo_word(i - kWordListSize));
  }
  return words;
}

FreqTable count_tokens(const Corpus& corpus) {
  FreqTable freq;
  for (const Sentence& s : corpus.items) {
    for (const std::string& tok : s.tokens) ++freq[tok];
  }
  return freq;
}

namespace {

std::size_t frequency_of(const FreqTable& freq, const std::string& tok) {
  auto it = freq.find(tok);
  return it == freq.end() ? 0 : it->second;
}

std::size_t rarest_position(std::span<const std::string> tokens,
                            const FreqTable& freq) {
  std::size_t best = 0;
  std::size_t best_freq = frequency_of(freq, tokens[0]);
  for (std::size_t i = 1; i < tokens.size(); ++i) {
    const std::size_t f = frequency_of(freq, tokens[i]);
    if (f < best_freq) {
      best = i;
      best_freq = f;
    }
  }
  return best;
}

}  // namespace

std::size_t teacher_blank_rule(std::span<const std::string> tokens,
                               const FreqTable& freq, TeacherRule rule,
                               std::span<const std::string> stop_list,
                               std::string_view marker) {
  if (tokens.empty()) {
    throw std::invalid_argument("teacher_blank_rule: empty sentence");
  }
  switch (rule) {
    case TeacherRule::kRarest:
      return rarest_position(tokens, freq);
    case TeacherRule::kRarestContent: {
      auto stopped = [&](const std::string& tok) {
        return std::find(stop_list.begin(), stop_list.end(), tok) !=
               stop_list.end();
      };
      std::size_t best = tokens.size();
      std::size_t best_freq = 0;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (stopped(tokens[i])) continue;
        const std::size_t f = frequency_of(freq, tokens[i]);
        if (best == tokens.size() || f < best_freq) {
          best = i;
          best_freq = f;
        }
      }
      // All stop words: nothing content-like to blank, fall back.
      return best == tokens.size() ? rarest_position(tokens, freq) : best;
    }
    case TeacherRule::kMarkerAdjacent: {
      for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        if (tokens[i] == marker) return i + 1;
      }
      return rarest_position(tokens, freq);
    }
  }
  throw std::invalid_argument("teacher_blank_rule: unknown rule");
}

Corpus generate_teacher_corpus(const TeacherConfig& cfg) {
  cfg.validate();
  const std::vector<std::string> words = teacher_word_list(cfg.vocab_size);

  // Zipf CDF over ranks: weight of rank k (1-based) is k^-s.
  std::vector<double> cdf(words.size());
  double total = 0.0;
  for (std::size_t k = 0; k < words.size(); ++k) {
    total += std::pow(static_cast<double>(k + 1), -cfg.zipf_exponent);
    cdf[k] = total;
  }
  for (double& c : cdf) c /= total;

  std::mt19937_64 rng(cfg.seed);
  Corpus corpus;
  corpus.items.reserve(cfg.count);
  for (std::size_t n = 0; n < cfg.count; ++n) {
    const std::size_t len =
        cfg.len_min + uniform_index(rng, cfg.len_max - cfg.len_min + 1);
    Sentence s;
    s.tokens.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
      const double u = uniform_unit(rng);
      const auto it = std::lower_bound(cdf.begin(), cdf.end(), u);
      const std::size_t rank =
          it == cdf.end() ? words.size() - 1
                          : static_cast<std::size_t>(it - cdf.begin());
      s.tokens.push_back(words[rank]);
    }
    corpus.items.push_back(std::move(s));
  }

  const FreqTable freq = count_tokens(corpus);
  const std::vector<std::string>& stops =
      cfg.stop_list.empty() ? default_stop_list() : cfg.stop_list;
  for (Sentence& s : corpus.items) {
    s.blank = teacher_blank_rule(s.tokens, freq, cfg.rule, stops, cfg.marker);
  }
  return corpus;
}

}  // namespace clozegen
