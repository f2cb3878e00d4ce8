#include "clozegen/data.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "clozegen/rng.hpp"

namespace clozegen {

namespace {

using nlohmann::json;

bool is_ascii_punct(char c) {
  return c > 0 && std::ispunct(static_cast<unsigned char>(c));
}

std::string lowercased(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

const std::array<std::string, Vocabulary::kReservedCount> kReservedTokens = {
    "<pad>", "<unk>", "<blank>"};

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  }
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for reading");
  }
  return in;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    std::size_t start = i;
    while (i < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    }
    if (i == start) continue;
    std::string_view chunk = text.substr(start, i - start);

    std::size_t lo = 0, hi = chunk.size();
    while (lo < hi && is_ascii_punct(chunk[lo])) {
      out.push_back(std::string(1, chunk[lo]));
      ++lo;
    }
    std::size_t tail_begin = hi;
    while (tail_begin > lo && is_ascii_punct(chunk[tail_begin - 1])) {
      --tail_begin;
    }
    if (tail_begin > lo) {
      out.push_back(lowercased(chunk.substr(lo, tail_begin - lo)));
    }
    for (std::size_t j = tail_begin; j < hi; ++j) {
      out.push_back(std::string(1, chunk[j]));
    }
  }
  return out;
}

Vocabulary::Vocabulary() {
  for (const std::string& t : kReservedTokens) {
    token_to_id_.emplace(t, static_cast<int>(id_to_token_.size()));
    id_to_token_.push_back(t);
  }
}

Vocabulary Vocabulary::build(
    const std::vector<std::vector<std::string>>& corpus, std::size_t min_freq) {
  if (corpus.empty()) {
    throw std::invalid_argument("Vocabulary::build: empty corpus");
  }
  if (min_freq < 1) {
    throw std::invalid_argument("Vocabulary::build: min_freq must be >= 1");
  }
  std::map<std::string, std::size_t> counts;
  for (const auto& sentence : corpus) {
    for (const std::string& tok : sentence) ++counts[tok];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  ranked.reserve(counts.size());
  for (auto& [tok, n] : counts) {
    if (n >= min_freq) ranked.emplace_back(tok, n);
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(ranked.size());
  for (auto& [tok, n] : ranked) tokens.push_back(tok);
  return from_tokens(std::move(tokens), min_freq);
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> tokens,
                                   std::size_t min_freq) {
  Vocabulary v;
  v.min_freq_ = min_freq;
  for (std::string& tok : tokens) {
    if (v.token_to_id_.contains(tok)) {
      throw std::invalid_argument("Vocabulary: duplicate token '" + tok + "'");
    }
    v.token_to_id_.emplace(tok, static_cast<int>(v.id_to_token_.size()));
    v.id_to_token_.push_back(std::move(tok));
  }
  return v;
}

int Vocabulary::id(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw std::out_of_range("Vocabulary::token: id out of range");
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

std::span<const std::string> Vocabulary::tokens() const {
  return std::span(id_to_token_).subspan(kReservedCount);
}

std::vector<int> Vocabulary::encode(std::span<const std::string> tokens) const {
  std::vector<int> ids;
  ids.reserve(tokens.size());
  for (const std::string& t : tokens) ids.push_back(id(t));
  return ids;
}

std::vector<std::string> Vocabulary::decode(std::span<const int> ids) const {
  std::vector<std::string> out;
  out.reserve(ids.size());
  for (int i : ids) out.push_back(token(i));
  return out;
}

bool Vocabulary::operator==(const Vocabulary& other) const {
  return min_freq_ == other.min_freq_ && id_to_token_ == other.id_to_token_;
}

void Vocabulary::save(const std::filesystem::path& path) const {
  json j;
  j["min_freq"] = min_freq_;
  j["tokens"] = std::vector<std::string>(tokens().begin(), tokens().end());
  std::ofstream out = open_output(path);
  out << j.dump() << '\n';
}

Vocabulary Vocabulary::load(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  json j = json::parse(in);
  return from_tokens(j.at("tokens").get<std::vector<std::string>>(),
                     j.at("min_freq").get<std::size_t>());
}

Corpus load_corpus(const std::filesystem::path& path, std::string split_name) {
  std::ifstream in = open_input(path);
  Corpus corpus;
  corpus.split = std::move(split_name);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = json::parse(line);
    Sentence s;
    s.tokens = j.at("tokens").get<std::vector<std::string>>();
    s.blank = j.at("blank").get<std::size_t>();
    if (s.tokens.empty() || s.blank >= s.tokens.size()) {
      throw std::runtime_error("corpus '" + path.string() + "' line " +
                               std::to_string(line_no) +
                               ": blank index out of range");
    }
    corpus.items.push_back(std::move(s));
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out = open_output(path);
  for (const Sentence& s : corpus.items) {
    json j;
    j["tokens"] = s.tokens;
    j["blank"] = s.blank;
    out << j.dump() << '\n';
  }
}

std::vector<BlankExample> encode_corpus(const Corpus& corpus,
                                        const Vocabulary& vocab) {
  std::vector<BlankExample> out;
  out.reserve(corpus.size());
  for (const Sentence& s : corpus.items) {
    out.push_back(BlankExample{vocab.encode(s.tokens), s.blank});
  }
  return out;
}

std::array<Corpus, 3> split_dataset(const Corpus& all, SplitRatios ratios,
                                    std::uint64_t seed) {
  const double total = ratios.train + ratios.valid + ratios.test;
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("split_dataset: ratios must sum to 1");
  }
  if (ratios.train < 0 || ratios.valid < 0 || ratios.test < 0) {
    throw std::invalid_argument("split_dataset: negative ratio");
  }
  const std::size_t n = all.size();
  if (n < 3) {
    throw std::invalid_argument("split_dataset: need at least 3 examples");
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  seeded_shuffle(order, rng);

  const std::size_t n_train =
      static_cast<std::size_t>(std::floor(ratios.train * n));
  const std::size_t n_valid =
      static_cast<std::size_t>(std::floor(ratios.valid * n));

  std::array<Corpus, 3> out;
  out[0].split = "train";
  out[1].split = "valid";
  out[2].split = "test";
  for (std::size_t i = 0; i < n; ++i) {
    const Sentence& s = all.items[order[i]];
    if (i < n_train) {
      out[0].items.push_back(s);
    } else if (i < n_train + n_valid) {
      out[1].items.push_back(s);
    } else {
      out[2].items.push_back(s);
    }
  }
  return out;
}

}  // namespace clozegen
