#include "clozegen/model.hpp"

#include <algorithm>
#include <cmath>

namespace clozegen {

namespace {

std::vector<std::pair<std::string, std::vector<std::size_t>>> expected_shapes(
    const ModelConfig& cfg, std::size_t vocab_size) {
  std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
  const std::size_t e = cfg.embed_dim;
  const std::size_t h = cfg.hidden_dim;
  out.emplace_back("embed.weight", std::vector<std::size_t>{vocab_size, e});
  for (std::size_t layer = 0; layer < cfg.layers; ++layer) {
    const std::size_t in_dim = layer == 0 ? e : 2 * h;
    for (std::string_view dir : {"fw", "bw"}) {
      std::string prefix =
          "lstm.l" + std::to_string(layer) + "." + std::string(dir);
      out.emplace_back(prefix + ".w_x", std::vector<std::size_t>{4 * h, in_dim});
      out.emplace_back(prefix + ".w_h", std::vector<std::size_t>{4 * h, h});
      out.emplace_back(prefix + ".bias", std::vector<std::size_t>{4 * h});
    }
  }
  if (cfg.scheme == Scheme::kLabeling) {
    out.emplace_back("head.w", std::vector<std::size_t>{2, 2 * h});
    out.emplace_back("head.b", std::vector<std::size_t>{2});
  } else {
    const std::size_t a = cfg.attention_dim();
    out.emplace_back("attn.w", std::vector<std::size_t>{a, 4 * h});
    out.emplace_back("attn.v", std::vector<std::size_t>{a});
  }
  return out;
}

}  // namespace

Scheme scheme_from_string(std::string_view s) {
  if (s == "labeling") return Scheme::kLabeling;
  if (s == "classification") return Scheme::kClassification;
  throw std::invalid_argument("unknown scheme '" + std::string(s) + "'");
}

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::kLabeling:
      return "labeling";
    case Scheme::kClassification:
      return "classification";
  }
  throw std::invalid_argument("unknown scheme");
}

void ModelConfig::validate() const {
  if (embed_dim == 0 || hidden_dim == 0) {
    throw std::invalid_argument("ModelConfig: dimensions must be positive");
  }
  if (layers == 0) {
    throw std::invalid_argument("ModelConfig: at least one layer required");
  }
  if (dropout < 0.0 || dropout >= 1.0) {
    throw std::invalid_argument("ModelConfig: dropout must be in [0, 1)");
  }
}

std::vector<double> one_hot(std::size_t length, std::size_t index) {
  if (index >= length) {
    throw std::invalid_argument("one_hot: index out of range");
  }
  std::vector<double> v(length, 0.0);
  v[index] = 1.0;
  return v;
}

double label_loss(std::span<const double> positive_probs,
                  std::span<const double> gold_one_hot) {
  if (positive_probs.size() != gold_one_hot.size() || positive_probs.empty()) {
    throw std::invalid_argument("label_loss: length mismatch");
  }
  std::size_t positives = 0;
  for (double y : gold_one_hot) {
    if (y == 1.0) {
      ++positives;
    } else if (y != 0.0) {
      throw std::invalid_argument("label_loss: gold vector is not one-hot");
    }
  }
  if (positives != 1) {
    throw std::invalid_argument(
        "label_loss: exactly one gold positive required");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < positive_probs.size(); ++i) {
    const double p = positive_probs[i];
    total -= gold_one_hot[i] * std::log(std::max(p, kProbFloor)) +
             (1.0 - gold_one_hot[i]) * std::log(std::max(1.0 - p, kProbFloor));
  }
  return total / static_cast<double>(positive_probs.size());
}

double classify_loss(std::span<const double> dist, std::size_t gold) {
  if (gold >= dist.size()) {
    throw std::invalid_argument("classify_loss: gold index out of range");
  }
  return -std::log(std::max(dist[gold], kProbFloor));
}

std::vector<std::size_t> decode_labels(std::span<const double> positive_probs,
                                       double threshold) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < positive_probs.size(); ++i) {
    if (positive_probs[i] > threshold) out.push_back(i);
  }
  return out;
}

std::size_t argmax_lowest(std::span<const double> v) {
  if (v.empty()) throw std::invalid_argument("argmax_lowest: empty input");
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

AqgModel::AqgModel(ModelConfig cfg, std::size_t vocab_size,
                   std::uint64_t init_seed)
    : cfg_(cfg), vocab_size_(vocab_size) {
  cfg_.validate();
  if (vocab_size_ < Vocabulary::kReservedCount) {
    throw std::invalid_argument("AqgModel: vocabulary too small");
  }
  // Draw order matters for reproducibility: embedding, then per-layer
  // fw/bw LSTM blocks, then the head.
  std::mt19937_64 rng(init_seed);
  params_.add("embed.weight",
              uniform_init({vocab_size_, cfg_.embed_dim}, rng));
  for (std::size_t layer = 0; layer < cfg_.layers; ++layer) {
    const std::size_t in_dim = layer == 0 ? cfg_.embed_dim : 2 * cfg_.hidden_dim;
    for (std::string_view dir : {"fw", "bw"}) {
      register_lstm_params(params_,
                           "lstm.l" + std::to_string(layer) + "." +
                               std::string(dir),
                           in_dim, cfg_.hidden_dim, rng);
    }
  }
  if (cfg_.scheme == Scheme::kLabeling) {
    params_.add("head.w", uniform_init({2, 2 * cfg_.hidden_dim}, rng));
    params_.add("head.b", uniform_init({2}, rng));
  } else {
    params_.add("attn.w",
                uniform_init({cfg_.attention_dim(), 4 * cfg_.hidden_dim}, rng));
    params_.add("attn.v", uniform_init({cfg_.attention_dim()}, rng));
  }
  validate_store();
}

AqgModel::AqgModel(ModelConfig cfg, std::size_t vocab_size,
                   ParameterStore params)
    : cfg_(cfg), vocab_size_(vocab_size), params_(std::move(params)) {
  cfg_.validate();
  if (vocab_size_ < Vocabulary::kReservedCount) {
    throw std::invalid_argument("AqgModel: vocabulary too small");
  }
  validate_store();
}

void AqgModel::validate_store() const {
  const auto expected = expected_shapes(cfg_, vocab_size_);
  if (params_.count() != expected.size()) {
    throw std::invalid_argument("AqgModel: parameter count mismatch");
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const auto& e = params_.entry(i);
    if (e.name != expected[i].first || e.value.shape() != expected[i].second) {
      throw std::invalid_argument("AqgModel: parameter '" + e.name +
                                  "' does not match the configuration");
    }
  }
}

Var AqgModel::leaf_for(Tape& tape, std::string_view name) const {
  const ParameterStore::Entry& e = params_.entry(name);
  return tape.leaf(e.value, &e.grad);
}

LstmParamRefs AqgModel::lstm_refs(Tape& tape, std::size_t layer,
                                  std::string_view direction) const {
  std::string prefix =
      "lstm.l" + std::to_string(layer) + "." + std::string(direction);
  return LstmParamRefs{leaf_for(tape, prefix + ".w_x"),
                       leaf_for(tape, prefix + ".w_h"),
                       leaf_for(tape, prefix + ".bias")};
}

std::vector<Var> AqgModel::encode_tokens(Tape& tape,
                                         std::span<const int> tokens,
                                         bool training,
                                         std::mt19937_64* rng) const {
  if (tokens.empty()) {
    throw std::invalid_argument("AqgModel: empty token sequence");
  }
  if (training && rng == nullptr) {
    throw std::invalid_argument("AqgModel: training forward needs an RNG");
  }
  for (int id : tokens) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_) {
      throw std::invalid_argument("AqgModel: token id out of range");
    }
  }
  const bool drop = training && cfg_.dropout > 0.0;
  Var embed = leaf_for(tape, "embed.weight");
  std::vector<Var> states;
  states.reserve(tokens.size());
  for (int id : tokens) {
    Var x = row(embed, static_cast<std::size_t>(id));
    if (drop) x = dropout(x, cfg_.dropout, true, *rng);
    states.push_back(x);
  }
  for (std::size_t layer = 0; layer < cfg_.layers; ++layer) {
    states = bilstm_encode(states, lstm_refs(tape, layer, "fw"),
                           lstm_refs(tape, layer, "bw"));
    if (drop) {
      for (Var& h : states) h = dropout(h, cfg_.dropout, true, *rng);
    }
  }
  return states;
}

std::vector<Var> AqgModel::label_prob_nodes(Tape& tape,
                                            std::span<const int> tokens,
                                            bool training,
                                            std::mt19937_64* rng) const {
  std::vector<Var> states = encode_tokens(tape, tokens, training, rng);
  Var w = leaf_for(tape, "head.w");
  Var b = leaf_for(tape, "head.b");
  std::vector<Var> probs;
  probs.reserve(states.size());
  for (const Var& h : states) {
    probs.push_back(pick(softmax(linear(w, h, b)), 1));
  }
  return probs;
}

Var AqgModel::classify_dist_node(Tape& tape, std::span<const int> tokens,
                                 bool training, std::mt19937_64* rng) const {
  std::vector<Var> states = encode_tokens(tape, tokens, training, rng);
  Var summary = pool(states, cfg_.pooling);
  AttentionParamRefs attn{leaf_for(tape, "attn.w"), leaf_for(tape, "attn.v")};
  return attend(states, summary, attn);
}

std::vector<double> AqgModel::label_forward(std::span<const int> tokens,
                                            bool training,
                                            std::mt19937_64* rng) const {
  Tape tape;
  std::vector<Var> nodes = label_prob_nodes(tape, tokens, training, rng);
  std::vector<double> probs;
  probs.reserve(nodes.size());
  for (const Var& p : nodes) probs.push_back(p.value()[0]);
  return probs;
}

std::vector<double> AqgModel::classify_forward(std::span<const int> tokens,
                                               bool training,
                                               std::mt19937_64* rng) const {
  Tape tape;
  Var dist = classify_dist_node(tape, tokens, training, rng);
  const Array& v = dist.value();
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::size_t AqgModel::predict_blank(std::span<const int> tokens) const {
  const std::vector<double> scores = cfg_.scheme == Scheme::kLabeling
                                         ? label_forward(tokens)
                                         : classify_forward(tokens);
  return argmax_lowest(scores);
}

std::vector<std::size_t> AqgModel::generate_multi_blank(std::vector<int> tokens,
                                                        std::size_t k,
                                                        int blank_id) const {
  const std::size_t len = tokens.size();
  if (k < 1 || k > len) {
    throw std::invalid_argument("generate_multi_blank: k out of range");
  }
  std::size_t blankable = 0;
  for (int id : tokens) {
    if (id != blank_id) ++blankable;
  }
  if (k > blankable) {
    throw std::invalid_argument(
        "generate_multi_blank: k exceeds blankable positions");
  }
  std::vector<std::size_t> selected;
  selected.reserve(k);
  for (std::size_t pass = 0; pass < k; ++pass) {
    const std::vector<double> scores = cfg_.scheme == Scheme::kLabeling
                                           ? label_forward(tokens)
                                           : classify_forward(tokens);
    std::size_t best = len;
    for (std::size_t i = 0; i < len; ++i) {
      if (tokens[i] == blank_id) continue;
      if (best == len || scores[i] > scores[best]) best = i;
    }
    selected.push_back(best);
    tokens[best] = blank_id;
  }
  return selected;
}

Var AqgModel::example_loss(Tape& tape, const BlankExample& example,
                           bool training, std::mt19937_64& rng) const {
  if (example.blank >= example.tokens.size()) {
    throw std::invalid_argument("example_loss: blank index out of range");
  }
  if (cfg_.scheme == Scheme::kLabeling) {
    std::vector<Var> probs =
        label_prob_nodes(tape, example.tokens, training, &rng);
    std::vector<Var> terms;
    terms.reserve(probs.size());
    for (std::size_t i = 0; i < probs.size(); ++i) {
      Var p = i == example.blank ? probs[i] : affine(probs[i], -1.0, 1.0);
      terms.push_back(log_floor(p));
    }
    return affine(mean(concat(terms)), -1.0, 0.0);
  }
  Var dist = classify_dist_node(tape, example.tokens, training, &rng);
  return affine(log_floor(pick(dist, example.blank)), -1.0, 0.0);
}

}  // namespace clozegen
