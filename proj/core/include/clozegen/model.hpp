#pragma once

#include "clozegen/data.hpp"
#include "clozegen/nn.hpp"

namespace clozegen {

enum class Scheme { kLabeling, kClassification };

Scheme scheme_from_string(std::string_view s);
std::string_view to_string(Scheme s);

struct ModelConfig {
  std::size_t embed_dim = 300;
  std::size_t hidden_dim = 300;
  std::size_t layers = 2;
  double dropout = 0.2;
  Pooling pooling = Pooling::kLast;
  Scheme scheme = Scheme::kLabeling;

  /// Width of the attention mixing space. The scoring matrix maps the
  /// 4H-dim concatenation [h_i; summary] into this space.
  std::size_t attention_dim() const { return 2 * hidden_dim; }

  void validate() const;
  bool operator==(const ModelConfig&) const = default;
};

/// Exactly one 1.0 at `index`, zeros elsewhere.
std::vector<double> one_hot(std::size_t length, std::size_t index);

/// Mean per-token binary cross-entropy of the positive-class probabilities
/// against a one-hot gold vector (exactly one positive required). Logs are
/// floored at kProbFloor.
double label_loss(std::span<const double> positive_probs,
                  std::span<const double> gold_one_hot);

/// -log(dist[gold]) with the probability floor.
double classify_loss(std::span<const double> dist, std::size_t gold);

/// Positions whose probability strictly exceeds the threshold.
std::vector<std::size_t> decode_labels(std::span<const double> positive_probs,
                                       double threshold = 0.5);

/// Argmax with ties broken toward the lowest index.
std::size_t argmax_lowest(std::span<const double> v);

/// Both blank-position models over a shared embedding + stacked biLSTM
/// trunk. The labeling head projects each token state to a 2-class softmax;
/// the classification head pools the states into a summary and points back
/// at a position through content-based attention, so its output dictionary
/// size tracks the input length.
class AqgModel {
 public:
  /// Fresh model with seeded uniform(-0.08, 0.08) initialization.
  AqgModel(ModelConfig cfg, std::size_t vocab_size, std::uint64_t init_seed);
  /// Adopts existing parameters (e.g. from a checkpoint); names and shapes
  /// must match the configuration exactly.
  AqgModel(ModelConfig cfg, std::size_t vocab_size, ParameterStore params);

  const ModelConfig& config() const { return cfg_; }
  std::size_t vocab_size() const { return vocab_size_; }
  ParameterStore& params() { return params_; }
  const ParameterStore& params() const { return params_; }

  /// Per-token positive-class probabilities (labeling head).
  std::vector<double> label_forward(std::span<const int> tokens,
                                    bool training = false,
                                    std::mt19937_64* rng = nullptr) const;

  /// Distribution over positions (classification head).
  std::vector<double> classify_forward(std::span<const int> tokens,
                                       bool training = false,
                                       std::mt19937_64* rng = nullptr) const;

  /// Most likely blank position under the configured scheme; ties go to the
  /// lowest index.
  std::size_t predict_blank(std::span<const int> tokens) const;

  /// Runs predict_blank k times, masking each selected position with the
  /// blank sentinel before the next pass. Positions come back in selection
  /// order, all distinct; sentinel positions are never selected.
  std::vector<std::size_t> generate_multi_blank(
      std::vector<int> tokens, std::size_t k,
      int blank_id = Vocabulary::kBlank) const;

  /// Training-path loss node for one example (binds gradient slots).
  Var example_loss(Tape& tape, const BlankExample& example, bool training,
                   std::mt19937_64& rng) const;

  /// Graph-building pieces, exposed for composition tests.
  std::vector<Var> label_prob_nodes(Tape& tape, std::span<const int> tokens,
                                    bool training, std::mt19937_64* rng) const;
  Var classify_dist_node(Tape& tape, std::span<const int> tokens,
                         bool training, std::mt19937_64* rng) const;

 private:
  std::vector<Var> encode_tokens(Tape& tape, std::span<const int> tokens,
                                 bool training, std::mt19937_64* rng) const;
  Var leaf_for(Tape& tape, std::string_view name) const;
  LstmParamRefs lstm_refs(Tape& tape, std::size_t layer,
                          std::string_view direction) const;
  void validate_store() const;

  ModelConfig cfg_;
  std::size_t vocab_size_ = 0;
  ParameterStore params_;
};

}  // namespace clozegen
