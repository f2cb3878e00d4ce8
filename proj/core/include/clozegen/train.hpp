#pragma once

#include <functional>
#include <optional>

#include "clozegen/model.hpp"
#include "clozegen/optim.hpp"

namespace clozegen {

struct TrainConfig {
  ModelConfig model;
  AdamConfig adam;
  double clip_norm = 5.0;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  std::size_t eval_every = 1;
  std::uint64_t seed = 1;

  void validate() const;
  bool operator==(const TrainConfig&) const = default;
};

/// Epoch budget used when the caller does not pin one: the labeler trains
/// longer than the classifier, which converges faster.
std::size_t default_epochs(Scheme scheme);

struct Metrics {
  double loss = 0.0;
  std::optional<double> precision;
  std::optional<double> recall;
  std::optional<double> f1;
  std::optional<double> accuracy;

  /// Model-selection metric: F1 for labeling, accuracy for classification.
  double primary(Scheme scheme) const;
};

/// Positive-class confusion counts accumulated per token over a corpus.
struct LabelCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

void accumulate_labeling_counts(std::span<const std::size_t> predicted,
                                std::size_t gold, LabelCounts& counts);
Metrics labeling_metrics(const LabelCounts& counts, double mean_loss);
Metrics classification_metrics(std::size_t correct, std::size_t total,
                               double mean_loss);

/// Thresholded per-token decoding, precision/recall/F1 over the positive
/// class accumulated across all tokens of all sentences.
Metrics eval_labeling(const AqgModel& model,
                      std::span<const BlankExample> examples,
                      double threshold = 0.5);

/// Accuracy of the argmax position against the gold blank.
Metrics eval_classification(const AqgModel& model,
                            std::span<const BlankExample> examples);

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CheckpointVersionError : public CheckpointError {
 public:
  using CheckpointError::CheckpointError;
};

/// Versioned container binding a vocabulary, the training configuration and
/// the parameter arrays. On disk: a JSON header followed by the raw
/// little-endian IEEE-754 payload, checksummed; loading and re-saving
/// reproduces identical bytes.
struct Checkpoint {
  static constexpr std::uint32_t kFormatVersion = 1;

  TrainConfig config;
  Vocabulary vocab;
  ParameterStore params;
  std::uint64_t step = 0;
};

void save_checkpoint(const Checkpoint& ckpt,
                     const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Builds the model a checkpoint describes; throws if parameter names or
/// shapes disagree with its configuration.
AqgModel make_model(const Checkpoint& ckpt);

struct EpochRecord {
  std::size_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  Metrics valid;
  bool is_best = false;
};

/// One epoch record as a single-line JSON object.
std::string epoch_record_json(const EpochRecord& rec, Scheme scheme);

struct FitResult {
  Checkpoint best;
  Metrics best_valid;
  std::size_t best_epoch = 0;
  std::vector<EpochRecord> history;
  bool diverged = false;
};

using EpochCallback = std::function<void(const EpochRecord&)>;

/// Full training loop: per epoch, a seeded shuffle, then per mini-batch a
/// forward pass, mean loss, backward pass, global-norm clip and Adam step;
/// the validation metric selects the checkpoint to keep. A non-finite loss
/// aborts training with the last good checkpoint retained and the diverged
/// flag set.
FitResult fit(const TrainConfig& cfg, const Corpus& train, const Corpus& valid,
              const Vocabulary& vocab, const EpochCallback& on_epoch = {});

}  // namespace clozegen
