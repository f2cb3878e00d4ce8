#pragma once

#include <cstdint>

#include "clozegen/params.hpp"

namespace clozegen {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  bool operator==(const AdamConfig&) const = default;
};

/// Rescales every gradient by max_norm/norm when the L2 norm over all slots
/// concatenated exceeds max_norm. Returns the pre-clip norm. Throws
/// NumericError naming the offending parameter on non-finite gradients.
double clip_global_norm(const ParameterStore& store, double max_norm = 5.0);

/// Adam with bias correction. First and second moment estimates mirror the
/// store's parameter shapes; the step counter is advanced before each
/// update.
class AdamState {
 public:
  explicit AdamState(const ParameterStore& store, AdamConfig cfg = {});

  /// p -= lr * m_hat / (sqrt(v_hat) + eps) using the store's gradients.
  void step(ParameterStore& store);

  std::uint64_t steps() const { return t_; }
  const AdamConfig& config() const { return cfg_; }

 private:
  AdamConfig cfg_;
  std::vector<Array> m_;
  std::vector<Array> v_;
  std::uint64_t t_ = 0;
};

}  // namespace clozegen
