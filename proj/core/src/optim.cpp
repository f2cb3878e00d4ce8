#include "clozegen/optim.hpp"

#include <cmath>

namespace clozegen {

double clip_global_norm(const ParameterStore& store, double max_norm) {
  if (max_norm <= 0.0) {
    throw std::invalid_argument("clip_global_norm: max_norm must be positive");
  }
  double sum_sq = 0.0;
  for (const auto& e : store) {
    if (!e.grad.all_finite()) {
      throw NumericError("non-finite gradient in parameter '" + e.name + "'");
    }
    for (std::size_t i = 0; i < e.grad.size(); ++i) {
      sum_sq += e.grad[i] * e.grad[i];
    }
  }
  const double norm = std::sqrt(sum_sq);
  if (norm > max_norm) {
    const double scale = max_norm / norm;
    for (const auto& e : store) {
      for (std::size_t i = 0; i < e.grad.size(); ++i) e.grad[i] *= scale;
    }
  }
  return norm;
}

AdamState::AdamState(const ParameterStore& store, AdamConfig cfg) : cfg_(cfg) {
  m_.reserve(store.count());
  v_.reserve(store.count());
  for (const auto& e : store) {
    m_.emplace_back(e.value.shape());
    v_.emplace_back(e.value.shape());
  }
}

void AdamState::step(ParameterStore& store) {
  if (store.count() != m_.size()) {
    throw std::invalid_argument("AdamState: store layout changed");
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
  for (std::size_t p = 0; p < m_.size(); ++p) {
    auto& e = store.entry(p);
    if (e.value.shape() != m_[p].shape()) {
      throw std::invalid_argument("AdamState: shape mismatch for '" + e.name +
                                  "'");
    }
    Array& m = m_[p];
    Array& v = v_[p];
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double g = e.grad[i];
      m[i] = cfg_.beta1 * m[i] + (1.0 - cfg_.beta1) * g;
      v[i] = cfg_.beta2 * v[i] + (1.0 - cfg_.beta2) * g * g;
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      e.value[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

}  // namespace clozegen
