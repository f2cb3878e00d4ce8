#include "clozegen/array.hpp"

#include <algorithm>
#include <cmath>

namespace clozegen {

namespace {

std::size_t shape_product(const std::vector<std::size_t>& shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

}  // namespace

Array::Array(std::vector<std::size_t> shape)
    : shape_(std::move(shape)), data_(shape_product(shape_), 0.0) {}

Array::Array(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_product(shape_) != data_.size()) {
    throw std::invalid_argument("Array: shape does not match data length");
  }
}

Array Array::scalar(double v) { return Array({1}, {v}); }

Array Array::vec(std::vector<double> data) {
  std::size_t n = data.size();
  return Array({n}, std::move(data));
}

std::size_t Array::rows() const {
  if (rank() != 2) throw std::invalid_argument("Array::rows: not rank-2");
  return shape_[0];
}

std::size_t Array::cols() const {
  if (rank() != 2) throw std::invalid_argument("Array::cols: not rank-2");
  return shape_[1];
}

double& Array::at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }

double Array::at(std::size_t r, std::size_t c) const { return data_[r * cols() + c]; }

bool Array::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

void Array::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void ensure_finite(const Array& a, const std::string& context) {
  if (!a.all_finite()) {
    throw NumericError("non-finite value in " + context);
  }
}

Array softmax(const Array& logits) {
  if (logits.rank() != 1 || logits.empty()) {
    throw std::invalid_argument("softmax: expects a nonempty rank-1 array");
  }
  ensure_finite(logits, "softmax input");
  double hi = logits[0];
  for (std::size_t i = 1; i < logits.size(); ++i) hi = std::max(hi, logits[i]);
  Array out({logits.size()});
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - hi);
    total += out[i];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= total;
  return out;
}

double nll(const Array& dist, std::size_t target) {
  if (dist.rank() != 1 || dist.empty()) {
    throw std::invalid_argument("nll: expects a nonempty rank-1 distribution");
  }
  if (target >= dist.size()) {
    throw std::invalid_argument("nll: target index out of range");
  }
  ensure_finite(dist, "nll input");
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) total += dist[i];
  if (std::abs(total - 1.0) > 1e-6) {
    throw std::invalid_argument("nll: distribution does not sum to 1");
  }
  return -std::log(std::max(dist[target], kProbFloor));
}

}  // namespace clozegen
