#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace clozegen {

/// Floor applied inside logarithms so a degenerate distribution yields a
/// large finite loss instead of -inf.
inline constexpr double kProbFloor = 1e-12;

/// Thrown whenever an operation would produce or consume NaN/Inf. Non-finite
/// values are surfaced at the op that created them, never propagated.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense row-major array of doubles. Rank-1 vectors and rank-2 matrices are
/// all the models need; shapes are immutable after construction.
class Array {
 public:
  Array() = default;
  explicit Array(std::vector<std::size_t> shape);  // zero-filled
  Array(std::vector<std::size_t> shape, std::vector<double> data);

  static Array scalar(double v);
  static Array vec(std::vector<double> data);

  const std::vector<std::size_t>& shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t rows() const;  // rank-2 only
  std::size_t cols() const;

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(std::size_t r, std::size_t c);
  double at(std::size_t r, std::size_t c) const;

  const std::vector<double>& storage() const { return data_; }
  std::vector<double>& storage() { return data_; }

  bool all_finite() const;
  void fill(double v);

  bool operator==(const Array&) const = default;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

/// Throws NumericError naming `context` if any element is NaN/Inf.
void ensure_finite(const Array& a, const std::string& context);

/// Numerically safe softmax over a nonempty rank-1 array (max subtraction).
Array softmax(const Array& logits);

/// Negative log likelihood -log(dist[target]) with the probability floor.
/// `dist` must sum to 1 within 1e-6.
double nll(const Array& dist, std::size_t target);

}  // namespace clozegen
