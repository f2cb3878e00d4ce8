#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "clozegen/array.hpp"

namespace clozegen {

class Tape;

/// Handle to one node of a Tape. Cheap to copy; valid as long as the tape is.
struct Var {
  Tape* tape = nullptr;
  std::uint32_t id = 0;

  const Array& value() const;
};

/// Reverse-mode autodiff over a flat record of primitive ops.
///
/// Node ids are assigned in creation order, so walking them backwards is a
/// reverse topological order; each node's adjoint accumulates additively
/// from all of its consumers. Every op checks its result for NaN/Inf and
/// throws NumericError rather than recording garbage.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  /// Leaf owning its value. No gradient is tracked for it.
  Var constant(Array value);

  /// Leaf whose storage lives elsewhere (a ParameterStore entry). The
  /// referenced arrays must outlive the tape. With a null grad_slot the
  /// leaf is frozen: backward() will not write a gradient for it.
  Var leaf(const Array& value, Array* grad_slot = nullptr);

  /// Seeds d(loss)/d(loss) = 1 and sweeps the record in reverse, then
  /// accumulates (+=) each bound leaf's adjoint into its grad slot. Callers
  /// zero the slots first; see backward(Tape&, Var, ParameterStore&).
  void backward(Var loss);

  std::size_t size() const { return nodes_.size(); }
  const Array& value(std::uint32_t id) const {
    const Node& n = nodes_[id];
    return n.external != nullptr ? *n.external : n.owned;
  }

 private:
  enum class Op : std::uint8_t {
    kLeaf,
    kMatVec,
    kAdd,
    kSub,
    kMul,
    kAffine,
    kSigmoid,
    kTanh,
    kConcat,
    kSlice,
    kSoftmax,
    kLogFloor,
    kPick,
    kSum,
    kMean,
    kMaxElem,
    kDot,
    kMulMask,
    kRow,
  };

  struct Node {
    Op op = Op::kLeaf;
    std::uint32_t in0 = 0;
    std::uint32_t in1 = 0;
    std::vector<std::uint32_t> extra;  // concat inputs
    std::size_t a = 0;                 // slice offset / pick index / row
    std::size_t b = 0;                 // slice length
    double k = 0.0;                    // affine scale
    double c = 0.0;                    // affine shift
    Array aux;                         // constant mask
    Array owned;                       // value storage for computed nodes
    const Array* external = nullptr;   // value storage for bound leaves
    Array* grad_slot = nullptr;
    Array grad;  // empty until a consumer touches it
  };

  static Node binary_node(Op op, Var a, Var b, const char* what);
  Var emit(Node node, const char* what);
  Array& grad_ref(std::uint32_t id);
  void backprop_node(std::uint32_t id);

  std::vector<Node> nodes_;

  friend Var matvec(Var, Var);
  friend Var add(Var, Var);
  friend Var sub(Var, Var);
  friend Var mul(Var, Var);
  friend Var affine(Var, double, double);
  friend Var sigmoid(Var);
  friend Var tanh(Var);
  friend Var concat(std::span<const Var>);
  friend Var slice(Var, std::size_t, std::size_t);
  friend Var softmax(Var);
  friend Var log_floor(Var);
  friend Var pick(Var, std::size_t);
  friend Var sum(Var);
  friend Var mean(Var);
  friend Var max(Var, Var);
  friend Var dot(Var, Var);
  friend Var mul_mask(Var, Array);
  friend Var row(Var, std::size_t);
};

inline const Array& Var::value() const { return tape->value(id); }

// Primitive ops. All validate shapes and surface non-finite results.
Var matvec(Var w, Var x);                       // rank-2 (M x N) times rank-1 (N)
Var add(Var a, Var b);                          // elementwise
Var sub(Var a, Var b);
Var mul(Var a, Var b);
Var affine(Var a, double scale, double shift);  // scale * a + shift
Var sigmoid(Var a);
Var tanh(Var a);
Var concat(std::span<const Var> parts);         // rank-1 concatenation
Var slice(Var a, std::size_t offset, std::size_t len);
Var softmax(Var a);
Var log_floor(Var a);                           // log(max(a, kProbFloor))
Var pick(Var a, std::size_t index);             // rank-1 element as scalar
Var sum(Var a);
Var mean(Var a);
Var max(Var a, Var b);                          // elementwise, ties go to a
Var dot(Var a, Var b);
Var mul_mask(Var a, Array mask);                // elementwise by a constant
Var row(Var m, std::size_t r);                  // gather one matrix row

inline Var operator+(Var a, Var b) { return add(a, b); }
inline Var operator-(Var a, Var b) { return sub(a, b); }
inline Var operator*(Var a, Var b) { return mul(a, b); }

}  // namespace clozegen
