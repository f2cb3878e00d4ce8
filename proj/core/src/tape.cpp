#include "clozegen/tape.hpp"

#include <cmath>
#include <string>

namespace clozegen {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(what);
}

void require_same_tape(Var a, Var b, const char* what) {
  require(a.tape != nullptr && a.tape == b.tape, what);
}

}  // namespace

Var Tape::emit(Node node, const char* what) {
  const Array& value = node.external != nullptr ? *node.external : node.owned;
  ensure_finite(value, what);
  nodes_.push_back(std::move(node));
  return Var{this, static_cast<std::uint32_t>(nodes_.size() - 1)};
}

Var Tape::constant(Array value) {
  Node n;
  n.owned = std::move(value);
  return emit(std::move(n), "constant");
}

Var Tape::leaf(const Array& value, Array* grad_slot) {
  Node n;
  n.external = &value;
  n.grad_slot = grad_slot;
  return emit(std::move(n), "leaf");
}

Array& Tape::grad_ref(std::uint32_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Array(value(id).shape());
  return n.grad;
}

void Tape::backward(Var loss) {
  require(loss.tape == this, "backward: loss from a different tape");
  require(value(loss.id).size() == 1, "backward: loss is not scalar");

  grad_ref(loss.id)[0] = 1.0;
  for (std::uint32_t id = loss.id + 1; id-- > 0;) {
    if (!nodes_[id].grad.empty()) backprop_node(id);
  }
  for (Node& n : nodes_) {
    if (n.grad_slot != nullptr && !n.grad.empty()) {
      for (std::size_t i = 0; i < n.grad.size(); ++i) {
        (*n.grad_slot)[i] += n.grad[i];
      }
    }
  }
}

void Tape::backprop_node(std::uint32_t id) {
  // Copy out the POD bits first: grad_ref() may grow no storage here (all
  // consumers already ran), but keeping references into nodes_ across
  // grad_ref calls is safe only because backward never appends nodes.
  Node& n = nodes_[id];
  const Array& g = n.grad;
  switch (n.op) {
    case Op::kLeaf:
      break;
    case Op::kMatVec: {
      const Array& w = value(n.in0);
      const Array& x = value(n.in1);
      Array& gw = grad_ref(n.in0);
      Array& gx = grad_ref(n.in1);
      const std::size_t rows = w.rows(), cols = w.cols();
      for (std::size_t r = 0; r < rows; ++r) {
        const double gr = g[r];
        if (gr == 0.0) continue;
        const double* wr = w.data() + r * cols;
        double* gwr = gw.data() + r * cols;
        for (std::size_t c = 0; c < cols; ++c) {
          gwr[c] += gr * x[c];
          gx[c] += gr * wr[c];
        }
      }
      break;
    }
    case Op::kAdd: {
      Array& ga = grad_ref(n.in0);
      Array& gb = grad_ref(n.in1);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i];
        gb[i] += g[i];
      }
      break;
    }
    case Op::kSub: {
      Array& ga = grad_ref(n.in0);
      Array& gb = grad_ref(n.in1);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i];
        gb[i] -= g[i];
      }
      break;
    }
    case Op::kMul: {
      const Array& a = value(n.in0);
      const Array& b = value(n.in1);
      Array& ga = grad_ref(n.in0);
      Array& gb = grad_ref(n.in1);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * b[i];
        gb[i] += g[i] * a[i];
      }
      break;
    }
    case Op::kAffine: {
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += n.k * g[i];
      break;
    }
    case Op::kSigmoid: {
      const Array& y = value(id);
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * y[i] * (1.0 - y[i]);
      }
      break;
    }
    case Op::kTanh: {
      const Array& y = value(id);
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += g[i] * (1.0 - y[i] * y[i]);
      }
      break;
    }
    case Op::kConcat: {
      std::size_t offset = 0;
      for (std::uint32_t part : n.extra) {
        Array& gp = grad_ref(part);
        for (std::size_t i = 0; i < gp.size(); ++i) gp[i] += g[offset + i];
        offset += gp.size();
      }
      break;
    }
    case Op::kSlice: {
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < n.b; ++i) ga[n.a + i] += g[i];
      break;
    }
    case Op::kSoftmax: {
      const Array& y = value(id);
      Array& ga = grad_ref(n.in0);
      double gy = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i) gy += g[i] * y[i];
      for (std::size_t i = 0; i < g.size(); ++i) {
        ga[i] += y[i] * (g[i] - gy);
      }
      break;
    }
    case Op::kLogFloor: {
      const Array& x = value(n.in0);
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (x[i] > kProbFloor) ga[i] += g[i] / x[i];
      }
      break;
    }
    case Op::kPick: {
      grad_ref(n.in0)[n.a] += g[0];
      break;
    }
    case Op::kSum: {
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += g[0];
      break;
    }
    case Op::kMean: {
      Array& ga = grad_ref(n.in0);
      const double share = g[0] / static_cast<double>(ga.size());
      for (std::size_t i = 0; i < ga.size(); ++i) ga[i] += share;
      break;
    }
    case Op::kMaxElem: {
      const Array& a = value(n.in0);
      const Array& b = value(n.in1);
      Array& ga = grad_ref(n.in0);
      Array& gb = grad_ref(n.in1);
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (a[i] >= b[i]) {
          ga[i] += g[i];
        } else {
          gb[i] += g[i];
        }
      }
      break;
    }
    case Op::kDot: {
      const Array& a = value(n.in0);
      const Array& b = value(n.in1);
      Array& ga = grad_ref(n.in0);
      Array& gb = grad_ref(n.in1);
      for (std::size_t i = 0; i < a.size(); ++i) {
        ga[i] += g[0] * b[i];
        gb[i] += g[0] * a[i];
      }
      break;
    }
    case Op::kMulMask: {
      Array& ga = grad_ref(n.in0);
      for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * n.aux[i];
      break;
    }
    case Op::kRow: {
      const Array& m = value(n.in0);
      Array& gm = grad_ref(n.in0);
      double* target = gm.data() + n.a * m.cols();
      for (std::size_t i = 0; i < g.size(); ++i) target[i] += g[i];
      break;
    }
  }
}

Tape::Node Tape::binary_node(Op op, Var a, Var b, const char* what) {
  require_same_tape(a, b, what);
  require(a.value().shape() == b.value().shape(), what);
  Node n;
  n.op = op;
  n.in0 = a.id;
  n.in1 = b.id;
  n.owned = Array(a.value().shape());
  return n;
}

Var matvec(Var w, Var x) {
  require_same_tape(w, x, "matvec: operands from different tapes");
  const Array& wv = w.value();
  const Array& xv = x.value();
  require(wv.rank() == 2 && xv.rank() == 1 && wv.cols() == xv.size(),
          "matvec: shape mismatch");
  Tape::Node n;
  n.op = Tape::Op::kMatVec;
  n.in0 = w.id;
  n.in1 = x.id;
  n.owned = Array({wv.rows()});
  const std::size_t rows = wv.rows(), cols = wv.cols();
  for (std::size_t r = 0; r < rows; ++r) {
    const double* wr = wv.data() + r * cols;
    double acc = 0.0;
    for (std::size_t c = 0; c < cols; ++c) acc += wr[c] * xv[c];
    n.owned[r] = acc;
  }
  return w.tape->emit(std::move(n), "matvec");
}

Var add(Var a, Var b) {
  Tape::Node n = Tape::binary_node(Tape::Op::kAdd, a, b, "add: shape mismatch");
  const Array& av = a.value();
  const Array& bv = b.value();
  for (std::size_t i = 0; i < n.owned.size(); ++i) n.owned[i] = av[i] + bv[i];
  return a.tape->emit(std::move(n), "add");
}

Var sub(Var a, Var b) {
  Tape::Node n = Tape::binary_node(Tape::Op::kSub, a, b, "sub: shape mismatch");
  const Array& av = a.value();
  const Array& bv = b.value();
  for (std::size_t i = 0; i < n.owned.size(); ++i) n.owned[i] = av[i] - bv[i];
  return a.tape->emit(std::move(n), "sub");
}

Var mul(Var a, Var b) {
  Tape::Node n = Tape::binary_node(Tape::Op::kMul, a, b, "mul: shape mismatch");
  const Array& av = a.value();
  const Array& bv = b.value();
  for (std::size_t i = 0; i < n.owned.size(); ++i) n.owned[i] = av[i] * bv[i];
  return a.tape->emit(std::move(n), "mul");
}

Var max(Var a, Var b) {
  Tape::Node n = Tape::binary_node(Tape::Op::kMaxElem, a, b, "max: shape mismatch");
  const Array& av = a.value();
  const Array& bv = b.value();
  for (std::size_t i = 0; i < n.owned.size(); ++i) {
    n.owned[i] = av[i] >= bv[i] ? av[i] : bv[i];
  }
  return a.tape->emit(std::move(n), "max");
}

Var affine(Var a, double scale, double shift) {
  require(a.tape != nullptr, "affine: null var");
  Tape::Node n;
  n.op = Tape::Op::kAffine;
  n.in0 = a.id;
  n.k = scale;
  n.c = shift;
  const Array& av = a.value();
  n.owned = Array(av.shape());
  for (std::size_t i = 0; i < n.owned.size(); ++i) {
    n.owned[i] = scale * av[i] + shift;
  }
  return a.tape->emit(std::move(n), "affine");
}

Var sigmoid(Var a) {
  require(a.tape != nullptr, "sigmoid: null var");
  Tape::Node n;
  n.op = Tape::Op::kSigmoid;
  n.in0 = a.id;
  const Array& av = a.value();
  n.owned = Array(av.shape());
  for (std::size_t i = 0; i < n.owned.size(); ++i) {
    n.owned[i] = 1.0 / (1.0 + std::exp(-av[i]));
  }
  return a.tape->emit(std::move(n), "sigmoid");
}

Var tanh(Var a) {
  require(a.tape != nullptr, "tanh: null var");
  Tape::Node n;
  n.op = Tape::Op::kTanh;
  n.in0 = a.id;
  const Array& av = a.value();
  n.owned = Array(av.shape());
  for (std::size_t i = 0; i < n.owned.size(); ++i) {
    n.owned[i] = std::tanh(av[i]);
  }
  return a.tape->emit(std::move(n), "tanh");
}

Var concat(std::span<const Var> parts) {
  require(!parts.empty(), "concat: no inputs");
  Tape* tape = parts[0].tape;
  std::size_t total = 0;
  for (const Var& p : parts) {
    require(p.tape == tape && tape != nullptr,
            "concat: operands from different tapes");
    require(p.value().rank() == 1, "concat: rank-1 inputs only");
    total += p.value().size();
  }
  Tape::Node n;
  n.op = Tape::Op::kConcat;
  n.extra.reserve(parts.size());
  n.owned = Array({total});
  std::size_t offset = 0;
  for (const Var& p : parts) {
    n.extra.push_back(p.id);
    const Array& pv = p.value();
    for (std::size_t i = 0; i < pv.size(); ++i) n.owned[offset + i] = pv[i];
    offset += pv.size();
  }
  return tape->emit(std::move(n), "concat");
}

Var slice(Var a, std::size_t offset, std::size_t len) {
  require(a.tape != nullptr, "slice: null var");
  const Array& av = a.value();
  require(av.rank() == 1 && offset + len <= av.size(), "slice: out of range");
  require(len > 0, "slice: empty result");
  Tape::Node n;
  n.op = Tape::Op::kSlice;
  n.in0 = a.id;
  n.a = offset;
  n.b = len;
  n.owned = Array({len});
  for (std::size_t i = 0; i < len; ++i) n.owned[i] = av[offset + i];
  return a.tape->emit(std::move(n), "slice");
}

Var softmax(Var a) {
  require(a.tape != nullptr, "softmax: null var");
  Tape::Node n;
  n.op = Tape::Op::kSoftmax;
  n.in0 = a.id;
  n.owned = softmax(a.value());
  return a.tape->emit(std::move(n), "softmax");
}

Var log_floor(Var a) {
  require(a.tape != nullptr, "log_floor: null var");
  Tape::Node n;
  n.op = Tape::Op::kLogFloor;
  n.in0 = a.id;
  const Array& av = a.value();
  n.owned = Array(av.shape());
  for (std::size_t i = 0; i < n.owned.size(); ++i) {
    n.owned[i] = std::log(std::max(av[i], kProbFloor));
  }
  return a.tape->emit(std::move(n), "log_floor");
}

Var pick(Var a, std::size_t index) {
  require(a.tape != nullptr, "pick: null var");
  const Array& av = a.value();
  require(av.rank() == 1 && index < av.size(), "pick: index out of range");
  Tape::Node n;
  n.op = Tape::Op::kPick;
  n.in0 = a.id;
  n.a = index;
  n.owned = Array::scalar(av[index]);
  return a.tape->emit(std::move(n), "pick");
}

Var sum(Var a) {
  require(a.tape != nullptr, "sum: null var");
  const Array& av = a.value();
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i];
  Tape::Node n;
  n.op = Tape::Op::kSum;
  n.in0 = a.id;
  n.owned = Array::scalar(acc);
  return a.tape->emit(std::move(n), "sum");
}

Var mean(Var a) {
  require(a.tape != nullptr, "mean: null var");
  const Array& av = a.value();
  require(!av.empty(), "mean: empty input");
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i];
  Tape::Node n;
  n.op = Tape::Op::kMean;
  n.in0 = a.id;
  n.owned = Array::scalar(acc / static_cast<double>(av.size()));
  return a.tape->emit(std::move(n), "mean");
}

Var dot(Var a, Var b) {
  require_same_tape(a, b, "dot: operands from different tapes");
  const Array& av = a.value();
  const Array& bv = b.value();
  require(av.rank() == 1 && av.shape() == bv.shape(), "dot: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) acc += av[i] * bv[i];
  Tape::Node n;
  n.op = Tape::Op::kDot;
  n.in0 = a.id;
  n.in1 = b.id;
  n.owned = Array::scalar(acc);
  return a.tape->emit(std::move(n), "dot");
}

Var mul_mask(Var a, Array mask) {
  require(a.tape != nullptr, "mul_mask: null var");
  const Array& av = a.value();
  require(av.shape() == mask.shape(), "mul_mask: shape mismatch");
  Tape::Node n;
  n.op = Tape::Op::kMulMask;
  n.in0 = a.id;
  n.owned = Array(av.shape());
  for (std::size_t i = 0; i < n.owned.size(); ++i) n.owned[i] = av[i] * mask[i];
  n.aux = std::move(mask);
  return a.tape->emit(std::move(n), "mul_mask");
}

Var row(Var m, std::size_t r) {
  require(m.tape != nullptr, "row: null var");
  const Array& mv = m.value();
  require(mv.rank() == 2 && r < mv.rows(), "row: index out of range");
  Tape::Node n;
  n.op = Tape::Op::kRow;
  n.in0 = m.id;
  n.a = r;
  n.owned = Array({mv.cols()});
  const double* src = mv.data() + r * mv.cols();
  for (std::size_t i = 0; i < n.owned.size(); ++i) n.owned[i] = src[i];
  return m.tape->emit(std::move(n), "row");
}

}  // namespace clozegen
