#include "clozegen/nn.hpp"

#include <array>
#include <stdexcept>

namespace clozegen {

Pooling pooling_from_string(std::string_view s) {
  if (s == "max") return Pooling::kMax;
  if (s == "mean") return Pooling::kMean;
  if (s == "last") return Pooling::kLast;
  throw std::invalid_argument("unknown pooling mode '" + std::string(s) + "'");
}

std::string_view to_string(Pooling p) {
  switch (p) {
    case Pooling::kMax:
      return "max";
    case Pooling::kMean:
      return "mean";
    case Pooling::kLast:
      return "last";
  }
  throw std::invalid_argument("unknown pooling mode");
}

std::pair<Var, Var> lstm_cell(Var x, Var h_prev, Var c_prev,
                              const LstmParamRefs& p) {
  const std::size_t h = p.hidden();
  if (p.w_x.value().rows() != 4 * h || p.bias.value().size() != 4 * h ||
      p.w_x.value().cols() != x.value().size() ||
      h_prev.value().size() != h || c_prev.value().size() != h) {
    throw std::invalid_argument("lstm_cell: shape mismatch");
  }
  Var pre = matvec(p.w_x, x) + matvec(p.w_h, h_prev) + p.bias;
  Var gate_i = sigmoid(slice(pre, 0, h));
  Var gate_f = sigmoid(slice(pre, h, h));
  Var cand = tanh(slice(pre, 2 * h, h));
  Var gate_o = sigmoid(slice(pre, 3 * h, h));
  Var c = gate_f * c_prev + gate_i * cand;
  Var out = gate_o * tanh(c);
  return {out, c};
}

std::vector<Var> bilstm_encode(std::span<const Var> inputs,
                               const LstmParamRefs& fw,
                               const LstmParamRefs& bw) {
  if (inputs.empty()) {
    throw std::invalid_argument("bilstm_encode: empty sequence");
  }
  Tape* tape = inputs[0].tape;
  const std::size_t len = inputs.size();
  const std::size_t h = fw.hidden();
  if (bw.hidden() != h) {
    throw std::invalid_argument("bilstm_encode: direction widths differ");
  }

  std::vector<Var> forward(len), backward(len);
  Var state_h = tape->constant(Array({h}));
  Var state_c = tape->constant(Array({h}));
  for (std::size_t i = 0; i < len; ++i) {
    std::tie(state_h, state_c) = lstm_cell(inputs[i], state_h, state_c, fw);
    forward[i] = state_h;
  }
  state_h = tape->constant(Array({h}));
  state_c = tape->constant(Array({h}));
  for (std::size_t i = len; i-- > 0;) {
    std::tie(state_h, state_c) = lstm_cell(inputs[i], state_h, state_c, bw);
    backward[i] = state_h;
  }

  std::vector<Var> out(len);
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = concat(std::array{forward[i], backward[i]});
  }
  return out;
}

Var pool(std::span<const Var> encoded, Pooling mode) {
  if (encoded.empty()) throw std::invalid_argument("pool: empty sequence");
  switch (mode) {
    case Pooling::kMax: {
      Var acc = encoded[0];
      for (std::size_t i = 1; i < encoded.size(); ++i) {
        acc = max(acc, encoded[i]);
      }
      return acc;
    }
    case Pooling::kMean: {
      Var acc = encoded[0];
      for (std::size_t i = 1; i < encoded.size(); ++i) {
        acc = acc + encoded[i];
      }
      return affine(acc, 1.0 / static_cast<double>(encoded.size()), 0.0);
    }
    case Pooling::kLast:
      return encoded.back();
  }
  throw std::invalid_argument("pool: unknown mode");
}

Var attend(std::span<const Var> encoded, Var summary,
           const AttentionParamRefs& p) {
  if (encoded.empty()) throw std::invalid_argument("attend: empty sequence");
  const std::size_t width = encoded[0].value().size();
  if (p.w.value().cols() != width + summary.value().size() ||
      p.v.value().size() != p.w.value().rows()) {
    throw std::invalid_argument("attend: shape mismatch");
  }
  std::vector<Var> scores;
  scores.reserve(encoded.size());
  for (const Var& h : encoded) {
    Var mixed = matvec(p.w, concat(std::array{h, summary}));
    scores.push_back(dot(p.v, mixed));
  }
  return softmax(concat(scores));
}

Var dropout(Var x, double p_drop, bool training, std::mt19937_64& rng) {
  if (p_drop < 0.0 || p_drop >= 1.0) {
    throw std::invalid_argument("dropout: p_drop must be in [0, 1)");
  }
  if (!training || p_drop == 0.0) return x;
  const double scale = 1.0 / (1.0 - p_drop);
  Array mask(x.value().shape());
  for (std::size_t i = 0; i < mask.size(); ++i) {
    mask[i] = uniform_unit(rng) < p_drop ? 0.0 : scale;
  }
  return mul_mask(x, std::move(mask));
}

Var linear(Var w, Var x, Var b) { return matvec(w, x) + b; }

Array uniform_init(std::vector<std::size_t> shape, std::mt19937_64& rng) {
  Array a(std::move(shape));
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = uniform_range(rng, -0.08, 0.08);
  }
  return a;
}

void register_lstm_params(ParameterStore& store, const std::string& prefix,
                          std::size_t in_dim, std::size_t hidden,
                          std::mt19937_64& rng) {
  store.add(prefix + ".w_x", uniform_init({4 * hidden, in_dim}, rng));
  store.add(prefix + ".w_h", uniform_init({4 * hidden, hidden}, rng));
  Array bias = uniform_init({4 * hidden}, rng);
  for (std::size_t j = 0; j < hidden; ++j) bias[hidden + j] = 1.0;
  store.add(prefix + ".bias", std::move(bias));
}

}  // namespace clozegen
