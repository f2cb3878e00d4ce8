#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "clozegen/params.hpp"
#include "clozegen/rng.hpp"

namespace clozegen {

enum class Pooling { kMax, kMean, kLast };

Pooling pooling_from_string(std::string_view s);
std::string_view to_string(Pooling p);

/// One direction of one LSTM layer, bound to tape leaves. Gate rows are
/// packed [input, forget, candidate, output], each hidden() wide.
struct LstmParamRefs {
  Var w_x;   // 4H x in_dim
  Var w_h;   // 4H x H
  Var bias;  // 4H

  std::size_t hidden() const { return w_h.value().cols(); }
};

struct AttentionParamRefs {
  Var w;  // A x 4H, mixes [h_i; summary]
  Var v;  // A
};

/// Standard LSTM recurrence: sigmoid input/forget/output gates, tanh
/// candidate, c = f*c_prev + i*g, h = o*tanh(c). Returns (h, c).
std::pair<Var, Var> lstm_cell(Var x, Var h_prev, Var c_prev,
                              const LstmParamRefs& p);

/// Runs a forward pass left-to-right and a backward pass right-to-left, both
/// from zero initial state, and concatenates the two hidden states per
/// position.
std::vector<Var> bilstm_encode(std::span<const Var> inputs,
                               const LstmParamRefs& fw,
                               const LstmParamRefs& bw);

/// Reduces per-token vectors to one summary vector.
Var pool(std::span<const Var> encoded, Pooling mode);

/// Content-based attention: scores each position's vector against the
/// summary through W and v, softmaxes the scores into a distribution over
/// positions.
Var attend(std::span<const Var> encoded, Var summary,
           const AttentionParamRefs& p);

/// Inverted dropout: each element zeroed with probability p_drop and the
/// survivors scaled by 1/(1-p_drop) while training; identity at inference.
Var dropout(Var x, double p_drop, bool training, std::mt19937_64& rng);

Var linear(Var w, Var x, Var b);  // w.x + b

/// All weights drawn uniform(-0.08, 0.08) in element order.
Array uniform_init(std::vector<std::size_t> shape, std::mt19937_64& rng);

/// Registers {prefix}.w_x / {prefix}.w_h / {prefix}.bias with the shared
/// init scheme; the forget-gate bias slice is then set to 1.
void register_lstm_params(ParameterStore& store, const std::string& prefix,
                          std::size_t in_dim, std::size_t hidden,
                          std::mt19937_64& rng);

}  // namespace clozegen
