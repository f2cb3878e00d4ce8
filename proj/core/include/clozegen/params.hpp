#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clozegen/tape.hpp"

namespace clozegen {

/// Named flat arrays for all learnable weights, each paired with a gradient
/// slot of the same shape. Entry order is insertion order and is part of the
/// checkpoint contract. Gradient slots are scratch space (mutable) so that
/// read-only forward passes can bind frozen leaves through const access.
class ParameterStore {
 public:
  struct Entry {
    std::string name;
    Array value;
    mutable Array grad;
  };

  std::size_t add(std::string name, Array value);

  bool contains(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;

  Entry& entry(std::size_t i) { return entries_[i]; }
  const Entry& entry(std::size_t i) const { return entries_[i]; }
  Entry& entry(std::string_view name) { return entries_[index_of(name)]; }
  const Entry& entry(std::string_view name) const {
    return entries_[index_of(name)];
  }

  std::size_t count() const { return entries_.size(); }
  std::size_t total_size() const;

  void zero_grads() const;

  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Zeroes every gradient slot in the store, then runs the tape's adjoint
/// sweep, so parameters the loss never touched end up with exactly zero
/// gradient.
void backward(Tape& tape, Var loss, const ParameterStore& store);

}  // namespace clozegen
