#include "clozegen/params.hpp"

namespace clozegen {

std::size_t ParameterStore::add(std::string name, Array value) {
  if (index_.contains(name)) {
    throw std::invalid_argument("ParameterStore: duplicate parameter '" +
                                name + "'");
  }
  ensure_finite(value, "parameter '" + name + "'");
  Entry e;
  e.grad = Array(value.shape());
  e.value = std::move(value);
  e.name = std::move(name);
  entries_.push_back(std::move(e));
  index_.emplace(entries_.back().name, entries_.size() - 1);
  return entries_.size() - 1;
}

bool ParameterStore::contains(std::string_view name) const {
  return index_.contains(std::string(name));
}

std::size_t ParameterStore::index_of(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) {
    throw std::invalid_argument("ParameterStore: unknown parameter '" +
                                std::string(name) + "'");
  }
  return it->second;
}

std::size_t ParameterStore::total_size() const {
  std::size_t n = 0;
  for (const Entry& e : entries_) n += e.value.size();
  return n;
}

void ParameterStore::zero_grads() const {
  for (const Entry& e : entries_) e.grad.fill(0.0);
}

void backward(Tape& tape, Var loss, const ParameterStore& store) {
  store.zero_grads();
  tape.backward(loss);
}

}  // namespace clozegen
