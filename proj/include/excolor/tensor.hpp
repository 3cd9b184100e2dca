/**
 * Copyright 2026 The excolor Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef EXCOLOR_TENSOR_HPP
#define EXCOLOR_TENSOR_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <limits>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "excolor/error.hpp"

namespace excolor {

using Shape = std::vector<std::int64_t>;

inline std::int64_t numel(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::int64_t{1}, std::multiplies<>());
}

std::string to_string(const Shape& shape);

template <typename T>
struct TensorNode {
  Shape shape;
  std::vector<T> value;
  std::vector<T> grad;  // empty until a gradient reaches this node
  bool requires_grad = false;
};

// Dense row-major array. Copies of a Tensor share storage; operations never
// write into their inputs, they return new tensors. Layout for images is
// (batch, channel, height, width).
template <typename T>
class Tensor {
 public:
  Tensor() = default;

  explicit Tensor(Shape shape, T fill = T(0)) : node_(std::make_shared<TensorNode<T>>()) {
    node_->value.assign(static_cast<std::size_t>(excolor::numel(shape)), fill);
    node_->shape = std::move(shape);
  }

  Tensor(Shape shape, std::vector<T> values) : node_(std::make_shared<TensorNode<T>>()) {
    if (static_cast<std::int64_t>(values.size()) != excolor::numel(shape)) {
      throw ArgumentError("tensor data length " + std::to_string(values.size()) +
                          " does not match shape " + to_string(shape));
    }
    node_->shape = std::move(shape);
    node_->value = std::move(values);
  }

  static Tensor scalar(T v) { return Tensor(Shape{}, std::vector<T>{v}); }

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const { return node_->shape; }
  int rank() const { return static_cast<int>(node_->shape.size()); }
  std::int64_t dim(int i) const { return node_->shape.at(static_cast<std::size_t>(i)); }
  std::int64_t numel() const { return static_cast<std::int64_t>(node_->value.size()); }

  std::span<const T> values() const { return node_->value; }
  // Write access is reserved for leaves: initialisers and optimisers.
  std::span<T> mutable_values() { return node_->value; }

  T item() const {
    if (node_->value.size() != 1) {
      throw ArgumentError("item() on tensor of shape " + to_string(shape()));
    }
    return node_->value[0];
  }

  bool requires_grad() const { return node_ && node_->requires_grad; }
  Tensor& set_requires_grad(bool on) {
    node_->requires_grad = on;
    return *this;
  }

  bool has_grad() const { return !node_->grad.empty(); }
  std::span<const T> grad() const { return node_->grad; }
  std::span<T> mutable_grad() { return node_->grad; }
  void zero_grad() { node_->grad.clear(); }

  // Gradient storage, allocated as zeros on first use.
  std::vector<T>& grad_buffer() const {
    if (node_->grad.empty()) {
      node_->grad.assign(node_->value.size(), T(0));
    }
    return node_->grad;
  }

  // Same values, cut from any recorded graph.
  Tensor detach() const { return Tensor(shape(), node_->value); }
  Tensor clone() const { return detach(); }

  bool same_node(const Tensor& other) const { return node_ == other.node_; }

 private:
  std::shared_ptr<TensorNode<T>> node_;
};

template <typename T>
class Tape;

template <typename T>
Tape<T>*& active_tape() {
  thread_local Tape<T>* tape = nullptr;
  return tape;
}

// Ordered record of differentiable operations. Only operations evaluated
// while a tape is active (see TapeScope) and that touch a tensor requiring
// gradients are recorded. backward() replays the closures once each, newest
// first; clear() tears the graph down and releases intermediates.
template <typename T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;
  ~Tape() { clear(); }

  void record(std::function<void()> backward_fn) { entries_.push_back(std::move(backward_fn)); }

  void backward(const Tensor<T>& loss) {
    if (!loss.defined() || loss.numel() != 1) {
      throw ArgumentError("backward() requires a scalar loss");
    }
    if (!loss.requires_grad()) {
      throw ArgumentError("backward() on a loss that does not depend on any recorded tensor");
    }
    loss.grad_buffer()[0] += T(1);
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
      (*it)();
    }
  }

  void clear() { entries_.clear(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<std::function<void()>> entries_;
};

template <typename T>
class TapeScope {
 public:
  explicit TapeScope(Tape<T>& tape) : previous_(active_tape<T>()) { active_tape<T>() = &tape; }
  TapeScope(const TapeScope&) = delete;
  TapeScope& operator=(const TapeScope&) = delete;
  ~TapeScope() { active_tape<T>() = previous_; }

 private:
  Tape<T>* previous_;
};

// Suspends recording, e.g. for the detached branch of a loss.
template <typename T>
class NoGradScope {
 public:
  NoGradScope() : previous_(active_tape<T>()) { active_tape<T>() = nullptr; }
  NoGradScope(const NoGradScope&) = delete;
  NoGradScope& operator=(const NoGradScope&) = delete;
  ~NoGradScope() { active_tape<T>() = previous_; }

 private:
  Tape<T>* previous_;
};

// Tracks how close the current evaluation came to a point where some
// operation is not differentiable (activation kinks, loss breakpoints, clamp
// boundaries). Gradient checks use it to reject inputs that sit on a kink.
class NonSmoothMonitor {
 public:
  NonSmoothMonitor();
  NonSmoothMonitor(const NonSmoothMonitor&) = delete;
  NonSmoothMonitor& operator=(const NonSmoothMonitor&) = delete;
  ~NonSmoothMonitor();

  double min_distance() const { return min_distance_; }
  void note(double distance) {
    if (distance < min_distance_) min_distance_ = distance;
  }

  static NonSmoothMonitor* current();

 private:
  NonSmoothMonitor* previous_;
  double min_distance_ = std::numeric_limits<double>::infinity();
};

namespace autograd {

template <typename T>
bool recording(std::initializer_list<const Tensor<T>*> inputs) {
  if (active_tape<T>() == nullptr) return false;
  for (const Tensor<T>* t : inputs) {
    if (t != nullptr && t->defined() && t->requires_grad()) return true;
  }
  return false;
}

template <typename T>
bool recording(const std::vector<Tensor<T>>& inputs) {
  if (active_tape<T>() == nullptr) return false;
  for (const Tensor<T>& t : inputs) {
    if (t.requires_grad()) return true;
  }
  return false;
}

void check_finite(std::span<const float> values);
void check_finite(std::span<const double> values);

template <typename T>
Tensor<T> make_result(Shape shape, std::vector<T> values, bool requires_grad) {
#ifndef NDEBUG
  check_finite(std::span<const T>(values));
#endif
  Tensor<T> out(std::move(shape), std::move(values));
  out.set_requires_grad(requires_grad);
  return out;
}

template <typename T>
void record(std::function<void()> backward_fn) {
  active_tape<T>()->record(std::move(backward_fn));
}

inline void note_nonsmooth(double distance) {
  if (NonSmoothMonitor* m = NonSmoothMonitor::current()) m->note(distance);
}

}  // namespace autograd

}  // namespace excolor

#endif  // EXCOLOR_TENSOR_HPP
