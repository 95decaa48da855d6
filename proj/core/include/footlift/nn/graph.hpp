#pragma once

#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "footlift/nn/tensor.hpp"

namespace footlift::nn {

// Named parameter with a gradient accumulator of the same shape.
struct Param {
  std::string name;
  Tensor value;
  Tensor grad;
};

// Parameter container with stable addresses and creation order.
class ParamStore {
 public:
  Param& create(const std::string& name, int rows, int cols);
  Param& at(const std::string& name);
  const Param& at(const std::string& name) const;
  bool has(const std::string& name) const;

  std::deque<Param>& items() { return items_; }
  const std::deque<Param>& items() const { return items_; }
  void zero_grads();
  long total_size() const;

 private:
  std::deque<Param> items_;
};

// Additive attention mask: 0 where attention is allowed, -inf where blocked.
// The diagonal is always allowed and the band is symmetric.
struct AttentionMask {
  int length = 0;
  int window = 0;  // half-width: (i, j) allowed iff |i - j| <= window
  bool allowed(int i, int j) const { return std::abs(i - j) <= window; }
  Tensor additive() const;  // [L, L] of 0 / -inf
};

AttentionMask banded_mask(int length, int window);

class Graph;

// Handle to a node in a Graph. Valid while the graph is alive.
class Var {
 public:
  Var() = default;
  const Tensor& value() const;
  // Accumulated adjoint after Graph::backward; zeros if none reached it.
  const Tensor& grad() const;
  int rows() const { return value().rows(); }
  int cols() const { return value().cols(); }
  int id() const { return id_; }
  bool valid() const { return g_ != nullptr; }

 private:
  friend class Graph;
  Var(Graph* g, int id) : g_(g), id_(id) {}
  Graph* g_ = nullptr;
  int id_ = -1;
};

// Eager define-by-run reverse-mode tape over Tensors. Values are computed at
// node creation; backward() walks the tape once in reverse creation order.
// Gradients of param nodes accumulate into Param::grad, so several graphs
// evaluated in sequence implement fixed-order batch accumulation.
class Graph {
 public:
  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor t);
  Var leaf(Tensor t);  // grad-tracked non-parameter input
  Var param(Param& p);

  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);
  Var scale(Var a, double s);
  Var add_rowvec(Var a, Var row);   // row: [1, k]
  Var mul_colvec(Var a, Var col);   // col: [L, 1]
  Var reciprocal(Var a);
  Var matmul(Var a, Var b);
  Var matmul_nt(Var a, Var b);      // a * b^T
  Var slice_cols(Var a, int c0, int n);
  Var concat_cols(const std::vector<Var>& parts);
  Var rowwise_sum(Var a);           // [L, k] -> [L, 1]
  Var rowwise_norm(Var a);          // [L, k] -> [L, 1]
  Var mean_all(Var a);              // -> [1, 1]
  Var gelu(Var a);
  Var layernorm(Var x, Var gain, Var bias);  // gain, bias: [1, k]
  Var softmax_masked(Var scores, const AttentionMask& mask);
  Var rope(Var x, double base);     // positions 0..L-1
  Var rope(Var x, const std::vector<int>& positions, double base);
  Var detach(Var a);

  // Seeds d(loss)/d(loss) = 1 and propagates. loss must be a single scalar.
  void backward(Var loss);

  size_t num_nodes() const { return nodes_.size(); }

 private:
  friend class Var;

  struct Node {
    Tensor val;
    Tensor adj;  // allocated on first accumulation
    std::vector<int> parents;
    std::function<void(Graph&, int)> back;  // nullptr for leaves
    bool track = false;                     // gradient wanted somewhere below
    Param* param = nullptr;
  };

  int push(Tensor val, std::vector<int> parents,
           std::function<void(Graph&, int)> back);
  Tensor& adj(int id);  // allocate-on-demand adjoint; params alias Param::grad
  const Tensor& val(int id) const {
    const Node& n = nodes_[id];
    return n.param != nullptr ? n.param->value : n.val;
  }
  bool tracked(const std::vector<int>& parents) const;

  std::deque<Node> nodes_;
};

}  // namespace footlift::nn
