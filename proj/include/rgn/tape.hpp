// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#ifndef RGN_TAPE_HPP_
#define RGN_TAPE_HPP_

#include <functional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rgn/matrix.hpp"
#include "rgn/params.hpp"

namespace rgn {

// Reverse-mode trace over float32 matrices. One tape per forward pass;
// creation order is the topological order, so backward() is a single reverse
// sweep. Single-threaded by construction.
class Tape {
 public:
  struct NodeRef {
    int id = -1;
    bool valid() const { return id >= 0; }
  };

  // Leaves.
  NodeRef input(Matrix value);
  // Trainable leaf. Repeated calls with the same Parameter reuse one node so
  // gradients accumulate exactly once per occurrence in the trace.
  NodeRef param(Parameter& p);

  // Primitives. All shape violations throw dim_error naming both shapes.
  NodeRef matmul(NodeRef a, NodeRef b);
  NodeRef transpose(NodeRef x);
  NodeRef add(NodeRef a, NodeRef b);
  NodeRef sub(NodeRef a, NodeRef b);
  NodeRef add_row(NodeRef x, NodeRef row);  // broadcast 1xC over rows
  NodeRef scale(NodeRef x, float c);
  NodeRef relu(NodeRef x);
  NodeRef abs(NodeRef x);
  NodeRef sum_all(NodeRef x);  // 1x1

  // Masked softmax along each row; col_mask marks live columns (shared by all
  // rows). Masked positions are exactly zero in the output. Throws
  // numeric_error when every position is masked.
  NodeRef row_softmax(NodeRef x);
  NodeRef row_softmax(NodeRef x, const std::vector<uint8_t>& col_mask);

  // out[i,:] = s[i] * x[i,:], s is rows(x) x 1. Gradients reach both inputs.
  NodeRef scale_rows(NodeRef x, NodeRef s);

  // Zero rows where keep[i] == 0. keep is a constant, not a traced value.
  NodeRef mask_rows(NodeRef x, const std::vector<uint8_t>& keep);

  // Straight-through row selection: indices are constants under
  // differentiation; index -1 produces a zero row that carries no gradient.
  NodeRef gather_rows(NodeRef x, const std::vector<int>& indices);

  NodeRef slice_rows(NodeRef x, int start, int count);
  NodeRef concat_rows(const std::vector<NodeRef>& parts);
  NodeRef concat_cols(NodeRef a, NodeRef b);
  NodeRef reshape(NodeRef x, int rows, int cols);

  // out row p = [x[i_p,:] | x[j_p,:]] for each (i_p, j_p).
  NodeRef pair_concat(NodeRef x,
                      const std::vector<std::pair<int, int>>& pairs);

  // -log softmax(logits)[gold]; logits must be 1xC. Throws
  // std::invalid_argument when gold is out of range.
  NodeRef cross_entropy(NodeRef logits, int gold);

  const Matrix& value(NodeRef r) const;
  const Matrix& grad(NodeRef r) const;

  // Seeds d(loss)/d(loss) = 1, sweeps the trace once, then adds each
  // parameter leaf's gradient into Parameter::grad. A second call without a
  // fresh tape throws state_error.
  void backward(NodeRef loss);

  int node_count() const { return static_cast<int>(nodes_.size()); }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    std::function<void(Tape&)> back;  // empty for leaves
  };

  NodeRef push(Matrix value, std::function<void(Tape&)> back = nullptr);
  Matrix& val(int id) { return nodes_[id].value; }
  Matrix& grd(int id) { return nodes_[id].grad; }
  void check(NodeRef r) const;

  std::vector<Node> nodes_;
  std::vector<std::pair<Parameter*, int>> param_leaves_;
  std::unordered_map<const Parameter*, int> param_index_;
  bool backward_done_ = false;
};

// Affine-ReLU chain: activation between layers, none after the last.
// Dimension mismatches name the failing layer.
struct MlpLayer {
  Parameter* w = nullptr;
  Parameter* b = nullptr;
};
Tape::NodeRef mlp_forward(Tape& t, Tape::NodeRef x,
                          const std::vector<MlpLayer>& layers);

}  // namespace rgn

#endif  // RGN_TAPE_HPP_
