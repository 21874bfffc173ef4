// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#ifndef NHTD_AUTOGRAD_HPP
#define NHTD_AUTOGRAD_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace nhtd {
namespace ad {

// Dense row-major matrix of doubles. Vectors are 1xN or Nx1.
struct Mat {
  int rows = 0, cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0.0) {}

  double& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
  size_t size() const { return a.size(); }
  bool same_shape(const Mat& o) const { return rows == o.rows && cols == o.cols; }
  bool finite() const;
};

using VarId = int;

// Tape-based reverse-mode differentiation over matrix-valued nodes. The
// op set is tailored to message passing on edge lists: row gathers,
// per-destination segment softmax/sum, column broadcasts. A tape is built
// per forward pass and discarded after backward().
class Tape {
 public:
  // leaves
  VarId input(Mat value, bool requires_grad);

  // linear algebra
  VarId matmul(VarId a, VarId b, bool trans_a = false, bool trans_b = false);
  VarId add(VarId a, VarId b);
  VarId add_rowvec(VarId a, VarId row);            // (n x c) + (1 x c)
  VarId slice_cols(VarId a, int first, int count);
  VarId reshape(VarId a, int rows, int cols);

  // graph plumbing
  VarId gather_rows(VarId a, std::vector<int> index);
  VarId concat_cols(VarId a, VarId b);
  VarId concat_rows(VarId a, VarId b);
  VarId segment_sum(VarId a, std::vector<int> segment, int num_segments);
  // softmax over entries sharing a segment id; input is (n x 1)
  VarId segment_softmax(VarId a, std::vector<int> segment, int num_segments);
  VarId mul_colbroadcast(VarId scale, VarId a);    // (n x 1) * (n x c)

  // nonlinearities
  VarId relu(VarId a);
  VarId elu(VarId a);
  VarId leaky_relu(VarId a, double slope);
  VarId row_softmax(VarId a);

  // (offset + s) * A where s is a 1x1 variable
  VarId scale_by_scalar(VarId a, VarId s, double offset);

  // mean over rows of -sum_c target*log(clamp(p)); result is 1x1
  VarId bce_mean(VarId probs, Mat targets);

  const Mat& value(VarId v) const { return nodes_[v].val; }
  const Mat& grad(VarId v) const { return nodes_[v].grad; }

  // Reverse pass from a 1x1 loss node. Gradients accumulate on every
  // requires_grad leaf reachable from it.
  void backward(VarId loss);

  size_t size() const { return nodes_.size(); }

 private:
  enum class Op {
    Leaf,
    MatMul,
    Add,
    AddRowVec,
    SliceCols,
    Reshape,
    GatherRows,
    ConcatCols,
    ConcatRows,
    SegmentSum,
    SegmentSoftmax,
    MulColBroadcast,
    Relu,
    Elu,
    LeakyRelu,
    RowSoftmax,
    ScaleByScalar,
    BceMean,
  };

  struct Node {
    Op op = Op::Leaf;
    Mat val;
    Mat grad;
    std::array<VarId, 2> args{-1, -1};
    std::vector<int> index;  // gather indices or segment ids
    int i0 = 0, i1 = 0;      // slice/segment/reshape parameters
    double scalar = 0.0;     // slope or offset
    bool ta = false, tb = false;
    Mat aux;                 // bce targets
    bool needs_grad = false;
  };

  VarId push(Node n);
  void backprop(Node& n);

  std::vector<Node> nodes_;
};

// Parameter initialization: N(0, 1/sqrt(fan_in)) entries from a seeded
// generator; biases are zeroed by the callers instead.
Mat gaussian_init(int rows, int cols, int fan_in, std::uint64_t seed);

}  // namespace ad
}  // namespace nhtd

#endif  // NHTD_AUTOGRAD_HPP
