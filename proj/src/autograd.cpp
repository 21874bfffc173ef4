// Copyright nhtd contributors.
// Licensed under the Apache License, Version 2.0, see LICENSE for details.
// SPDX-License-Identifier: Apache-2.0

#include "nhtd/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nhtd/errors.hpp"

namespace nhtd {
namespace ad {

namespace {
constexpr double kProbClamp = 1e-12;
}

bool Mat::finite() const {
  for (double x : a)
    if (!std::isfinite(x)) return false;
  return true;
}

VarId Tape::push(Node n) {
  if (n.op != Op::Leaf) {
    for (VarId arg : n.args)
      if (arg >= 0 && nodes_[arg].needs_grad) n.needs_grad = true;
  }
  nodes_.push_back(std::move(n));
  return static_cast<VarId>(nodes_.size() - 1);
}

VarId Tape::input(Mat value, bool requires_grad) {
  Node n;
  n.op = Op::Leaf;
  n.val = std::move(value);
  n.needs_grad = requires_grad;
  return push(std::move(n));
}

VarId Tape::matmul(VarId a, VarId b, bool trans_a, bool trans_b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  int ar = trans_a ? A.cols : A.rows, ac = trans_a ? A.rows : A.cols;
  int br = trans_b ? B.cols : B.rows, bc = trans_b ? B.rows : B.cols;
  if (ac != br) fail(Errc::shape_mismatch, "matmul inner dims");
  Node n;
  n.op = Op::MatMul;
  n.args = {a, b};
  n.ta = trans_a;
  n.tb = trans_b;
  n.val = Mat(ar, bc);
  for (int i = 0; i < ar; ++i)
    for (int k = 0; k < ac; ++k) {
      double av = trans_a ? A.at(k, i) : A.at(i, k);
      if (av == 0.0) continue;
      for (int j = 0; j < bc; ++j)
        n.val.at(i, j) += av * (trans_b ? B.at(j, k) : B.at(k, j));
    }
  return push(std::move(n));
}

VarId Tape::add(VarId a, VarId b) {
  if (!nodes_[a].val.same_shape(nodes_[b].val)) fail(Errc::shape_mismatch, "add shapes");
  Node n;
  n.op = Op::Add;
  n.args = {a, b};
  n.val = nodes_[a].val;
  for (size_t i = 0; i < n.val.size(); ++i) n.val.a[i] += nodes_[b].val.a[i];
  return push(std::move(n));
}

VarId Tape::add_rowvec(VarId a, VarId row) {
  const Mat& A = nodes_[a].val;
  const Mat& R = nodes_[row].val;
  if (R.rows != 1 || R.cols != A.cols) fail(Errc::shape_mismatch, "add_rowvec");
  Node n;
  n.op = Op::AddRowVec;
  n.args = {a, row};
  n.val = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) n.val.at(i, j) += R.at(0, j);
  return push(std::move(n));
}

VarId Tape::slice_cols(VarId a, int first, int count) {
  const Mat& A = nodes_[a].val;
  if (first < 0 || first + count > A.cols) fail(Errc::shape_mismatch, "slice_cols range");
  Node n;
  n.op = Op::SliceCols;
  n.args = {a, -1};
  n.i0 = first;
  n.i1 = count;
  n.val = Mat(A.rows, count);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < count; ++j) n.val.at(i, j) = A.at(i, first + j);
  return push(std::move(n));
}

VarId Tape::reshape(VarId a, int rows, int cols) {
  const Mat& A = nodes_[a].val;
  if (static_cast<size_t>(rows) * cols != A.size()) fail(Errc::shape_mismatch, "reshape");
  Node n;
  n.op = Op::Reshape;
  n.args = {a, -1};
  n.val = A;
  n.val.rows = rows;
  n.val.cols = cols;
  return push(std::move(n));
}

VarId Tape::gather_rows(VarId a, std::vector<int> index) {
  const Mat& A = nodes_[a].val;
  Node n;
  n.op = Op::GatherRows;
  n.args = {a, -1};
  n.val = Mat(static_cast<int>(index.size()), A.cols);
  for (size_t i = 0; i < index.size(); ++i) {
    if (index[i] < 0 || index[i] >= A.rows) fail(Errc::index_out_of_range, "gather_rows");
    for (int j = 0; j < A.cols; ++j) n.val.at(static_cast<int>(i), j) = A.at(index[i], j);
  }
  n.index = std::move(index);
  return push(std::move(n));
}

VarId Tape::concat_cols(VarId a, VarId b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  if (A.rows != B.rows) fail(Errc::shape_mismatch, "concat_cols rows");
  Node n;
  n.op = Op::ConcatCols;
  n.args = {a, b};
  n.i0 = A.cols;
  n.val = Mat(A.rows, A.cols + B.cols);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) n.val.at(i, j) = A.at(i, j);
    for (int j = 0; j < B.cols; ++j) n.val.at(i, A.cols + j) = B.at(i, j);
  }
  return push(std::move(n));
}

VarId Tape::concat_rows(VarId a, VarId b) {
  const Mat& A = nodes_[a].val;
  const Mat& B = nodes_[b].val;
  if (A.cols != B.cols) fail(Errc::shape_mismatch, "concat_rows cols");
  Node n;
  n.op = Op::ConcatRows;
  n.args = {a, b};
  n.i0 = A.rows;
  n.val = Mat(A.rows + B.rows, A.cols);
  std::copy(A.a.begin(), A.a.end(), n.val.a.begin());
  std::copy(B.a.begin(), B.a.end(), n.val.a.begin() + A.size());
  return push(std::move(n));
}

VarId Tape::segment_sum(VarId a, std::vector<int> segment, int num_segments) {
  const Mat& A = nodes_[a].val;
  if (static_cast<int>(segment.size()) != A.rows) fail(Errc::shape_mismatch, "segment_sum ids");
  Node n;
  n.op = Op::SegmentSum;
  n.args = {a, -1};
  n.i0 = num_segments;
  n.val = Mat(num_segments, A.cols);
  for (int i = 0; i < A.rows; ++i) {
    int s = segment[i];
    if (s < 0 || s >= num_segments) fail(Errc::index_out_of_range, "segment id");
    for (int j = 0; j < A.cols; ++j) n.val.at(s, j) += A.at(i, j);
  }
  n.index = std::move(segment);
  return push(std::move(n));
}

VarId Tape::segment_softmax(VarId a, std::vector<int> segment, int num_segments) {
  const Mat& A = nodes_[a].val;
  if (A.cols != 1 || static_cast<int>(segment.size()) != A.rows)
    fail(Errc::shape_mismatch, "segment_softmax expects an (n x 1) input");
  Node n;
  n.op = Op::SegmentSoftmax;
  n.args = {a, -1};
  n.i0 = num_segments;
  n.val = Mat(A.rows, 1);
  std::vector<double> mx(num_segments, -std::numeric_limits<double>::infinity());
  for (int i = 0; i < A.rows; ++i) mx[segment[i]] = std::max(mx[segment[i]], A.at(i, 0));
  std::vector<double> denom(num_segments, 0.0);
  for (int i = 0; i < A.rows; ++i) {
    double e = std::exp(A.at(i, 0) - mx[segment[i]]);
    n.val.at(i, 0) = e;
    denom[segment[i]] += e;
  }
  for (int i = 0; i < A.rows; ++i) n.val.at(i, 0) /= denom[segment[i]];
  n.index = std::move(segment);
  return push(std::move(n));
}

VarId Tape::mul_colbroadcast(VarId scale, VarId a) {
  const Mat& S = nodes_[scale].val;
  const Mat& A = nodes_[a].val;
  if (S.cols != 1 || S.rows != A.rows) fail(Errc::shape_mismatch, "mul_colbroadcast");
  Node n;
  n.op = Op::MulColBroadcast;
  n.args = {scale, a};
  n.val = A;
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) n.val.at(i, j) *= S.at(i, 0);
  return push(std::move(n));
}

VarId Tape::relu(VarId a) {
  Node n;
  n.op = Op::Relu;
  n.args = {a, -1};
  n.val = nodes_[a].val;
  for (double& x : n.val.a) x = x > 0.0 ? x : 0.0;
  return push(std::move(n));
}

VarId Tape::elu(VarId a) {
  Node n;
  n.op = Op::Elu;
  n.args = {a, -1};
  n.val = nodes_[a].val;
  for (double& x : n.val.a) x = x > 0.0 ? x : std::expm1(x);
  return push(std::move(n));
}

VarId Tape::leaky_relu(VarId a, double slope) {
  Node n;
  n.op = Op::LeakyRelu;
  n.args = {a, -1};
  n.scalar = slope;
  n.val = nodes_[a].val;
  for (double& x : n.val.a) x = x > 0.0 ? x : slope * x;
  return push(std::move(n));
}

VarId Tape::row_softmax(VarId a) {
  const Mat& A = nodes_[a].val;
  Node n;
  n.op = Op::RowSoftmax;
  n.args = {a, -1};
  n.val = Mat(A.rows, A.cols);
  for (int i = 0; i < A.rows; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < A.cols; ++j) mx = std::max(mx, A.at(i, j));
    double denom = 0.0;
    for (int j = 0; j < A.cols; ++j) {
      double e = std::exp(A.at(i, j) - mx);
      n.val.at(i, j) = e;
      denom += e;
    }
    for (int j = 0; j < A.cols; ++j) n.val.at(i, j) /= denom;
  }
  return push(std::move(n));
}

VarId Tape::scale_by_scalar(VarId a, VarId s, double offset) {
  const Mat& S = nodes_[s].val;
  if (S.rows != 1 || S.cols != 1) fail(Errc::shape_mismatch, "scale_by_scalar expects 1x1");
  Node n;
  n.op = Op::ScaleByScalar;
  n.args = {a, s};
  n.scalar = offset;
  n.val = nodes_[a].val;
  double f = offset + S.at(0, 0);
  for (double& x : n.val.a) x *= f;
  return push(std::move(n));
}

VarId Tape::bce_mean(VarId probs, Mat targets) {
  const Mat& P = nodes_[probs].val;
  if (!P.same_shape(targets)) fail(Errc::shape_mismatch, "bce_mean targets");
  Node n;
  n.op = Op::BceMean;
  n.args = {probs, -1};
  n.aux = std::move(targets);
  n.val = Mat(1, 1);
  double sum = 0.0;
  for (int i = 0; i < P.rows; ++i)
    for (int j = 0; j < P.cols; ++j) {
      double t = n.aux.at(i, j);
      if (t == 0.0) continue;
      double p = std::clamp(P.at(i, j), kProbClamp, 1.0 - kProbClamp);
      sum -= t * std::log(p);
    }
  n.val.at(0, 0) = P.rows > 0 ? sum / P.rows : 0.0;
  return push(std::move(n));
}

void Tape::backward(VarId loss) {
  Node& top = nodes_[loss];
  if (top.val.rows != 1 || top.val.cols != 1)
    fail(Errc::shape_mismatch, "backward() needs a scalar loss");
  for (Node& n : nodes_) {
    n.grad = Mat(n.val.rows, n.val.cols);
  }
  top.grad.at(0, 0) = 1.0;
  for (VarId v = loss; v >= 0; --v) {
    Node& n = nodes_[v];
    if (!n.needs_grad || n.op == Op::Leaf) continue;
    backprop(n);
  }
}

void Tape::backprop(Node& n) {
  const Mat& g = n.grad;
  auto acc = [&](VarId arg) -> Mat& { return nodes_[arg].grad; };
  switch (n.op) {
    case Op::Leaf:
      break;
    case Op::MatMul: {
      const Mat& A = nodes_[n.args[0]].val;
      const Mat& B = nodes_[n.args[1]].val;
      Mat& dA = acc(n.args[0]);
      Mat& dB = acc(n.args[1]);
      int ar = g.rows, bc = g.cols, ac = n.ta ? A.rows : A.cols;
      for (int i = 0; i < ar; ++i)
        for (int j = 0; j < bc; ++j) {
          double gv = g.at(i, j);
          if (gv == 0.0) continue;
          for (int k = 0; k < ac; ++k) {
            double bv = n.tb ? B.at(j, k) : B.at(k, j);
            double av = n.ta ? A.at(k, i) : A.at(i, k);
            if (n.ta)
              dA.at(k, i) += gv * bv;
            else
              dA.at(i, k) += gv * bv;
            if (n.tb)
              dB.at(j, k) += gv * av;
            else
              dB.at(k, j) += gv * av;
          }
        }
      break;
    }
    case Op::Add: {
      for (size_t i = 0; i < g.a.size(); ++i) {
        acc(n.args[0]).a[i] += g.a[i];
        acc(n.args[1]).a[i] += g.a[i];
      }
      break;
    }
    case Op::AddRowVec: {
      Mat& dA = acc(n.args[0]);
      Mat& dR = acc(n.args[1]);
      for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) {
          dA.at(i, j) += g.at(i, j);
          dR.at(0, j) += g.at(i, j);
        }
      break;
    }
    case Op::SliceCols: {
      Mat& dA = acc(n.args[0]);
      for (int i = 0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) dA.at(i, n.i0 + j) += g.at(i, j);
      break;
    }
    case Op::Reshape: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < g.a.size(); ++i) dA.a[i] += g.a[i];
      break;
    }
    case Op::GatherRows: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < n.index.size(); ++i)
        for (int j = 0; j < g.cols; ++j)
          dA.at(n.index[i], j) += g.at(static_cast<int>(i), j);
      break;
    }
    case Op::ConcatCols: {
      Mat& dA = acc(n.args[0]);
      Mat& dB = acc(n.args[1]);
      for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < n.i0; ++j) dA.at(i, j) += g.at(i, j);
        for (int j = n.i0; j < g.cols; ++j) dB.at(i, j - n.i0) += g.at(i, j);
      }
      break;
    }
    case Op::ConcatRows: {
      Mat& dA = acc(n.args[0]);
      Mat& dB = acc(n.args[1]);
      for (int i = 0; i < n.i0; ++i)
        for (int j = 0; j < g.cols; ++j) dA.at(i, j) += g.at(i, j);
      for (int i = n.i0; i < g.rows; ++i)
        for (int j = 0; j < g.cols; ++j) dB.at(i - n.i0, j) += g.at(i, j);
      break;
    }
    case Op::SegmentSum: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < n.index.size(); ++i)
        for (int j = 0; j < g.cols; ++j)
          dA.at(static_cast<int>(i), j) += g.at(n.index[i], j);
      break;
    }
    case Op::SegmentSoftmax: {
      Mat& dA = acc(n.args[0]);
      std::vector<double> dot(n.i0, 0.0);
      for (size_t i = 0; i < n.index.size(); ++i)
        dot[n.index[i]] += g.at(static_cast<int>(i), 0) * n.val.at(static_cast<int>(i), 0);
      for (size_t i = 0; i < n.index.size(); ++i) {
        double p = n.val.at(static_cast<int>(i), 0);
        dA.at(static_cast<int>(i), 0) += p * (g.at(static_cast<int>(i), 0) - dot[n.index[i]]);
      }
      break;
    }
    case Op::MulColBroadcast: {
      const Mat& S = nodes_[n.args[0]].val;
      const Mat& A = nodes_[n.args[1]].val;
      Mat& dS = acc(n.args[0]);
      Mat& dA = acc(n.args[1]);
      for (int i = 0; i < A.rows; ++i) {
        double srow = 0.0;
        for (int j = 0; j < A.cols; ++j) {
          srow += g.at(i, j) * A.at(i, j);
          dA.at(i, j) += g.at(i, j) * S.at(i, 0);
        }
        dS.at(i, 0) += srow;
      }
      break;
    }
    case Op::Relu: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < g.a.size(); ++i)
        if (n.val.a[i] > 0.0) dA.a[i] += g.a[i];
      break;
    }
    case Op::Elu: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < g.a.size(); ++i)
        dA.a[i] += g.a[i] * (n.val.a[i] > 0.0 ? 1.0 : n.val.a[i] + 1.0);
      break;
    }
    case Op::LeakyRelu: {
      Mat& dA = acc(n.args[0]);
      for (size_t i = 0; i < g.a.size(); ++i)
        dA.a[i] += g.a[i] * (n.val.a[i] > 0.0 ? 1.0 : n.scalar);
      break;
    }
    case Op::RowSoftmax: {
      Mat& dA = acc(n.args[0]);
      for (int i = 0; i < g.rows; ++i) {
        double dot = 0.0;
        for (int j = 0; j < g.cols; ++j) dot += g.at(i, j) * n.val.at(i, j);
        for (int j = 0; j < g.cols; ++j)
          dA.at(i, j) += n.val.at(i, j) * (g.at(i, j) - dot);
      }
      break;
    }
    case Op::ScaleByScalar: {
      const Mat& A = nodes_[n.args[0]].val;
      const Mat& S = nodes_[n.args[1]].val;
      Mat& dA = acc(n.args[0]);
      Mat& dS = acc(n.args[1]);
      double f = n.scalar + S.at(0, 0);
      double ds = 0.0;
      for (size_t i = 0; i < g.a.size(); ++i) {
        dA.a[i] += g.a[i] * f;
        ds += g.a[i] * A.a[i];
      }
      dS.at(0, 0) += ds;
      break;
    }
    case Op::BceMean: {
      const Mat& P = nodes_[n.args[0]].val;
      Mat& dP = acc(n.args[0]);
      double gv = g.at(0, 0);
      if (P.rows == 0) break;
      double inv_n = 1.0 / P.rows;
      for (int i = 0; i < P.rows; ++i)
        for (int j = 0; j < P.cols; ++j) {
          double t = n.aux.at(i, j);
          if (t == 0.0) continue;
          double p = P.at(i, j);
          if (p <= kProbClamp || p >= 1.0 - kProbClamp) continue;  // clamp plateau
          dP.at(i, j) += gv * inv_n * (-t / p);
        }
      break;
    }
  }
}

Mat gaussian_init(int rows, int cols, int fan_in, std::uint64_t seed) {
  Mat m(rows, cols);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> dist(0.0, fan_in > 0 ? 1.0 / std::sqrt(fan_in) : 1.0);
  for (double& x : m.a) x = dist(rng);
  return m;
}

}  // namespace ad
}  // namespace nhtd
