// Copyright 2026 The RGN Authors
//
// Licensed under the Apache License, Version 2.0 http://www.apache.org/licenses/LICENSE-2.0
//
// This code is provided *as is* basis, without warranties or conditions of any kind.

#include "rgn/tape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rgn/error.hpp"
#include "rgn/kernels.hpp"

namespace rgn {

namespace {

Matrix transpose_of(const Matrix& x) {
  Matrix out(x.cols, x.rows);
  for (int i = 0; i < x.rows; ++i) {
    for (int j = 0; j < x.cols; ++j) out.at(j, i) = x.at(i, j);
  }
  return out;
}

}  // namespace

Tape::NodeRef Tape::push(Matrix value, std::function<void(Tape&)> back) {
  Node n;
  n.grad = Matrix::zeros(value.rows, value.cols);
  n.value = std::move(value);
  n.back = std::move(back);
  nodes_.push_back(std::move(n));
  return NodeRef{static_cast<int>(nodes_.size()) - 1};
}

void Tape::check(NodeRef r) const {
  if (r.id < 0 || r.id >= static_cast<int>(nodes_.size())) {
    throw state_error("Tape: dangling node reference");
  }
}

const Matrix& Tape::value(NodeRef r) const {
  check(r);
  return nodes_[r.id].value;
}

const Matrix& Tape::grad(NodeRef r) const {
  check(r);
  return nodes_[r.id].grad;
}

Tape::NodeRef Tape::input(Matrix value) { return push(std::move(value)); }

Tape::NodeRef Tape::param(Parameter& p) {
  auto it = param_index_.find(&p);
  if (it != param_index_.end()) return NodeRef{it->second};
  NodeRef r = push(p.value);
  param_index_[&p] = r.id;
  param_leaves_.emplace_back(&p, r.id);
  return r;
}

Tape::NodeRef Tape::matmul(NodeRef a, NodeRef b) {
  check(a);
  check(b);
  const Matrix& av = val(a.id);
  const Matrix& bv = val(b.id);
  if (av.cols != bv.rows) {
    throw dim_error("matmul: inner dimensions differ, " + av.shape_str() +
                    " * " + bv.shape_str());
  }
  Matrix out(av.rows, bv.cols);
  kernels::gemm_nn(out.data.data(), av.data.data(), bv.data.data(), av.rows,
                   av.cols, bv.cols, false);
  int aid = a.id, bid = b.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [aid, bid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);     // m x n
    const Matrix& aval = t.val(aid);  // m x k
    const Matrix& bval = t.val(bid);  // k x n
    // dA += G * B^T,  dB += A^T * G
    kernels::gemm_nt(t.grd(aid).data.data(), g.data.data(), bval.data.data(),
                     g.rows, g.cols, aval.cols, true);
    kernels::gemm_tn(t.grd(bid).data.data(), aval.data.data(), g.data.data(),
                     aval.cols, aval.rows, g.cols, true);
  };
  return r;
}

Tape::NodeRef Tape::transpose(NodeRef x) {
  check(x);
  Matrix out = transpose_of(val(x.id));
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    Matrix gt = transpose_of(t.grd(oid));
    kernels::active().add(t.grd(xid).data.data(), t.grd(xid).data.data(),
                          gt.data.data(), gt.size());
  };
  return r;
}

Tape::NodeRef Tape::add(NodeRef a, NodeRef b) {
  check(a);
  check(b);
  const Matrix& av = val(a.id);
  const Matrix& bv = val(b.id);
  if (!av.same_shape(bv)) {
    throw dim_error("add: shape mismatch " + av.shape_str() + " vs " +
                    bv.shape_str());
  }
  Matrix out(av.rows, av.cols);
  kernels::active().add(out.data.data(), av.data.data(), bv.data.data(),
                        out.size());
  int aid = a.id, bid = b.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [aid, bid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    kernels::active().axpy(t.grd(aid).data.data(), 1.0f, g.data.data(),
                           g.size());
    kernels::active().axpy(t.grd(bid).data.data(), 1.0f, g.data.data(),
                           g.size());
  };
  return r;
}

Tape::NodeRef Tape::sub(NodeRef a, NodeRef b) {
  check(a);
  check(b);
  const Matrix& av = val(a.id);
  const Matrix& bv = val(b.id);
  if (!av.same_shape(bv)) {
    throw dim_error("sub: shape mismatch " + av.shape_str() + " vs " +
                    bv.shape_str());
  }
  Matrix out(av.rows, av.cols);
  kernels::active().sub(out.data.data(), av.data.data(), bv.data.data(),
                        out.size());
  int aid = a.id, bid = b.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [aid, bid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    kernels::active().axpy(t.grd(aid).data.data(), 1.0f, g.data.data(),
                           g.size());
    kernels::active().axpy(t.grd(bid).data.data(), -1.0f, g.data.data(),
                           g.size());
  };
  return r;
}

Tape::NodeRef Tape::add_row(NodeRef x, NodeRef row) {
  check(x);
  check(row);
  const Matrix& xv = val(x.id);
  const Matrix& rv = val(row.id);
  if (rv.rows != 1 || rv.cols != xv.cols) {
    throw dim_error("add_row: bias must be 1x" + std::to_string(xv.cols) +
                    ", got " + rv.shape_str());
  }
  Matrix out(xv.rows, xv.cols);
  for (int i = 0; i < xv.rows; ++i) {
    kernels::active().add(out.row_ptr(i), xv.row_ptr(i), rv.row_ptr(0),
                          static_cast<size_t>(xv.cols));
  }
  int xid = x.id, rid = row.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, rid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    kernels::active().axpy(t.grd(xid).data.data(), 1.0f, g.data.data(),
                           g.size());
    Matrix& gr = t.grd(rid);
    for (int i = 0; i < g.rows; ++i) {
      kernels::active().axpy(gr.row_ptr(0), 1.0f, g.row_ptr(i),
                             static_cast<size_t>(g.cols));
    }
  };
  return r;
}

Tape::NodeRef Tape::scale(NodeRef x, float c) {
  check(x);
  const Matrix& xv = val(x.id);
  Matrix out(xv.rows, xv.cols);
  kernels::active().scale(out.data.data(), xv.data.data(), c, out.size());
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid, c](Tape& t) {
    const Matrix& g = t.grd(oid);
    kernels::active().axpy(t.grd(xid).data.data(), c, g.data.data(), g.size());
  };
  return r;
}

Tape::NodeRef Tape::relu(NodeRef x) {
  check(x);
  const Matrix& xv = val(x.id);
  Matrix out(xv.rows, xv.cols);
  kernels::active().relu(out.data.data(), xv.data.data(), out.size());
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    kernels::active().relu_grad(t.grd(xid).data.data(),
                                t.val(xid).data.data(), g.data.data(),
                                g.size());
  };
  return r;
}

Tape::NodeRef Tape::abs(NodeRef x) {
  check(x);
  const Matrix& xv = val(x.id);
  Matrix out(xv.rows, xv.cols);
  for (size_t i = 0; i < xv.size(); ++i) out.data[i] = std::fabs(xv.data[i]);
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    const Matrix& xval = t.val(xid);
    Matrix& gx = t.grd(xid);
    for (size_t i = 0; i < g.size(); ++i) {
      if (xval.data[i] > 0.0f) {
        gx.data[i] += g.data[i];
      } else if (xval.data[i] < 0.0f) {
        gx.data[i] -= g.data[i];
      }
      // subgradient 0 at the kink
    }
  };
  return r;
}

Tape::NodeRef Tape::sum_all(NodeRef x) {
  check(x);
  const Matrix& xv = val(x.id);
  Matrix out(1, 1);
  out.data[0] = kernels::active().sum(xv.data.data(), xv.size());
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    float g = t.grd(oid).data[0];
    Matrix& gx = t.grd(xid);
    for (size_t i = 0; i < gx.size(); ++i) gx.data[i] += g;
  };
  return r;
}

Tape::NodeRef Tape::row_softmax(NodeRef x) {
  check(x);
  std::vector<uint8_t> mask(static_cast<size_t>(val(x.id).cols), 1);
  return row_softmax(x, mask);
}

Tape::NodeRef Tape::row_softmax(NodeRef x,
                                const std::vector<uint8_t>& col_mask) {
  check(x);
  const Matrix& xv = val(x.id);
  if (static_cast<int>(col_mask.size()) != xv.cols) {
    throw dim_error("row_softmax: mask length " +
                    std::to_string(col_mask.size()) + " vs cols " +
                    std::to_string(xv.cols));
  }
  int live = 0;
  for (uint8_t m : col_mask) live += m != 0;
  if (live == 0) {
    throw numeric_error("row_softmax: all positions masked (empty softmax)");
  }
  Matrix out(xv.rows, xv.cols);
  for (int i = 0; i < xv.rows; ++i) {
    const float* xr = xv.row_ptr(i);
    float* yr = out.row_ptr(i);
    float mx = -std::numeric_limits<float>::infinity();
    for (int j = 0; j < xv.cols; ++j) {
      if (col_mask[j] && xr[j] > mx) mx = xr[j];
    }
    float z = 0.0f;
    for (int j = 0; j < xv.cols; ++j) {
      if (col_mask[j]) {
        yr[j] = std::exp(xr[j] - mx);
        z += yr[j];
      } else {
        yr[j] = 0.0f;
      }
    }
    float inv = 1.0f / z;
    for (int j = 0; j < xv.cols; ++j) yr[j] *= inv;
  }
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    const Matrix& y = t.val(oid);
    Matrix& gx = t.grd(xid);
    for (int i = 0; i < y.rows; ++i) {
      const float* gr = g.row_ptr(i);
      const float* yr = y.row_ptr(i);
      float inner = kernels::active().dot(gr, yr, static_cast<size_t>(y.cols));
      float* gxr = gx.row_ptr(i);
      for (int j = 0; j < y.cols; ++j) gxr[j] += yr[j] * (gr[j] - inner);
    }
  };
  return r;
}

Tape::NodeRef Tape::scale_rows(NodeRef x, NodeRef s) {
  check(x);
  check(s);
  const Matrix& xv = val(x.id);
  const Matrix& sv = val(s.id);
  if (sv.cols != 1 || sv.rows != xv.rows) {
    throw dim_error("scale_rows: scale must be " + std::to_string(xv.rows) +
                    "x1, got " + sv.shape_str());
  }
  Matrix out(xv.rows, xv.cols);
  for (int i = 0; i < xv.rows; ++i) {
    kernels::active().scale(out.row_ptr(i), xv.row_ptr(i), sv.data[i],
                            static_cast<size_t>(xv.cols));
  }
  int xid = x.id, sid = s.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, sid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    const Matrix& xval = t.val(xid);
    const Matrix& sval = t.val(sid);
    Matrix& gx = t.grd(xid);
    Matrix& gs = t.grd(sid);
    for (int i = 0; i < g.rows; ++i) {
      kernels::active().axpy(gx.row_ptr(i), sval.data[i], g.row_ptr(i),
                             static_cast<size_t>(g.cols));
      gs.data[i] += kernels::active().dot(g.row_ptr(i), xval.row_ptr(i),
                                          static_cast<size_t>(g.cols));
    }
  };
  return r;
}

Tape::NodeRef Tape::mask_rows(NodeRef x, const std::vector<uint8_t>& keep) {
  check(x);
  const Matrix& xv = val(x.id);
  if (static_cast<int>(keep.size()) != xv.rows) {
    throw dim_error("mask_rows: mask length " + std::to_string(keep.size()) +
                    " vs rows " + std::to_string(xv.rows));
  }
  Matrix out(xv.rows, xv.cols);
  for (int i = 0; i < xv.rows; ++i) {
    if (keep[i]) {
      std::copy(xv.row_ptr(i), xv.row_ptr(i) + xv.cols, out.row_ptr(i));
    }
  }
  int xid = x.id;
  std::vector<uint8_t> keep_copy = keep;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid, keep_copy](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& gx = t.grd(xid);
    for (int i = 0; i < g.rows; ++i) {
      if (keep_copy[i]) {
        kernels::active().axpy(gx.row_ptr(i), 1.0f, g.row_ptr(i),
                               static_cast<size_t>(g.cols));
      }
    }
  };
  return r;
}

Tape::NodeRef Tape::gather_rows(NodeRef x, const std::vector<int>& indices) {
  check(x);
  const Matrix& xv = val(x.id);
  for (int idx : indices) {
    if (idx < -1 || idx >= xv.rows) {
      throw dim_error("gather_rows: index " + std::to_string(idx) +
                      " out of range for " + std::to_string(xv.rows) +
                      " rows");
    }
  }
  Matrix out(static_cast<int>(indices.size()), xv.cols);
  for (size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= 0) {
      std::copy(xv.row_ptr(indices[i]), xv.row_ptr(indices[i]) + xv.cols,
                out.row_ptr(static_cast<int>(i)));
    }
  }
  int xid = x.id;
  std::vector<int> idx_copy = indices;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid, idx_copy](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& gx = t.grd(xid);
    for (size_t i = 0; i < idx_copy.size(); ++i) {
      if (idx_copy[i] >= 0) {
        kernels::active().axpy(gx.row_ptr(idx_copy[i]), 1.0f,
                               g.row_ptr(static_cast<int>(i)),
                               static_cast<size_t>(g.cols));
      }
    }
  };
  return r;
}

Tape::NodeRef Tape::slice_rows(NodeRef x, int start, int count) {
  check(x);
  const Matrix& xv = val(x.id);
  if (start < 0 || count < 0 || start + count > xv.rows) {
    throw dim_error("slice_rows: [" + std::to_string(start) + ", " +
                    std::to_string(start + count) + ") out of " +
                    std::to_string(xv.rows) + " rows");
  }
  Matrix out(count, xv.cols);
  std::copy(xv.row_ptr(start), xv.row_ptr(start) + out.size(),
            out.data.data());
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid, start](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& gx = t.grd(xid);
    kernels::active().axpy(gx.row_ptr(start), 1.0f, g.data.data(), g.size());
  };
  return r;
}

Tape::NodeRef Tape::concat_rows(const std::vector<NodeRef>& parts) {
  if (parts.empty()) throw std::invalid_argument("concat_rows: empty list");
  int cols = -1, rows = 0;
  for (NodeRef p : parts) {
    check(p);
    const Matrix& v = val(p.id);
    if (cols < 0) {
      cols = v.cols;
    } else if (v.cols != cols) {
      throw dim_error("concat_rows: column mismatch " + std::to_string(cols) +
                      " vs " + v.shape_str());
    }
    rows += v.rows;
  }
  Matrix out(rows, cols);
  int at = 0;
  for (NodeRef p : parts) {
    const Matrix& v = val(p.id);
    std::copy(v.data.begin(), v.data.end(), out.row_ptr(at));
    at += v.rows;
  }
  std::vector<int> ids;
  ids.reserve(parts.size());
  for (NodeRef p : parts) ids.push_back(p.id);
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [ids, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    int at2 = 0;
    for (int pid : ids) {
      Matrix& gp = t.grd(pid);
      kernels::active().axpy(gp.data.data(), 1.0f, g.row_ptr(at2), gp.size());
      at2 += gp.rows;
    }
  };
  return r;
}

Tape::NodeRef Tape::concat_cols(NodeRef a, NodeRef b) {
  check(a);
  check(b);
  const Matrix& av = val(a.id);
  const Matrix& bv = val(b.id);
  if (av.rows != bv.rows) {
    throw dim_error("concat_cols: row mismatch " + av.shape_str() + " vs " +
                    bv.shape_str());
  }
  Matrix out(av.rows, av.cols + bv.cols);
  for (int i = 0; i < av.rows; ++i) {
    std::copy(av.row_ptr(i), av.row_ptr(i) + av.cols, out.row_ptr(i));
    std::copy(bv.row_ptr(i), bv.row_ptr(i) + bv.cols,
              out.row_ptr(i) + av.cols);
  }
  int aid = a.id, bid = b.id;
  int acols = av.cols, bcols = bv.cols;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [aid, bid, acols, bcols, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& ga = t.grd(aid);
    Matrix& gb = t.grd(bid);
    for (int i = 0; i < g.rows; ++i) {
      kernels::active().axpy(ga.row_ptr(i), 1.0f, g.row_ptr(i),
                             static_cast<size_t>(acols));
      kernels::active().axpy(gb.row_ptr(i), 1.0f, g.row_ptr(i) + acols,
                             static_cast<size_t>(bcols));
    }
  };
  return r;
}

Tape::NodeRef Tape::reshape(NodeRef x, int rows, int cols) {
  check(x);
  const Matrix& xv = val(x.id);
  if (static_cast<size_t>(rows) * cols != xv.size()) {
    throw dim_error("reshape: " + xv.shape_str() + " to " +
                    std::to_string(rows) + "x" + std::to_string(cols));
  }
  Matrix out(rows, cols);
  out.data = xv.data;
  int xid = x.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& gx = t.grd(xid);
    kernels::active().axpy(gx.data.data(), 1.0f, g.data.data(), g.size());
  };
  return r;
}

Tape::NodeRef Tape::pair_concat(
    NodeRef x, const std::vector<std::pair<int, int>>& pairs) {
  check(x);
  const Matrix& xv = val(x.id);
  for (const auto& [i, j] : pairs) {
    if (i < 0 || i >= xv.rows || j < 0 || j >= xv.rows) {
      throw dim_error("pair_concat: pair (" + std::to_string(i) + "," +
                      std::to_string(j) + ") out of range");
    }
  }
  Matrix out(static_cast<int>(pairs.size()), 2 * xv.cols);
  for (size_t p = 0; p < pairs.size(); ++p) {
    float* dst = out.row_ptr(static_cast<int>(p));
    std::copy(xv.row_ptr(pairs[p].first), xv.row_ptr(pairs[p].first) + xv.cols,
              dst);
    std::copy(xv.row_ptr(pairs[p].second),
              xv.row_ptr(pairs[p].second) + xv.cols, dst + xv.cols);
  }
  int xid = x.id, cols = xv.cols;
  std::vector<std::pair<int, int>> pc = pairs;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [xid, oid, cols, pc](Tape& t) {
    const Matrix& g = t.grd(oid);
    Matrix& gx = t.grd(xid);
    for (size_t p = 0; p < pc.size(); ++p) {
      const float* gr = g.row_ptr(static_cast<int>(p));
      kernels::active().axpy(gx.row_ptr(pc[p].first), 1.0f, gr,
                             static_cast<size_t>(cols));
      kernels::active().axpy(gx.row_ptr(pc[p].second), 1.0f, gr + cols,
                             static_cast<size_t>(cols));
    }
  };
  return r;
}

Tape::NodeRef Tape::cross_entropy(NodeRef logits, int gold) {
  check(logits);
  const Matrix& lv = val(logits.id);
  if (lv.rows != 1) {
    throw dim_error("cross_entropy: logits must be a row vector, got " +
                    lv.shape_str());
  }
  if (gold < 0 || gold >= lv.cols) {
    throw std::invalid_argument("cross_entropy: gold label " +
                                std::to_string(gold) + " out of range [0, " +
                                std::to_string(lv.cols) + ")");
  }
  float mx = kernels::active().max(lv.data.data(), lv.size());
  std::vector<float> probs(lv.size());
  float z = 0.0f;
  for (size_t j = 0; j < lv.size(); ++j) {
    probs[j] = std::exp(lv.data[j] - mx);
    z += probs[j];
  }
  for (auto& p : probs) p /= z;
  // -log p[gold] via the stabilized form to avoid log(0)
  float loss =
      -(lv.data[gold] - mx - std::log(z));
  Matrix out(1, 1);
  out.data[0] = loss < 0.0f ? 0.0f : loss;
  int lid = logits.id;
  NodeRef r = push(std::move(out));
  int oid = r.id;
  nodes_[oid].back = [lid, oid, gold, probs](Tape& t) {
    float g = t.grd(oid).data[0];
    Matrix& gl = t.grd(lid);
    for (size_t j = 0; j < probs.size(); ++j) {
      float delta = (static_cast<int>(j) == gold) ? 1.0f : 0.0f;
      gl.data[j] += g * (probs[j] - delta);
    }
  };
  return r;
}

void Tape::backward(NodeRef loss) {
  check(loss);
  if (backward_done_) {
    throw state_error(
        "Tape: backward already ran on this trace; build a new tape");
  }
  const Matrix& lv = val(loss.id);
  if (lv.rows != 1 || lv.cols != 1) {
    throw dim_error("backward: loss must be 1x1, got " + lv.shape_str());
  }
  backward_done_ = true;
  grd(loss.id).data[0] = 1.0f;
  for (int id = loss.id; id >= 0; --id) {
    if (nodes_[id].back) nodes_[id].back(*this);
  }
  for (auto& [p, id] : param_leaves_) {
    kernels::active().axpy(p->grad.data.data(), 1.0f, grd(id).data.data(),
                           grd(id).size());
  }
}

Tape::NodeRef mlp_forward(Tape& t, Tape::NodeRef x,
                          const std::vector<MlpLayer>& layers) {
  if (layers.empty()) throw std::invalid_argument("mlp_forward: no layers");
  Tape::NodeRef h = x;
  for (size_t l = 0; l < layers.size(); ++l) {
    const Matrix& hv = t.value(h);
    const Matrix& wv = layers[l].w->value;
    if (hv.cols != wv.rows) {
      throw dim_error("mlp_forward: layer " + std::to_string(l) +
                      " expects input width " + std::to_string(wv.rows) +
                      ", got " + hv.shape_str());
    }
    h = t.matmul(h, t.param(*layers[l].w));
    if (layers[l].b != nullptr) {
      h = t.add_row(h, t.param(*layers[l].b));
    }
    if (l + 1 < layers.size()) h = t.relu(h);
  }
  return h;
}

}  // namespace rgn
