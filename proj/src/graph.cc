// Copyright 2026 The Semcodec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "semcodec/graph.h"

#include <algorithm>
#include <cmath>

namespace semcodec {

Var Graph::Push(Tensor value, std::vector<int> inputs,
                std::function<void(Graph&, int)> backward) {
  Node node;
  node.value = std::move(value);
  node.inputs = std::move(inputs);
  for (int in : node.inputs) node.needs_grad = node.needs_grad || nodes_[in].needs_grad;
  if (node.needs_grad) node.backward = std::move(backward);
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

Tensor& Graph::GradSlot(int id) {
  Node& n = nodes_[id];
  if (n.grad.size() != n.value.size()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

Var Graph::Constant(Tensor value) { return Push(std::move(value), {}, nullptr); }

Var Graph::Param(ParamBlock& block, const std::string& name) {
  const size_t idx = block.IndexOf(name);
  Node node;
  node.value = block.entries()[idx].value;
  node.block = &block;
  node.param_index = idx;
  node.needs_grad = true;
  nodes_.push_back(std::move(node));
  return Var{static_cast<int>(nodes_.size()) - 1};
}

double Graph::scalar(Var v) const {
  const Tensor& t = value(v);
  if (t.size() != 1) {
    throw std::invalid_argument("scalar() on tensor of shape " + ShapeString(t.shape()));
  }
  return t[0];
}

const Tensor& Graph::grad(Var v) const {
  const Node& n = nodes_.at(v.id);
  if (n.grad.size() != n.value.size()) {
    static const Tensor kEmpty;
    return kEmpty;
  }
  return n.grad;
}

Var Graph::Elementwise(ElementwiseKind kind, Var a, Var b) {
  if (!IsBinary(kind)) throw std::invalid_argument("unary kind passed to binary op");
  const Tensor& av = value(a);
  const Tensor& bv = value(b);
  Tensor out = semcodec::Elementwise(kind, av, &bv);
  return Push(std::move(out), {a.id, b.id}, [kind](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const int ib = g.nodes_[self].inputs[1];
    const Tensor& go = g.OutGrad(self);
    const size_t n = go.size();
    if (g.NeedsGrad(ia)) {
      Tensor& ga = g.GradSlot(ia);
      const Tensor& bv = g.nodes_[ib].value;
      for (size_t i = 0; i < n; ++i)
        ga[i] += kind == ElementwiseKind::kMul ? go[i] * bv[i] : go[i];
    }
    if (g.NeedsGrad(ib)) {
      Tensor& gb = g.GradSlot(ib);
      const Tensor& av = g.nodes_[ia].value;
      for (size_t i = 0; i < n; ++i) {
        switch (kind) {
          case ElementwiseKind::kAdd:
            gb[i] += go[i];
            break;
          case ElementwiseKind::kSub:
            gb[i] -= go[i];
            break;
          default:
            gb[i] += go[i] * av[i];
            break;
        }
      }
    }
  });
}

Var Graph::Elementwise(ElementwiseKind kind, Var a, double slope) {
  if (IsBinary(kind)) throw std::invalid_argument("binary kind passed to unary op");
  if (!IsDifferentiable(kind)) {
    throw UnsupportedOpError("elementwise kind has no gradient; not allowed in a graph");
  }
  Tensor out = semcodec::Elementwise(kind, value(a), nullptr, slope);
  return Push(std::move(out), {a.id}, [kind, slope](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    const Tensor& x = g.nodes_[ia].value;
    const Tensor& y = g.nodes_[self].value;
    Tensor& ga = g.GradSlot(ia);
    for (size_t i = 0; i < go.size(); ++i) {
      double d;
      switch (kind) {
        case ElementwiseKind::kLeakyRelu:
          d = x[i] >= 0 ? 1.0 : slope;
          break;
        case ElementwiseKind::kRelu:
          d = x[i] > 0 ? 1.0 : 0.0;
          break;
        case ElementwiseKind::kExp:
          d = y[i];
          break;
        case ElementwiseKind::kLog:
          d = 1.0 / x[i];
          break;
        case ElementwiseKind::kAbs:
          d = x[i] > 0 ? 1.0 : (x[i] < 0 ? -1.0 : 0.0);
          break;
        case ElementwiseKind::kSquare:
          d = 2.0 * x[i];
          break;
        case ElementwiseKind::kSqrt:
          d = 0.5 / y[i];
          break;
        case ElementwiseKind::kSigmoid:
          d = y[i] * (1.0 - y[i]);
          break;
        case ElementwiseKind::kTanh:
          d = 1.0 - y[i] * y[i];
          break;
        default:
          d = 0.0;
          break;
      }
      ga[i] += go[i] * d;
    }
  });
}

Var Graph::Scale(Var a, double s) {
  return Push(semcodec::Scale(value(a), s), {a.id}, [s](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& ga = g.GradSlot(ia);
    for (size_t i = 0; i < go.size(); ++i) ga[i] += s * go[i];
  });
}

Var Graph::AddScalar(Var a, double s) {
  Tensor out = value(a);
  for (double& v : out.values()) v += s;
  return Push(std::move(out), {a.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& ga = g.GradSlot(ia);
    for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
  });
}

Var Graph::MatMul(Var a, Var b) {
  Tensor out = semcodec::MatMul(value(a), value(b));
  return Push(std::move(out), {a.id, b.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const int ib = g.nodes_[self].inputs[1];
    const Tensor& go = g.OutGrad(self);
    const Tensor& av = g.nodes_[ia].value;
    const Tensor& bv = g.nodes_[ib].value;
    const size_t r = av.rows(), k = av.cols(), c = bv.cols();
    if (g.NeedsGrad(ia)) {
      // dA = dC * B^T
      Tensor& ga = g.GradSlot(ia);
      for (size_t i = 0; i < r; ++i) {
        const double* gorow = (go.values().data() + i * c);
        for (size_t p = 0; p < k; ++p) {
          const double* brow = (bv.values().data() + p * c);
          double acc = 0.0;
          for (size_t j = 0; j < c; ++j) acc += gorow[j] * brow[j];
          ga[i * k + p] += acc;
        }
      }
    }
    if (g.NeedsGrad(ib)) {
      // dB = A^T * dC
      Tensor& gb = g.GradSlot(ib);
      for (size_t i = 0; i < r; ++i) {
        const double* gorow = (go.values().data() + i * c);
        for (size_t p = 0; p < k; ++p) {
          const double aval = av[i * k + p];
          if (aval == 0.0) continue;
          double* gbrow = &gb[p * c];
          for (size_t j = 0; j < c; ++j) gbrow[j] += aval * gorow[j];
        }
      }
    }
  });
}

Var Graph::BroadcastRows(Var row, size_t rows) {
  const Tensor& rv = value(row);
  const size_t c = rv.size();
  Tensor out = Tensor::Matrix(rows, c);
  for (size_t i = 0; i < rows; ++i)
    std::copy(rv.values().begin(), rv.values().end(), out.values().begin() + i * c);
  return Push(std::move(out), {row.id}, [rows, c](Graph& g, int self) {
    const int ir = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& gr = g.GradSlot(ir);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j < c; ++j) gr[j] += go[i * c + j];
  });
}

Var Graph::BroadcastCols(Var col, size_t cols) {
  const Tensor& cv = value(col);
  const size_t r = cv.size();
  Tensor out = Tensor::Matrix(r, cols);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < cols; ++j) out[i * cols + j] = cv[i];
  return Push(std::move(out), {col.id}, [r, cols](Graph& g, int self) {
    const int ic = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& gc = g.GradSlot(ic);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < cols; ++j) gc[i] += go[i * cols + j];
  });
}

Var Graph::Softmax(Var a) {
  Tensor out = semcodec::Softmax(value(a));
  return Push(std::move(out), {a.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    const Tensor& y = g.nodes_[self].value;
    Tensor& ga = g.GradSlot(ia);
    const size_t c = y.cols(), r = y.size() / c;
    for (size_t i = 0; i < r; ++i) {
      double dot = 0.0;
      for (size_t j = 0; j < c; ++j) dot += go[i * c + j] * y[i * c + j];
      for (size_t j = 0; j < c; ++j) ga[i * c + j] += y[i * c + j] * (go[i * c + j] - dot);
    }
  });
}

Var Graph::LogSoftmax(Var a) {
  const Tensor& av = value(a);
  Tensor out = av;
  const size_t c = av.cols(), r = av.size() / c;
  for (size_t i = 0; i < r; ++i) {
    double* row = &out[i * c];
    const double mx = *std::max_element(row, row + c);
    double total = 0.0;
    for (size_t j = 0; j < c; ++j) total += std::exp(row[j] - mx);
    const double lse = mx + std::log(total);
    for (size_t j = 0; j < c; ++j) row[j] -= lse;
  }
  return Push(std::move(out), {a.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    const Tensor& y = g.nodes_[self].value;
    Tensor& ga = g.GradSlot(ia);
    const size_t c = y.cols(), r = y.size() / c;
    for (size_t i = 0; i < r; ++i) {
      double total = 0.0;
      for (size_t j = 0; j < c; ++j) total += go[i * c + j];
      for (size_t j = 0; j < c; ++j)
        ga[i * c + j] += go[i * c + j] - std::exp(y[i * c + j]) * total;
    }
  });
}

Var Graph::Sum(Var a) {
  Tensor out = Tensor::Matrix(1, 1, semcodec::Sum(value(a)));
  return Push(std::move(out), {a.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const double go = g.OutGrad(self)[0];
    Tensor& ga = g.GradSlot(ia);
    for (double& v : ga.values()) v += go;
  });
}

Var Graph::Mean(Var a) {
  const size_t n = value(a).size();
  return Scale(Sum(a), n ? 1.0 / n : 0.0);
}

Var Graph::ColMean(Var a) {
  const Tensor& av = value(a);
  const size_t r = av.rows(), c = av.cols();
  Tensor out = Tensor::Matrix(1, c);
  for (size_t i = 0; i < r; ++i)
    for (size_t j = 0; j < c; ++j) out[j] += av[i * c + j];
  for (double& v : out.values()) v /= static_cast<double>(r);
  return Push(std::move(out), {a.id}, [r, c](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& ga = g.GradSlot(ia);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) ga[i * c + j] += go[j] / static_cast<double>(r);
  });
}

Var Graph::ColMax(Var a) {
  const Tensor& av = value(a);
  const size_t r = av.rows(), c = av.cols();
  if (r == 0) throw std::invalid_argument("ColMax of empty matrix");
  Tensor out = Tensor::Matrix(1, c);
  std::vector<size_t> arg(c, 0);
  for (size_t j = 0; j < c; ++j) {
    out[j] = av[j];
    for (size_t i = 1; i < r; ++i) {
      if (av[i * c + j] > out[j]) {
        out[j] = av[i * c + j];
        arg[j] = i;
      }
    }
  }
  return Push(std::move(out), {a.id}, [arg, c](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& ga = g.GradSlot(ia);
    for (size_t j = 0; j < c; ++j) ga[arg[j] * c + j] += go[j];
  });
}

Var Graph::Element(Var a, size_t index) {
  if (index >= value(a).size()) throw std::out_of_range("Element index out of range");
  Tensor out = Tensor::Matrix(1, 1, value(a)[index]);
  return Push(std::move(out), {a.id}, [index](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    g.GradSlot(ia)[index] += g.OutGrad(self)[0];
  });
}

Var Graph::Reshape(Var a, std::vector<size_t> shape) {
  Tensor out = value(a).Reshaped(std::move(shape));
  return Push(std::move(out), {a.id}, [](Graph& g, int self) {
    const int ia = g.nodes_[self].inputs[0];
    const Tensor& go = g.OutGrad(self);
    Tensor& ga = g.GradSlot(ia);
    for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i];
  });
}

Var Graph::ConcatCols(std::span<const Var> parts) {
  if (parts.empty()) throw std::invalid_argument("ConcatCols of nothing");
  const size_t r = value(parts[0]).rows();
  std::vector<size_t> widths;
  std::vector<int> ids;
  size_t total = 0;
  for (Var p : parts) {
    if (value(p).rows() != r) throw std::invalid_argument("ConcatCols row mismatch");
    widths.push_back(value(p).cols());
    ids.push_back(p.id);
    total += widths.back();
  }
  Tensor out = Tensor::Matrix(r, total);
  size_t off = 0;
  for (size_t k = 0; k < parts.size(); ++k) {
    const Tensor& pv = value(parts[k]);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < widths[k]; ++j) out[i * total + off + j] = pv[i * widths[k] + j];
    off += widths[k];
  }
  return Push(std::move(out), std::move(ids), [widths, r, total](Graph& g, int self) {
    const Tensor& go = g.OutGrad(self);
    size_t off = 0;
    for (size_t k = 0; k < widths.size(); ++k) {
      const int ip = g.nodes_[self].inputs[k];
      if (g.NeedsGrad(ip)) {
        Tensor& gp = g.GradSlot(ip);
        for (size_t i = 0; i < r; ++i)
          for (size_t j = 0; j < widths[k]; ++j)
            gp[i * widths[k] + j] += go[i * total + off + j];
      }
      off += widths[k];
    }
  });
}

Var Graph::Apply(std::shared_ptr<const SparseMatrix> op, Var x) {
  Tensor out = op->Apply(value(x));
  return Push(std::move(out), {x.id}, [op](Graph& g, int self) {
    const int ix = g.nodes_[self].inputs[0];
    Tensor back = op->ApplyTransposed(g.OutGrad(self));
    Tensor& gx = g.GradSlot(ix);
    for (size_t i = 0; i < back.size(); ++i) gx[i] += back[i];
  });
}

Var Graph::Pointwise(Var a, Tensor out, Tensor derivative) {
  if (out.shape() != value(a).shape() || derivative.shape() != value(a).shape()) {
    throw std::invalid_argument("Pointwise value/derivative shape mismatch");
  }
  return Push(std::move(out), {a.id},
              [d = std::move(derivative)](Graph& g, int self) {
                const int ia = g.nodes_[self].inputs[0];
                const Tensor& go = g.OutGrad(self);
                Tensor& ga = g.GradSlot(ia);
                for (size_t i = 0; i < go.size(); ++i) ga[i] += go[i] * d[i];
              });
}

void Graph::Backward(Var target) {
  if (value(target).size() != 1) {
    throw std::invalid_argument("Backward target must be scalar, got " +
                                ShapeString(value(target).shape()));
  }
  for (auto& n : nodes_) n.grad = Tensor();
  GradSlot(target.id)[0] = 1.0;
  for (int id = target.id; id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.needs_grad || n.grad.size() == 0) continue;
    if (n.backward) n.backward(*this, id);
    if (n.block != nullptr) {
      Tensor& dst = n.block->entries()[n.param_index].grad;
      if (dst.size() != n.grad.size()) dst = Tensor(n.value.shape());
      for (size_t i = 0; i < dst.size(); ++i) dst[i] += n.grad[i];
    }
  }
}

}  // namespace semcodec
