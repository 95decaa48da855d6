#include "footlift/nn/graph.hpp"

#include <cmath>
#include <limits>
#include <memory>

namespace footlift::nn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double gelu_fwd(double x) { return 0.5 * x * (1.0 + std::erf(x * M_SQRT1_2)); }
double gelu_bwd(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x * M_SQRT1_2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
  return cdf + x * pdf;
}
}  // namespace

Param& ParamStore::create(const std::string& name, int rows, int cols) {
  if (has(name)) throw ConfigError("duplicate parameter name: " + name);
  items_.push_back(Param{name, Tensor(rows, cols), Tensor(rows, cols)});
  return items_.back();
}

Param& ParamStore::at(const std::string& name) {
  for (auto& p : items_)
    if (p.name == name) return p;
  throw ConfigError("unknown parameter: " + name);
}

const Param& ParamStore::at(const std::string& name) const {
  for (const auto& p : items_)
    if (p.name == name) return p;
  throw ConfigError("unknown parameter: " + name);
}

bool ParamStore::has(const std::string& name) const {
  for (const auto& p : items_)
    if (p.name == name) return true;
  return false;
}

void ParamStore::zero_grads() {
  for (auto& p : items_) p.grad.set_zero();
}

long ParamStore::total_size() const {
  long n = 0;
  for (const auto& p : items_) n += p.value.size();
  return n;
}

Tensor AttentionMask::additive() const {
  Tensor m(length, length);
  for (int i = 0; i < length; ++i)
    for (int j = 0; j < length; ++j) m(i, j) = allowed(i, j) ? 0.0 : -kInf;
  return m;
}

AttentionMask banded_mask(int length, int window) {
  if (length < 1) throw ShapeMismatch("mask length must be >= 1");
  if (window < 0) throw ShapeMismatch("mask window must be >= 0");
  return AttentionMask{length, window};
}

const Tensor& Var::value() const { return g_->val(id_); }

const Tensor& Var::grad() const { return g_->adj(id_); }

int Graph::push(Tensor val, std::vector<int> parents,
                std::function<void(Graph&, int)> back) {
  Node n;
  n.val = std::move(val);
  n.parents = std::move(parents);
  n.track = tracked(n.parents);
  n.back = n.track ? std::move(back) : nullptr;
  nodes_.push_back(std::move(n));
  return static_cast<int>(nodes_.size()) - 1;
}

Tensor& Graph::adj(int id) {
  Node& n = nodes_[id];
  if (n.param != nullptr) return n.param->grad;
  if (n.adj.empty()) {
    n.adj = Tensor(val(id).shape());
  }
  return n.adj;
}

bool Graph::tracked(const std::vector<int>& parents) const {
  for (int p : parents)
    if (nodes_[p].track) return true;
  return false;
}

Var Graph::constant(Tensor t) {
  return {this, push(std::move(t), {}, nullptr)};
}

Var Graph::leaf(Tensor t) {
  int id = push(std::move(t), {}, nullptr);
  nodes_[id].track = true;
  return {this, id};
}

Var Graph::param(Param& p) {
  // The node reads its value from, and accumulates its adjoint into, the
  // Param itself; no per-graph copy of the weights is made.
  int id = push(Tensor(), {}, nullptr);
  nodes_[id].track = true;
  nodes_[id].param = &p;
  return {this, id};
}

Var Graph::add(Var a, Var b) {
  if (!a.value().same_shape(b.value())) throw ShapeMismatch("add");
  Tensor out = a.value();
  out.map() += b.value().map();
  int ida = a.id(), idb = b.id();
  return {this, push(std::move(out), {ida, idb}, [ida, idb](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track) g.adj(ida).map() += G.map();
            if (g.nodes_[idb].track) g.adj(idb).map() += G.map();
          })};
}

Var Graph::sub(Var a, Var b) {
  if (!a.value().same_shape(b.value())) throw ShapeMismatch("sub");
  Tensor out = a.value();
  out.map() -= b.value().map();
  int ida = a.id(), idb = b.id();
  return {this, push(std::move(out), {ida, idb}, [ida, idb](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track) g.adj(ida).map() += G.map();
            if (g.nodes_[idb].track) g.adj(idb).map() -= G.map();
          })};
}

Var Graph::mul(Var a, Var b) {
  if (!a.value().same_shape(b.value())) throw ShapeMismatch("mul");
  Tensor out = a.value();
  out.map().array() *= b.value().map().array();
  int ida = a.id(), idb = b.id();
  return {this, push(std::move(out), {ida, idb}, [ida, idb](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track)
              g.adj(ida).map().array() +=
                  G.map().array() * g.val(idb).map().array();
            if (g.nodes_[idb].track)
              g.adj(idb).map().array() +=
                  G.map().array() * g.val(ida).map().array();
          })};
}

Var Graph::scale(Var a, double s) {
  Tensor out = a.value();
  out.map() *= s;
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida, s](Graph& g, int self) {
            if (g.nodes_[ida].track)
              g.adj(ida).map() += s * g.nodes_[self].adj.map();
          })};
}

Var Graph::add_rowvec(Var a, Var row) {
  if (row.rows() != 1 || row.cols() != a.cols())
    throw ShapeMismatch("add_rowvec");
  Tensor out = a.value();
  out.map().rowwise() += row.value().map().row(0);
  int ida = a.id(), idr = row.id();
  return {this, push(std::move(out), {ida, idr}, [ida, idr](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track) g.adj(ida).map() += G.map();
            if (g.nodes_[idr].track)
              g.adj(idr).map().row(0) += G.map().colwise().sum();
          })};
}

Var Graph::mul_colvec(Var a, Var col) {
  if (col.cols() != 1 || col.rows() != a.rows())
    throw ShapeMismatch("mul_colvec");
  Tensor out = a.value();
  out.map().array().colwise() *= col.value().map().col(0).array();
  int ida = a.id(), idc = col.id();
  return {this, push(std::move(out), {ida, idc}, [ida, idc](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track)
              g.adj(ida).map().array() +=
                  G.map().array().colwise() * g.val(idc).map().col(0).array();
            if (g.nodes_[idc].track)
              g.adj(idc).map().col(0).array() +=
                  (G.map().array() * g.val(ida).map().array())
                      .rowwise()
                      .sum();
          })};
}

Var Graph::reciprocal(Var a) {
  Tensor out = a.value();
  out.map().array() = 1.0 / out.map().array();
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida](Graph& g, int self) {
            if (!g.nodes_[ida].track) return;
            const Node& n = g.nodes_[self];
            g.adj(ida).map().array() -=
                n.adj.map().array() * n.val.map().array() * n.val.map().array();
          })};
}

Var Graph::matmul(Var a, Var b) {
  if (a.cols() != b.rows()) throw ShapeMismatch("matmul");
  Tensor out(a.rows(), b.cols());
  out.map().noalias() = a.value().map() * b.value().map();
  int ida = a.id(), idb = b.id();
  return {this, push(std::move(out), {ida, idb}, [ida, idb](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track)
              g.adj(ida).map().noalias() += G.map() * g.val(idb).map().transpose();
            if (g.nodes_[idb].track)
              g.adj(idb).map().noalias() += g.val(ida).map().transpose() * G.map();
          })};
}

Var Graph::matmul_nt(Var a, Var b) {
  if (a.cols() != b.cols()) throw ShapeMismatch("matmul_nt");
  Tensor out(a.rows(), b.rows());
  out.map().noalias() = a.value().map() * b.value().map().transpose();
  int ida = a.id(), idb = b.id();
  return {this, push(std::move(out), {ida, idb}, [ida, idb](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            if (g.nodes_[ida].track)
              g.adj(ida).map().noalias() += G.map() * g.val(idb).map();
            if (g.nodes_[idb].track)
              g.adj(idb).map().noalias() += G.map().transpose() * g.val(ida).map();
          })};
}

Var Graph::slice_cols(Var a, int c0, int n) {
  if (c0 < 0 || n < 0 || c0 + n > a.cols()) throw ShapeMismatch("slice_cols");
  Tensor out(a.rows(), n);
  out.map() = a.value().map().middleCols(c0, n);
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida, c0, n](Graph& g, int self) {
            if (g.nodes_[ida].track)
              g.adj(ida).map().middleCols(c0, n) += g.nodes_[self].adj.map();
          })};
}

Var Graph::concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw ShapeMismatch("concat_cols of nothing");
  int rows = parts[0].rows(), cols = 0;
  for (const auto& p : parts) {
    if (p.rows() != rows) throw ShapeMismatch("concat_cols row mismatch");
    cols += p.cols();
  }
  Tensor out(rows, cols);
  std::vector<int> ids;
  std::vector<int> widths;
  int off = 0;
  for (const auto& p : parts) {
    out.map().middleCols(off, p.cols()) = p.value().map();
    ids.push_back(p.id());
    widths.push_back(p.cols());
    off += p.cols();
  }
  return {this, push(std::move(out), ids, [ids, widths](Graph& g, int self) {
            const Tensor& G = g.nodes_[self].adj;
            int o = 0;
            for (size_t k = 0; k < ids.size(); ++k) {
              if (g.nodes_[ids[k]].track)
                g.adj(ids[k]).map() += G.map().middleCols(o, widths[k]);
              o += widths[k];
            }
          })};
}

Var Graph::rowwise_sum(Var a) {
  Tensor out(a.rows(), 1);
  out.map().col(0) = a.value().map().rowwise().sum();
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida](Graph& g, int self) {
            if (g.nodes_[ida].track)
              g.adj(ida).map().colwise() += g.nodes_[self].adj.map().col(0);
          })};
}

Var Graph::rowwise_norm(Var a) {
  Tensor out(a.rows(), 1);
  out.map().col(0) = a.value().map().rowwise().norm();
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida](Graph& g, int self) {
            if (!g.nodes_[ida].track) return;
            const Tensor& G = g.nodes_[self].adj;
            const Tensor& n = g.nodes_[self].val;
            auto src = g.val(ida).map();
            auto dst = g.adj(ida).map();
            for (int r = 0; r < src.rows(); ++r) {
              const double len = n(r, 0);
              if (len > 0.0) dst.row(r) += (G(r, 0) / len) * src.row(r);
            }
          })};
}

Var Graph::mean_all(Var a) {
  Tensor out(1, 1);
  out(0, 0) = a.value().map().mean();
  int ida = a.id();
  const double inv = 1.0 / static_cast<double>(a.value().size());
  return {this, push(std::move(out), {ida}, [ida, inv](Graph& g, int self) {
            if (g.nodes_[ida].track)
              g.adj(ida).map().array() += inv * g.nodes_[self].adj(0, 0);
          })};
}

Var Graph::gelu(Var a) {
  Tensor out = a.value();
  for (long i = 0; i < out.size(); ++i) out.at(i) = gelu_fwd(out.at(i));
  int ida = a.id();
  return {this, push(std::move(out), {ida}, [ida](Graph& g, int self) {
            if (!g.nodes_[ida].track) return;
            const Tensor& G = g.nodes_[self].adj;
            const Tensor& x = g.val(ida);
            Tensor& dst = g.adj(ida);
            for (long i = 0; i < x.size(); ++i)
              dst.at(i) += G.at(i) * gelu_bwd(x.at(i));
          })};
}

Var Graph::layernorm(Var x, Var gain, Var bias) {
  const int k = x.cols();
  if (gain.rows() != 1 || gain.cols() != k || bias.rows() != 1 ||
      bias.cols() != k)
    throw ShapeMismatch("layernorm affine shapes");
  constexpr double kEps = 1e-8;
  auto xhat = std::make_shared<Tensor>(x.rows(), k);
  auto istd = std::make_shared<std::vector<double>>(x.rows());
  Tensor out(x.rows(), k);
  auto xm = x.value().map();
  for (int r = 0; r < x.rows(); ++r) {
    const double mu = xm.row(r).mean();
    const double var = (xm.row(r).array() - mu).square().mean();
    const double is = 1.0 / std::sqrt(var + kEps);
    (*istd)[r] = is;
    xhat->map().row(r) = ((xm.row(r).array() - mu) * is).matrix();
    out.map().row(r) = (xhat->map().row(r).array() *
                            gain.value().map().row(0).array() +
                        bias.value().map().row(0).array())
                           .matrix();
  }
  int idx = x.id(), idg = gain.id(), idb = bias.id();
  return {this,
          push(std::move(out), {idx, idg, idb},
               [idx, idg, idb, xhat, istd, k](Graph& g, int self) {
                 const Tensor& G = g.nodes_[self].adj;
                 auto gm = G.map();
                 auto xh = xhat->map();
                 if (g.nodes_[idg].track)
                   g.adj(idg).map().row(0) +=
                       (gm.array() * xh.array()).colwise().sum().matrix();
                 if (g.nodes_[idb].track)
                   g.adj(idb).map().row(0) += gm.colwise().sum();
                 if (g.nodes_[idx].track) {
                   auto gainrow = g.val(idg).map().row(0);
                   auto dst = g.adj(idx).map();
                   for (int r = 0; r < gm.rows(); ++r) {
                     Eigen::RowVectorXd gg =
                         (gm.row(r).array() * gainrow.array()).matrix();
                     const double m1 = gg.mean();
                     const double m2 =
                         (gg.array() * xh.row(r).array()).mean();
                     dst.row(r) +=
                         (*istd)[r] *
                         (gg.array() - m1 - xh.row(r).array() * m2).matrix();
                   }
                   (void)k;
                 }
               })};
}

Var Graph::softmax_masked(Var scores, const AttentionMask& mask) {
  const int L = scores.rows();
  if (scores.cols() != L || mask.length != L)
    throw ShapeMismatch("softmax_masked expects [L, L] scores");
  Tensor out(L, L);
  auto sm = scores.value().map();
  for (int i = 0; i < L; ++i) {
    double mx = -kInf;
    for (int j = 0; j < L; ++j)
      if (mask.allowed(i, j)) mx = std::max(mx, sm(i, j));
    double denom = 0.0;
    for (int j = 0; j < L; ++j)
      if (mask.allowed(i, j)) denom += std::exp(sm(i, j) - mx);
    for (int j = 0; j < L; ++j)
      out(i, j) = mask.allowed(i, j) ? std::exp(sm(i, j) - mx) / denom : 0.0;
  }
  int ids = scores.id();
  return {this, push(std::move(out), {ids}, [ids](Graph& g, int self) {
            if (!g.nodes_[ids].track) return;
            const Tensor& P = g.nodes_[self].val;
            const Tensor& G = g.nodes_[self].adj;
            auto dst = g.adj(ids).map();
            for (int i = 0; i < P.rows(); ++i) {
              const double dot =
                  (P.map().row(i).array() * G.map().row(i).array()).sum();
              dst.row(i) += (P.map().row(i).array() *
                             (G.map().row(i).array() - dot))
                                .matrix();
            }
          })};
}

Var Graph::rope(Var x, double base) {
  std::vector<int> positions(x.rows());
  for (int i = 0; i < x.rows(); ++i) positions[i] = i;
  return rope(x, positions, base);
}

Var Graph::rope(Var x, const std::vector<int>& positions, double base) {
  const int d = x.cols();
  if (d % 2 != 0) throw OddHeadDim("rope requires an even feature dimension");
  if (static_cast<int>(positions.size()) != x.rows())
    throw ShapeMismatch("rope positions length");
  auto pos = std::make_shared<std::vector<int>>(positions);
  auto freqs = std::make_shared<std::vector<double>>(d / 2);
  for (int j = 0; j < d / 2; ++j)
    (*freqs)[j] = std::pow(base, -2.0 * j / static_cast<double>(d));
  Tensor out = x.value();
  for (int r = 0; r < x.rows(); ++r) {
    for (int j = 0; j < d / 2; ++j) {
      const double th = (*pos)[r] * (*freqs)[j];
      const double c = std::cos(th), s = std::sin(th);
      const double x0 = out(r, 2 * j), x1 = out(r, 2 * j + 1);
      out(r, 2 * j) = x0 * c - x1 * s;
      out(r, 2 * j + 1) = x0 * s + x1 * c;
    }
  }
  int idx = x.id();
  return {this, push(std::move(out), {idx}, [idx, pos, freqs](Graph& g, int self) {
            if (!g.nodes_[idx].track) return;
            const Tensor& G = g.nodes_[self].adj;
            Tensor& dst = g.adj(idx);
            const int dd = G.cols();
            for (int r = 0; r < G.rows(); ++r) {
              for (int j = 0; j < dd / 2; ++j) {
                const double th = (*pos)[r] * (*freqs)[j];
                const double c = std::cos(th), s = std::sin(th);
                const double g0 = G(r, 2 * j), g1 = G(r, 2 * j + 1);
                dst(r, 2 * j) += g0 * c + g1 * s;
                dst(r, 2 * j + 1) += -g0 * s + g1 * c;
              }
            }
          })};
}

Var Graph::detach(Var a) {
  return {this, push(a.value(), {}, nullptr)};
}

void Graph::backward(Var loss) {
  if (loss.value().size() != 1)
    throw ShapeMismatch("backward expects a scalar loss");
  adj(loss.id())(0, 0) += 1.0;
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (n.adj.empty() || !n.back) continue;
    n.back(*this, id);
  }
}

}  // namespace footlift::nn
