#include "footlift/graph_rot.hpp"

namespace footlift {

using nn::Graph;
using nn::Tensor;
using nn::Var;

Var gs_rot6_to_mat9(Graph& g, Var r6) {
  if (r6.cols() != 6) throw ShapeMismatch("gs_rot6_to_mat9 expects [L, 6]");
  Var a = g.slice_cols(r6, 0, 3);
  Var b = g.slice_cols(r6, 3, 3);
  Var na = g.rowwise_norm(a);
  for (int r = 0; r < na.rows(); ++r)
    if (na.value()(r, 0) <= 1e-12)
      throw DegenerateInput("6D first column near zero at frame " +
                            std::to_string(r));
  Var c1 = g.mul_colvec(a, g.reciprocal(na));
  Var dot = g.rowwise_sum(g.mul(c1, b));
  Var c2raw = g.sub(b, g.mul_colvec(c1, dot));
  Var n2 = g.rowwise_norm(c2raw);
  for (int r = 0; r < n2.rows(); ++r)
    if (n2.value()(r, 0) <= 1e-12)
      throw DegenerateInput("6D columns collinear at frame " +
                            std::to_string(r));
  Var c2 = g.mul_colvec(c2raw, g.reciprocal(n2));

  auto col = [&](Var m, int c) { return g.slice_cols(m, c, 1); };
  Var c1x = col(c1, 0), c1y = col(c1, 1), c1z = col(c1, 2);
  Var c2x = col(c2, 0), c2y = col(c2, 1), c2z = col(c2, 2);
  Var c3x = g.sub(g.mul(c1y, c2z), g.mul(c1z, c2y));
  Var c3y = g.sub(g.mul(c1z, c2x), g.mul(c1x, c2z));
  Var c3z = g.sub(g.mul(c1x, c2y), g.mul(c1y, c2x));
  // Row-major 3x3: (r, c) at column 3r + c of the output.
  return g.concat_cols({c1x, c2x, c3x, c1y, c2y, c3y, c1z, c2z, c3z});
}

Var mat9_to_rot6(Graph& g, Var m9) {
  if (m9.cols() != 9) throw ShapeMismatch("mat9_to_rot6 expects [L, 9]");
  auto col = [&](int c) { return g.slice_cols(m9, c, 1); };
  return g.concat_cols({col(0), col(3), col(6), col(1), col(4), col(7)});
}

Var matrow_tn(Graph& g, Var a9, Var b9) {
  if (a9.cols() != 9 || b9.cols() != 9) throw ShapeMismatch("matrow_tn");
  auto col = [&](Var m, int c) { return g.slice_cols(m, c, 1); };
  std::vector<Var> out;
  out.reserve(9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // out(i, j) = sum_k a(k, i) * b(k, j)
      Var s = g.mul(col(a9, i), col(b9, j));
      s = g.add(s, g.mul(col(a9, 3 + i), col(b9, 3 + j)));
      s = g.add(s, g.mul(col(a9, 6 + i), col(b9, 6 + j)));
      out.push_back(s);
    }
  }
  return g.concat_cols(out);
}

Var matrow_nn(Graph& g, Var a9, Var b9) {
  if (a9.cols() != 9 || b9.cols() != 9) throw ShapeMismatch("matrow_nn");
  auto col = [&](Var m, int c) { return g.slice_cols(m, c, 1); };
  std::vector<Var> out;
  out.reserve(9);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      // out(i, j) = sum_k a(i, k) * b(k, j)
      Var s = g.mul(col(a9, 3 * i), col(b9, j));
      s = g.add(s, g.mul(col(a9, 3 * i + 1), col(b9, 3 + j)));
      s = g.add(s, g.mul(col(a9, 3 * i + 2), col(b9, 6 + j)));
      out.push_back(s);
    }
  }
  return g.concat_cols(out);
}

Var matrow_apply(Graph& g, Var r9, const Vec3& v) {
  if (r9.cols() != 9) throw ShapeMismatch("matrow_apply");
  auto col = [&](int c) { return g.slice_cols(r9, c, 1); };
  std::vector<Var> out;
  out.reserve(3);
  for (int i = 0; i < 3; ++i) {
    Var s = g.scale(col(3 * i), v[0]);
    s = g.add(s, g.scale(col(3 * i + 1), v[1]));
    s = g.add(s, g.scale(col(3 * i + 2), v[2]));
    out.push_back(s);
  }
  return g.concat_cols(out);
}

Tensor pack_mats9(const std::vector<Mat3>& mats) {
  Tensor t(static_cast<int>(mats.size()), 9);
  for (size_t l = 0; l < mats.size(); ++l)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) t(static_cast<int>(l), 3 * r + c) = mats[l](r, c);
  return t;
}

Tensor pack_rot6(const std::vector<Rot6>& rots) {
  Tensor t(static_cast<int>(rots.size()), 6);
  for (size_t l = 0; l < rots.size(); ++l)
    for (int k = 0; k < 6; ++k) t(static_cast<int>(l), k) = rots[l][k];
  return t;
}

Tensor pack_vec3(const std::vector<Vec3>& v) {
  Tensor t(static_cast<int>(v.size()), 3);
  for (size_t l = 0; l < v.size(); ++l)
    for (int k = 0; k < 3; ++k) t(static_cast<int>(l), k) = v[l][k];
  return t;
}

Tensor pack_vec2(const std::vector<Vec2>& v) {
  Tensor t(static_cast<int>(v.size()), 2);
  for (size_t l = 0; l < v.size(); ++l)
    for (int k = 0; k < 2; ++k) t(static_cast<int>(l), k) = v[l][k];
  return t;
}

std::vector<Mat3> unpack_mats9(const Tensor& t) {
  if (t.cols() != 9) throw ShapeMismatch("unpack_mats9");
  std::vector<Mat3> out(t.rows());
  for (int l = 0; l < t.rows(); ++l)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) out[l](r, c) = t(l, 3 * r + c);
  return out;
}

std::vector<Rot6> unpack_rot6(const Tensor& t) {
  if (t.cols() != 6) throw ShapeMismatch("unpack_rot6");
  std::vector<Rot6> out(t.rows());
  for (int l = 0; l < t.rows(); ++l)
    for (int k = 0; k < 6; ++k) out[l][k] = t(l, k);
  return out;
}

}  // namespace footlift
