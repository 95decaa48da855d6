#pragma once

#include <vector>

#include "footlift/nn/graph.hpp"
#include "footlift/rotmath.hpp"

namespace footlift {

// Differentiable rotation plumbing over [L, 9] row-major matrix stacks.

// Gram-Schmidt 6D -> matrix per row; throws DegenerateInput when any row
// violates the norm preconditions.
nn::Var gs_rot6_to_mat9(nn::Graph& g, nn::Var r6);

// First two columns per row, stacked: [L, 9] -> [L, 6].
nn::Var mat9_to_rot6(nn::Graph& g, nn::Var m9);

// Per-row products.
nn::Var matrow_tn(nn::Graph& g, nn::Var a9, nn::Var b9);  // a^T * b
nn::Var matrow_nn(nn::Graph& g, nn::Var a9, nn::Var b9);  // a * b
// Per-row rotation of a fixed vector: [L, 9] -> [L, 3].
nn::Var matrow_apply(nn::Graph& g, nn::Var r9, const Vec3& v);

// Packing helpers between Eigen values and tensors.
nn::Tensor pack_mats9(const std::vector<Mat3>& mats);
nn::Tensor pack_rot6(const std::vector<Rot6>& rots);
nn::Tensor pack_vec3(const std::vector<Vec3>& v);
nn::Tensor pack_vec2(const std::vector<Vec2>& v);
std::vector<Mat3> unpack_mats9(const nn::Tensor& t);
std::vector<Rot6> unpack_rot6(const nn::Tensor& t);

}  // namespace footlift
