#pragma once

#include "footlift/common.hpp"
#include "footlift/rng.hpp"

namespace footlift {

// Tolerance for the SO(3) membership checks below.
constexpr double kRotTol = 1e-9;

bool is_rotation(const Mat3& m, double tol = kRotTol);

// Gram-Schmidt recovery of a rotation matrix from a 6D representation:
// c1 = normalize(r[0:3]); c2 = normalize(r[3:6] - (c1.r[3:6]) c1); c3 = c1 x c2.
// Throws DegenerateInput when a column collapses (norm <= 1e-12).
Mat3 rot6d_to_rotmat(const Rot6& r);

// First two columns of R, stacked column-first.
Rot6 rotmat_to_rot6d(const Mat3& r);

Mat3 compose(const Mat3& a, const Mat3& b);
Mat3 inverse(const Mat3& r);

// Geodesic distance on SO(3) in degrees, in [0, 180].
double geodesic_angle_deg(const Mat3& a, const Mat3& b);

// Rotation about a unit axis by an angle in radians (Rodrigues).
Mat3 axis_angle(const Vec3& axis, double angle_rad);

// Uniform point on the unit sphere.
Vec3 sample_unit_vector(Rng& rng);

// Haar-uniform rotation via a normalized Gaussian quaternion.
Mat3 sample_uniform_rotation(Rng& rng);

// R composed on the right with a rotation of half-normal |N(0, sigma^2)|
// magnitude about a uniformly random axis. sigma_deg = 0 returns R unchanged.
Mat3 perturb_rotation(const Mat3& r, double sigma_deg, Rng& rng);

}  // namespace footlift
