#include "footlift/rotmath.hpp"

#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>

namespace footlift {

bool is_rotation(const Mat3& m, double tol) {
  Mat3 gram = m.transpose() * m;
  if ((gram - Mat3::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Mat3 rot6d_to_rotmat(const Rot6& r) {
  const Vec3 a = r.head<3>();
  const Vec3 b = r.tail<3>();
  const double na = a.norm();
  if (na <= 1e-12) throw DegenerateInput("first 6D column has near-zero norm");
  const Vec3 c1 = a / na;
  Vec3 c2 = b - c1.dot(b) * c1;
  const double n2 = c2.norm();
  if (n2 <= 1e-12)
    throw DegenerateInput("6D columns are collinear after orthogonalization");
  c2 /= n2;
  Mat3 out;
  out.col(0) = c1;
  out.col(1) = c2;
  out.col(2) = c1.cross(c2);
  return out;
}

Rot6 rotmat_to_rot6d(const Mat3& r) {
  Rot6 out;
  out.head<3>() = r.col(0);
  out.tail<3>() = r.col(1);
  return out;
}

Mat3 compose(const Mat3& a, const Mat3& b) { return a * b; }

Mat3 inverse(const Mat3& r) { return r.transpose(); }

double geodesic_angle_deg(const Mat3& a, const Mat3& b) {
  const double tr = (a.transpose() * b).trace();
  const double c = std::clamp((tr - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c) * 180.0 / M_PI;
}

Mat3 axis_angle(const Vec3& axis, double angle_rad) {
  return Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
}

Vec3 sample_unit_vector(Rng& rng) {
  // Rejection-free: normalize a Gaussian triple.
  while (true) {
    Vec3 v(rng.normal(), rng.normal(), rng.normal());
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Mat3 sample_uniform_rotation(Rng& rng) {
  double q[4];
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : q) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 <= 1e-24);
  const double inv = 1.0 / std::sqrt(norm2);
  Eigen::Quaterniond quat(q[0] * inv, q[1] * inv, q[2] * inv, q[3] * inv);
  return quat.toRotationMatrix();
}

Mat3 perturb_rotation(const Mat3& r, double sigma_deg, Rng& rng) {
  if (sigma_deg <= 0.0) return r;
  const Vec3 axis = sample_unit_vector(rng);
  const double angle_deg = std::abs(rng.normal(0.0, sigma_deg));
  return compose(r, axis_angle(axis, angle_deg * M_PI / 180.0));
}

}  // namespace footlift
