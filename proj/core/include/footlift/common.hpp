#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace footlift {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// First two columns of a rotation matrix, stacked column-first:
// (m00, m10, m20, m01, m11, m21).
using Rot6 = Eigen::Matrix<double, 6, 1>;

constexpr int kFormatVersion = 1;

// Exit codes used by the CLI; library errors carry the code they map to.
enum class ExitCode : int {
  ok = 0,
  usage = 2,
  data = 3,
  numeric = 4,
};

class Error : public std::runtime_error {
 public:
  Error(std::string msg, ExitCode code)
      : std::runtime_error(std::move(msg)), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

struct DegenerateInput : Error {
  explicit DegenerateInput(const std::string& m)
      : Error("degenerate input: " + m, ExitCode::numeric) {}
};
struct BehindCamera : Error {
  explicit BehindCamera(const std::string& m)
      : Error("point behind camera: " + m, ExitCode::numeric) {}
};
struct ShapeMismatch : Error {
  explicit ShapeMismatch(const std::string& m)
      : Error("shape mismatch: " + m, ExitCode::data) {}
};
struct LengthMismatch : Error {
  explicit LengthMismatch(const std::string& m)
      : Error("length mismatch: " + m, ExitCode::data) {}
};
struct EmptyInput : Error {
  explicit EmptyInput(const std::string& m)
      : Error("empty input: " + m, ExitCode::data) {}
};
struct OddHeadDim : Error {
  explicit OddHeadDim(const std::string& m)
      : Error("odd head dimension: " + m, ExitCode::data) {}
};
struct NoVisibleKeypoints : Error {
  explicit NoVisibleKeypoints(const std::string& m)
      : Error("no visible keypoints: " + m, ExitCode::data) {}
};
struct InsufficientKeypoints : Error {
  explicit InsufficientKeypoints(const std::string& m)
      : Error("insufficient keypoints: " + m, ExitCode::data) {}
};
struct SequenceTooShort : Error {
  explicit SequenceTooShort(const std::string& m)
      : Error("sequence too short: " + m, ExitCode::data) {}
};
struct FormatError : Error {
  explicit FormatError(const std::string& m)
      : Error("format error: " + m, ExitCode::data) {}
};
struct IoError : Error {
  explicit IoError(const std::string& m)
      : Error("io error: " + m, ExitCode::data) {}
};
struct ConfigError : Error {
  explicit ConfigError(const std::string& m)
      : Error("config error: " + m, ExitCode::usage) {}
};

}  // namespace footlift
