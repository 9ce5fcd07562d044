#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace orishell {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using VecX = Eigen::VectorXd;
using MatX = Eigen::MatrixXd;

enum class ErrorKind {
  DanglingNode,
  NonManifoldCrease,
  DegenerateElement,
  NonFlatPanel,
  ZeroDirector,
  BarrierOverflow,
  SingularTransform,
  SingularSystem,
  OverlappingBCs,
  ParseError,
  ValidationError,
  IoError,
  UnknownScene,
};

/// Typed runtime error carrying the failure category alongside the message.
class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

inline Mat3 skew(const Vec3& v) {
  Mat3 s;
  s << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return s;
}

}  // namespace orishell
