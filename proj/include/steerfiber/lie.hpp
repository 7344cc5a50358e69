#pragma once

#include <Eigen/Dense>

namespace steerfiber {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Element of se(3) as (v, w): v is the translational part, w the rotational
// part, both per unit of the exponent's scale parameter.
struct Twist {
  Vec3 v = Vec3::Zero();
  Vec3 w = Vec3::Zero();

  static Twist translation_z() { return {Vec3::UnitZ(), Vec3::Zero()}; }
  // Planar constant-curvature arc bending about the local y axis.
  static Twist arc_y(double curvature) { return {Vec3::UnitZ(), Vec3(0.0, curvature, 0.0)}; }
};

// Rigid transform p' = rotation * p + translation (millimetres).
class Pose {
 public:
  Pose() = default;
  Pose(const Mat3& rotation, const Vec3& translation) : rotation_(rotation), translation_(translation) {}

  static Pose identity() { return {}; }
  static Pose translation(const Vec3& t) { return {Mat3::Identity(), t}; }
  static Pose rot_z(double angle);
  static Pose rot_y(double angle);

  const Mat3& rotation() const { return rotation_; }
  const Vec3& translation() const { return translation_; }

  Vec3 axis_x() const { return rotation_.col(0); }
  Vec3 axis_y() const { return rotation_.col(1); }
  Vec3 axis_z() const { return rotation_.col(2); }

  Pose operator*(const Pose& rhs) const {
    return {rotation_ * rhs.rotation_, rotation_ * rhs.translation_ + translation_};
  }
  Vec3 operator*(const Vec3& p) const { return rotation_ * p + translation_; }

  Pose inverse() const {
    Mat3 rt = rotation_.transpose();
    return {rt, -(rt * translation_)};
  }

  Eigen::Matrix4d matrix() const;

  // max |R^T R - I| and |det R - 1|.
  double orthonormality_error() const;

 private:
  Mat3 rotation_ = Mat3::Identity();
  Vec3 translation_ = Vec3::Zero();
};

Mat3 hat(const Vec3& w);

// 4x4 matrix of the twist in se(3).
Eigen::Matrix4d hat(const Twist& xi);

// Closed-form exponential exp(hat(xi) * length). Rodrigues rotation; the
// translation uses the left Jacobian with Taylor expansions near zero angle.
Pose exp_twist(const Twist& xi, double length);

// Angle between the z axes of two frames, robust near 0 and pi.
double angle_between_z(const Pose& a, const Pose& b);

}  // namespace steerfiber
