#include "steerfiber/lie.hpp"

#include <algorithm>
#include <cmath>

namespace steerfiber {

Pose Pose::rot_z(double angle) {
  return {Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix(), Vec3::Zero()};
}

Pose Pose::rot_y(double angle) {
  return {Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix(), Vec3::Zero()};
}

Eigen::Matrix4d Pose::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_;
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

double Pose::orthonormality_error() const {
  double ortho = (rotation_.transpose() * rotation_ - Mat3::Identity()).cwiseAbs().maxCoeff();
  return std::max(ortho, std::abs(rotation_.determinant() - 1.0));
}

Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Eigen::Matrix4d hat(const Twist& xi) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
  m.topLeftCorner<3, 3>() = hat(xi.w);
  m.topRightCorner<3, 1>() = xi.v;
  return m;
}

Pose exp_twist(const Twist& xi, double length) {
  const Vec3 omega = xi.w * length;
  const Vec3 rho = xi.v * length;
  const double theta2 = omega.squaredNorm();
  const double theta = std::sqrt(theta2);

  // a = sin(t)/t, b = (1 - cos t)/t^2, c = (t - sin t)/t^3
  double a, b, c;
  if (theta < 1e-4) {
    a = 1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0;
    b = 0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0;
    c = 1.0 / 6.0 - theta2 / 120.0 + theta2 * theta2 / 5040.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / theta2;
    c = (theta - std::sin(theta)) / (theta2 * theta);
  }

  const Mat3 W = hat(omega);
  const Mat3 W2 = W * W;
  const Mat3 R = Mat3::Identity() + a * W + b * W2;
  const Mat3 V = Mat3::Identity() + b * W + c * W2;
  return {R, V * rho};
}

double angle_between_z(const Pose& a, const Pose& b) {
  const Vec3 za = a.axis_z();
  const Vec3 zb = b.axis_z();
  return std::atan2(za.cross(zb).norm(), za.dot(zb));
}

}  // namespace steerfiber
