#pragma once

#include <span>
#include <vector>

#include "steerfiber/lie.hpp"

namespace steerfiber {

struct BendSample {
  double dl = 0.0;   // mm
  double phi = 0.0;  // rad
};

struct LineFit {
  double slope = 0.0;      // rad/mm
  double intercept = 0.0;  // rad; resting bend
  double r_squared = 0.0;
  double max_abs_residual = 0.0;
};

// Ordinary least squares phi = slope * dl + intercept. Throws DomainError
// with fewer than two distinct dl values.
LineFit fit_bend_line(std::span<const BendSample> samples);

struct RegistrationResult {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rms_error = 0.0;  // mm, over all correspondences

  Pose pose() const { return {rotation, translation}; }
};

// Least-squares rigid transform mapping src[i] onto dst[i] (SVD of the
// cross-covariance, with a reflection guard). Throws DomainError for fewer
// than three points, mismatched counts, or collinear sources or targets.
RegistrationResult register_fiducials(std::span<const Vec3> src, std::span<const Vec3> dst);

// Coupling efficiency into the thin steerable fiber.
inline constexpr double kCouplingEfficiency = 0.545;
// Transmission loss at the minimum bend radius.
inline constexpr double kBendLossAtMinRadius = 0.045;
// Radius over which the bend loss falls by a factor of ten.
inline constexpr double kBendLossDecadeLength = 6.0;

// Fractional power lost to bending at `bend_radius` (mm). 0.045 at 6 mm,
// decaying log-linearly toward 0 at infinite radius.
double bend_loss(double bend_radius);

// Power delivered at the tip for `input_w` watts at the laser.
double power_budget(double input_w, double bend_radius);

}  // namespace steerfiber
