#include "steerfiber/calibration.hpp"

#include <cmath>
#include <string>

#include "steerfiber/errors.hpp"
#include "steerfiber/sheath.hpp"

namespace steerfiber {

LineFit fit_bend_line(std::span<const BendSample> samples) {
  const auto n = static_cast<double>(samples.size());
  if (samples.size() < 2) throw DomainError("line fit needs at least two samples");
  double mean_x = 0.0, mean_y = 0.0;
  for (const auto& s : samples) {
    if (!std::isfinite(s.dl) || !std::isfinite(s.phi)) throw DomainError("line fit samples must be finite");
    mean_x += s.dl;
    mean_y += s.phi;
  }
  mean_x /= n;
  mean_y /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& s : samples) {
    const double dx = s.dl - mean_x, dy = s.phi - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  double scale = 0.0;
  for (const auto& s : samples) scale = std::max(scale, std::abs(s.dl));
  if (!(sxx > 1e-24 * std::max(1.0, scale * scale) * n)) {
    throw DomainError("line fit is rank deficient: need at least two distinct dl values");
  }
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  double ss_res = 0.0;
  for (const auto& s : samples) {
    const double r = s.phi - (fit.slope * s.dl + fit.intercept);
    ss_res += r * r;
    fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r));
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

namespace {

// Second singular value of the centred point cloud relative to the first.
double planarity(std::span<const Vec3> pts, const Vec3& centroid) {
  Mat3 cov = Mat3::Zero();
  for (const Vec3& p : pts) cov += (p - centroid) * (p - centroid).transpose();
  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 ev = eig.eigenvalues();  // ascending
  if (!(ev[2] > 0.0)) return 0.0;
  return std::sqrt(std::max(0.0, ev[1]) / ev[2]);
}

}  // namespace

RegistrationResult register_fiducials(std::span<const Vec3> src, std::span<const Vec3> dst) {
  if (src.size() != dst.size()) {
    throw DomainError("fiducial counts differ: " + std::to_string(src.size()) + " vs " + std::to_string(dst.size()));
  }
  if (src.size() < 3) throw DomainError("registration needs at least three fiducials");
  const auto n = static_cast<double>(src.size());
  Vec3 cs = Vec3::Zero(), cd = Vec3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) {
    cs += src[i];
    cd += dst[i];
  }
  cs /= n;
  cd /= n;
  constexpr double kCollinear = 1e-6;
  if (planarity(src, cs) < kCollinear) throw DomainError("source fiducials are collinear or coincident");
  if (planarity(dst, cd) < kCollinear) throw DomainError("target fiducials are collinear or coincident");

  Mat3 h = Mat3::Zero();
  for (std::size_t i = 0; i < src.size(); ++i) h += (src[i] - cs) * (dst[i] - cd).transpose();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3& u = svd.matrixU();
  const Mat3& v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;

  RegistrationResult out;
  out.rotation = v * d * u.transpose();
  out.translation = cd - out.rotation * cs;
  double sq = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    sq += (out.rotation * src[i] + out.translation - dst[i]).squaredNorm();
  }
  out.rms_error = std::sqrt(sq / n);
  return out;
}

double bend_loss(double bend_radius) {
  if (!(bend_radius >= kFiberMinBendRadius)) {
    throw DomainError("bend radius must be >= " + std::to_string(kFiberMinBendRadius) + " mm");
  }
  if (std::isinf(bend_radius)) return 0.0;
  return kBendLossAtMinRadius * std::pow(10.0, -(bend_radius - kFiberMinBendRadius) / kBendLossDecadeLength);
}

double power_budget(double input_w, double bend_radius) {
  if (!(input_w >= 0.0) || !std::isfinite(input_w)) throw DomainError("input power must be finite and >= 0 W");
  return input_w * kCouplingEfficiency * (1.0 - bend_loss(bend_radius));
}

}  // namespace steerfiber
