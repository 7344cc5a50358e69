#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "steerfiber/errors.hpp"
#include "steerfiber/sheath.hpp"
#include "test_support.hpp"

using namespace steerfiber;
namespace st = steerfiber::testing;

namespace {

const SheathDesign kTable{};

// Neutral-plane distance implied by a 107.15 degree full-closure bend: invert
// phi_max = n h / (r_o + ybar).
double ybar_from_closure_angle() {
  return kTable.notch_count * kTable.notch_height / deg_to_rad(107.15) - kTable.outer_radius;
}

// Centroid of the uncut cross-section by brute-force grid integration over
// the annulus, keeping points with y <= r_o - w (the cut removes the rest).
double ybar_by_integration(const SheathDesign& d, int grid) {
  const double cut = d.outer_radius - d.cut_depth;  // y of the chord
  double area = 0, moment = 0;
  const double step = 2.0 * d.outer_radius / grid;
  for (int i = 0; i < grid; ++i) {
    const double x = -d.outer_radius + (i + 0.5) * step;
    for (int j = 0; j < grid; ++j) {
      const double y = -d.outer_radius + (j + 0.5) * step;
      const double r2 = x * x + y * y;
      if (r2 > d.outer_radius * d.outer_radius || r2 < d.inner_radius * d.inner_radius || y > cut) continue;
      area += 1;
      moment += y;
    }
  }
  return -moment / area;
}

}  // namespace

TEST(NeutralPlane, PrototypeMatchesClosureAngle) {
  EXPECT_NEAR(neutral_plane(kTable), ybar_from_closure_angle(), 0.01);
  EXPECT_NEAR(neutral_plane(kTable), 0.466, 0.001);
}

TEST(NeutralPlane, MatchesAreaIntegration) {
  EXPECT_NEAR(neutral_plane(kTable), ybar_by_integration(kTable, 4000), 1e-4);
  SheathDesign d = kTable;
  d.cut_depth = 0.7;
  EXPECT_NEAR(neutral_plane(d), ybar_by_integration(d, 4000), 1e-4);
}

TEST(NeutralPlane, CutToAxisRejected) {
  SheathDesign d = kTable;
  d.cut_depth = d.outer_radius;
  EXPECT_THROW(neutral_plane(d), DomainError);
  d.cut_depth = 2.0 * d.outer_radius;
  EXPECT_THROW(neutral_plane(d), DomainError);
}

TEST(NeutralPlane, ApproachesOuterRadiusAsSliverVanishes) {
  SheathDesign d = kTable;
  double prev = 0;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6}) {
    d.cut_depth = 2.0 * d.outer_radius - eps;
    const double y = neutral_plane(d);
    EXPECT_LT(y, d.outer_radius);
    EXPECT_GT(y, prev);
    prev = y;
  }
  EXPECT_NEAR(prev, d.outer_radius, 1e-5);
}

TEST(NotchArc, ZeroDisplacementIsStraight) {
  const ArcParams a = notch_arc(0.0, kTable);
  EXPECT_EQ(a.kappa, 0.0);
  EXPECT_DOUBLE_EQ(a.s, 0.19);
}

TEST(NotchArc, ClosureAngleIsMaxOverN) {
  const double yb = neutral_plane(kTable);
  const double closure = kTable.notch_height * (kTable.inner_radius + yb) / (kTable.outer_radius + yb);
  EXPECT_NEAR(closure_displacement_per_notch(kTable), closure, 1e-15);
  EXPECT_NEAR(closure, 0.171, 0.001);
  const ArcParams a = notch_arc(closure, kTable);
  EXPECT_NEAR(a.angle(), kTable.notch_height / (kTable.outer_radius + yb), 1e-12);
  EXPECT_NEAR(a.angle(), max_bend_angle(kTable) / kTable.notch_count, 1e-12);
}

TEST(NotchArc, MidwayAngleIsLinear) {
  const double yb = neutral_plane(kTable);
  const double dl = 0.5 * closure_displacement_per_notch(kTable);
  // Direct evaluation of the arc relations.
  const double kappa = dl / (kTable.notch_height * (kTable.inner_radius + yb) - dl * yb);
  const double s = kTable.notch_height / (1.0 + yb * kappa);
  const ArcParams a = notch_arc(dl, kTable);
  EXPECT_NEAR(a.kappa, kappa, 1e-12);
  EXPECT_NEAR(a.s, s, 1e-15);
  EXPECT_NEAR(a.angle(), dl / (kTable.inner_radius + yb), 1e-12);
}

TEST(NotchArc, BeyondClosureErrorsOrClamps) {
  const double over = 1.01 * closure_displacement_per_notch(kTable);
  EXPECT_THROW(notch_arc(over, kTable), DomainError);
  EXPECT_THROW(notch_arc(-0.01, kTable), DomainError);
  const ArcParams clamped = notch_arc(over, kTable, ClosurePolicy::kClamp);
  EXPECT_NEAR(clamped.angle(), max_bend_angle(kTable) / kTable.notch_count, 1e-12);
}

TEST(ForwardKinematics, StraightStackUp) {
  const FiberKinematics fk = forward_kinematics(kTable, {});
  const double n = kTable.notch_count;
  EXPECT_LT((fk.tip.translation() - Vec3(0, 0, n * (0.19 + 1.31) + 1.0)).norm(), 1e-12);
  EXPECT_LT((fk.tip.rotation() - Mat3::Identity()).norm(), 1e-12);
  EXPECT_EQ(fk.bend_angle, 0.0);
}

TEST(ForwardKinematics, FullClosureBends107Degrees) {
  const FiberKinematics fk = forward_kinematics(kTable, {closure_displacement(kTable), 0, 0});
  EXPECT_NEAR(rad_to_deg(fk.bend_angle), 107.15, 0.1);
  EXPECT_NEAR(rad_to_deg(angle_between_z(Pose(), fk.tip)), 107.15, 0.1);
  EXPECT_NEAR(closure_displacement(kTable), 1.71, 0.01);
}

TEST(ForwardKinematics, RollByPiMirrorsThroughAxis) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const double dl = st::uniform(rng, 0, closure_displacement(kTable));
    const double z = st::uniform(rng, 0, kTable.z_travel);
    const Vec3 a = forward_kinematics(kTable, {dl, z, 0.0}).tip.translation();
    const Vec3 b = forward_kinematics(kTable, {dl, z, std::numbers::pi}).tip.translation();
    EXPECT_NEAR(b.x(), -a.x(), 1e-12);
    EXPECT_NEAR(b.y(), -a.y(), 1e-12);
    EXPECT_NEAR(b.z(), a.z(), 1e-12);
  }
}

TEST(ForwardKinematics, InadmissibleConfigNamesBound) {
  try {
    forward_kinematics(kTable, {0, kTable.z_travel + 1, 0});
    FAIL();
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("z"), std::string::npos);
  }
  EXPECT_THROW(forward_kinematics(kTable, {-0.1, 0, 0}), DomainError);
  EXPECT_THROW(forward_kinematics(kTable, {2.0, 0, 0}), DomainError);
  EXPECT_TRUE(forward_kinematics(kTable, {2.0, 0, 0}, ClosurePolicy::kClamp).clamped);
}

TEST(ForwardKinematics, PrecurveAddsFixedOffset) {
  SheathDesign d = kTable;
  d.precurve = deg_to_rad(10.0);
  const double dl = 0.8;
  const FiberKinematics fk = forward_kinematics(d, {dl, 0, 0});
  EXPECT_NEAR(fk.bend_angle, model_bend_angle(kTable, dl) + d.precurve, 1e-12);
  EXPECT_NEAR(angle_between_z(Pose(), fk.tip), fk.bend_angle, 1e-9);
}

TEST(MaxBendAngle, PrototypeValueAndScaling) {
  EXPECT_NEAR(rad_to_deg(max_bend_angle(kTable)), 107.15, 0.1);
  SheathDesign d = kTable;
  d.notch_count *= 2;
  EXPECT_NEAR(max_bend_angle(d), 2.0 * max_bend_angle(kTable), 1e-12);
  d = kTable;
  d.notch_height = 0.0;
  EXPECT_EQ(max_bend_angle(d), 0.0);
}

TEST(MinBendRadius, PrototypeValue) {
  EXPECT_NEAR(min_bend_radius(kTable), 6.9, 0.1);
  EXPECT_GE(min_bend_radius(kTable), kFiberMinBendRadius);
}

TEST(MinBendRadius, DecreasesWithNotchHeight) {
  SheathDesign d = kTable;
  double prev = std::numeric_limits<double>::infinity();
  for (double h = 0.10; h <= 0.30 + 1e-12; h += 0.01) {
    d.notch_height = h;
    const double r = min_bend_radius(d);
    EXPECT_LT(r, prev) << h;
    prev = r;
  }
}

TEST(MinBendRadius, ZeroHeightIsUnbounded) {
  SheathDesign d = kTable;
  d.notch_height = 0.0;
  EXPECT_TRUE(std::isinf(min_bend_radius(d)));
  d.notch_height = 1e-9;
  EXPECT_GT(min_bend_radius(d), 1e6);
}

TEST(TendonForAngle, Examples) {
  EXPECT_EQ(tendon_for_angle(kTable, 0.0), 0.0);
  EXPECT_NEAR(tendon_for_angle(kTable, max_bend_angle(kTable)), closure_displacement(kTable), 1e-12);
  EXPECT_NEAR(tendon_for_angle(kTable, max_bend_angle(kTable)), 1.71, 0.01);
  EXPECT_NEAR(tendon_for_angle(kTable, 0.5 * max_bend_angle(kTable)), 0.5 * closure_displacement(kTable), 1e-12);
  EXPECT_THROW(tendon_for_angle(kTable, max_bend_angle(kTable) + 0.01), DomainError);
}

TEST(TendonForAngle, RoundTripsThroughKinematics) {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 1000; ++i) {
    const double phi = st::uniform(rng, 0, max_bend_angle(kTable));
    const double dl = tendon_for_angle(kTable, phi);
    EXPECT_NEAR(forward_kinematics(kTable, {dl, 0, 0}).bend_angle, phi, 1e-9);
  }
}

// Properties over random admissible configurations.

TEST(SheathProperties, BendAngleIsExactlyLinear) {
  std::mt19937_64 rng(23);
  const double slope = 1.0 / (kTable.inner_radius + neutral_plane(kTable));
  for (int i = 0; i < 10000; ++i) {
    const double dl = st::uniform(rng, 0, closure_displacement(kTable));
    const FiberKinematics fk = forward_kinematics(kTable, {dl, 0, 0});
    ASSERT_NEAR(kTable.notch_count * fk.notch.angle(), dl * slope, 1e-9);
    ASSERT_NEAR(angle_between_z(Pose(), fk.tip), dl * slope, 1e-9);
  }
}

TEST(SheathProperties, BendAngleStrictlyIncreases) {
  double prev = -1;
  const double closure = closure_displacement(kTable);
  for (int i = 0; i <= 1000; ++i) {
    const double a = forward_kinematics(kTable, {closure * i / 1000.0, 0, 0}).bend_angle;
    EXPECT_GT(a, prev);
    prev = a;
  }
}

TEST(SheathProperties, TranslationAndRollDecoupleFromBend) {
  std::mt19937_64 rng(29);
  for (int i = 0; i < 1000; ++i) {
    const double dl = st::uniform(rng, 0, closure_displacement(kTable));
    const double z = st::uniform(rng, 0, kTable.z_travel);
    const double th = st::uniform(rng, -10, 10);
    const FiberKinematics ref = forward_kinematics(kTable, {dl, 0, 0});
    const FiberKinematics moved = forward_kinematics(kTable, {dl, z, th});
    EXPECT_NEAR(moved.bend_angle, ref.bend_angle, 1e-15);
    const Pose expected = Pose::translation(Vec3(0, 0, z)) * Pose::rot_z(th) * ref.tip;
    EXPECT_LT((moved.tip.matrix() - expected.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(SheathProperties, FiberSafetyHoldsForAdmissibleConfigs) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 10000; ++i) {
    const double dl = st::uniform(rng, 0, closure_displacement(kTable));
    ASSERT_GE(effective_bend_radius(kTable, dl), kFiberMinBendRadius);
  }
  EXPECT_NEAR(effective_bend_radius(kTable, closure_displacement(kTable)), min_bend_radius(kTable), 1e-12);
}

TEST(SheathProperties, BackboneIsContinuous) {
  std::mt19937_64 rng(37);
  const double step = std::max(kTable.notch_height, kTable.notch_spacing) + 1e-6;
  for (int i = 0; i < 500; ++i) {
    const FiberConfig c{st::uniform(rng, 0, closure_displacement(kTable)), st::uniform(rng, 0, kTable.z_travel),
                        st::uniform(rng, -4, 4)};
    const FiberKinematics fk = forward_kinematics(kTable, c);
    ASSERT_GE(fk.backbone.size(), static_cast<std::size_t>(5 * kTable.notch_count));
    for (std::size_t k = 1; k < fk.backbone.size(); ++k) {
      ASSERT_LE((fk.backbone[k].translation() - fk.backbone[k - 1].translation()).norm(), step);
    }
    EXPECT_LT((fk.backbone.back().translation() - fk.tip.translation()).norm(), 1e-12);
  }
}

TEST(SheathDesign, ValidationRejectsBadGeometry) {
  SheathDesign d = kTable;
  d.inner_radius = 0.6;
  EXPECT_THROW(d.validate(), DomainError);
  d = kTable;
  d.notch_count = 0;
  EXPECT_THROW(d.validate(), DomainError);
  d = kTable;
  d.notch_spacing = 0;
  EXPECT_THROW(d.validate(), DomainError);
  EXPECT_NO_THROW(kTable.validate());
}
