// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails. Pass criterion numbers as arguments to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "steerfiber/calibration.hpp"
#include "steerfiber/cli.hpp"
#include "steerfiber/errors.hpp"
#include "steerfiber/fileio.hpp"
#include "steerfiber/lie.hpp"
#include "steerfiber/mesh_io.hpp"
#include "steerfiber/raycast.hpp"
#include "steerfiber/sheath.hpp"

using namespace steerfiber;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Tolerances and budgets.
constexpr double kPhiMaxDeg = 107.15, kPhiTolDeg = 0.1;
constexpr double kMinRadius = 6.9, kMinRadiusTol = 0.1;
constexpr double kR2Floor = 1.0 - 1e-9;
constexpr double kSlopeRelTol = 1e-6;
constexpr double kIdentityTol = 1e-9;
constexpr double kRegistrationRms = 1e-9;
constexpr double kCoverageRatio = 2.0;
constexpr double kPowerExpected = 10.0 * 0.545 * 0.955;
constexpr double kPowerRounded = 5.205;

constexpr double kBudgetLimits = 1.0, kBudgetSafety = 10.0, kBudgetRaycast = 30.0, kBudgetCoverage = 600.0;

constexpr int kSafetyTrials = 100000;
constexpr int kIdentityTrials = 100000;
constexpr int kRaycastRays = 10000, kRaycastFaces = 5000;
constexpr int kRegistrationTrials = 1000;
constexpr std::uint64_t kCoverageSeed = 7;
constexpr int kCoverageConfigs = 10000, kCoverageRays = 1000;
constexpr int kDeterminismConfigs = 1000;

struct Outcome {
  bool pass;
  std::string detail;
};

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vec3 random_vec(std::mt19937_64& rng, double lo, double hi) {
  return {uniform(rng, lo, hi), uniform(rng, lo, hi), uniform(rng, lo, hi)};
}

Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  return Vec3(n(rng), n(rng), n(rng)).normalized();
}

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "steerfiber_acceptance";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Outcome max_bend_angle_check() {
  const CliResult r = cli({"limits"});
  if (r.code != kExitOk) return {false, "limits failed: " + r.err};
  const double phi = json::parse(r.out)["phi_max_deg"].get<double>();
  return {std::abs(phi - kPhiMaxDeg) <= kPhiTolDeg, fmt("phi_max = %.4f deg (expect %.2f +/- %.1f)", phi, kPhiMaxDeg, kPhiTolDeg)};
}

Outcome min_bend_radius_check() {
  const CliResult r = cli({"limits"});
  if (r.code != kExitOk) return {false, "limits failed: " + r.err};
  const double radius = json::parse(r.out)["min_bend_radius_mm"].get<double>();

  const SheathDesign d;
  std::mt19937_64 rng(2024);
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < kSafetyTrials; ++i) {
    const FiberConfig c{uniform(rng, 0, closure_displacement(d)), uniform(rng, 0, d.z_travel), uniform(rng, -10, 10)};
    const FiberKinematics fk = forward_kinematics(d, c);
    worst = std::min(worst, effective_bend_radius(d, c.dl));
    if (!std::isfinite(fk.tip.translation().norm())) return {false, "non-finite tip"};
  }
  const bool ok = std::abs(radius - kMinRadius) <= kMinRadiusTol && worst >= kFiberMinBendRadius;
  return {ok, fmt("min radius = %.4f mm (expect %.1f +/- %.1f); tightest over %d configs = %.4f mm (>= %.1f)", radius,
                  kMinRadius, kMinRadiusTol, kSafetyTrials, worst, kFiberMinBendRadius)};
}

Outcome linearity_check() {
  const SheathDesign d;
  const double closure = closure_displacement(d);
  std::vector<BendSample> samples;
  for (int i = 0; i <= 1000; ++i) {
    const double dl = closure * i / 1000.0;
    // Per-notch displacement on the abscissa.
    samples.push_back({dl / d.notch_count, forward_kinematics(d, {dl, 0, 0}).bend_angle});
  }
  const LineFit fit = fit_bend_line(samples);
  const double model = d.notch_count / (d.inner_radius + neutral_plane(d));
  const double rel = std::abs(fit.slope - model) / model;
  return {fit.r_squared >= kR2Floor && rel <= kSlopeRelTol,
          fmt("R^2 = 1 - %.2e; slope %.9f rad/mm vs n/(r_i+ybar) = %.9f (rel err %.2e)", 1.0 - fit.r_squared,
              fit.slope, model, rel)};
}

Outcome identities_check() {
  std::mt19937_64 rng(4);
  double subgroup = 0, ortho = 0, mirror = 0, closure = 0;
  const SheathDesign base;
  for (int i = 0; i < kIdentityTrials; ++i) {
    const Twist xi{random_vec(rng, -1, 1), random_vec(rng, -2, 2)};
    const double a = uniform(rng, 0, 3), b = uniform(rng, 0, 3);
    const Pose ab = exp_twist(xi, a) * exp_twist(xi, b);
    subgroup = std::max(subgroup, (ab.matrix() - exp_twist(xi, a + b).matrix()).cwiseAbs().maxCoeff());
    ortho = std::max(ortho, exp_twist(xi, a + b).orthonormality_error());

    const FiberConfig c{uniform(rng, 0, closure_displacement(base)), uniform(rng, 0, base.z_travel), 0.0};
    const Vec3 p0 = forward_kinematics(base, c).tip.translation();
    const Vec3 p1 = forward_kinematics(base, {c.dl, c.z, std::numbers::pi}).tip.translation();
    mirror = std::max(mirror, (p1 - Vec3(-p0.x(), -p0.y(), p0.z())).cwiseAbs().maxCoeff());

    SheathDesign d = base;
    d.notch_height = uniform(rng, 0.05, 0.4);
    d.notch_count = 1 + static_cast<int>(rng() % 30);
    d.cut_depth = uniform(rng, 0.6, 1.05);
    const ArcParams arc = notch_arc(closure_displacement_per_notch(d), d);
    closure = std::max(closure, std::abs(arc.angle() - max_bend_angle(d) / d.notch_count));
  }
  const double worst = std::max({subgroup, ortho, mirror, closure});
  return {worst <= kIdentityTol, fmt("max errors over %d trials: subgroup %.1e, orthonormality %.1e, mirror %.1e, "
                                     "closure angle %.1e (tol %.0e)",
                                     kIdentityTrials, subgroup, ortho, mirror, closure, kIdentityTol)};
}

Outcome raycast_check() {
  std::mt19937_64 rng(5);
  std::vector<Vec3> v;
  std::vector<Face> f;
  for (int i = 0; i < kRaycastFaces; ++i) {
    const Vec3 c = random_vec(rng, -10, 10);
    const auto k = static_cast<std::uint32_t>(v.size());
    for (int j = 0; j < 3; ++j) v.push_back(c + random_vec(rng, -1, 1));
    f.push_back({k, k + 1, k + 2});
  }
  const TriMesh mesh(std::move(v), std::move(f));
  int mismatches = 0, hits = 0;
  for (int i = 0; i < kRaycastRays; ++i) {
    const Ray ray{random_vec(rng, -12, 12), random_unit(rng)};
    const auto a = first_hit(ray, mesh);
    const auto b = first_hit_exhaustive(ray, mesh);
    if (a.has_value() != b.has_value() || (a && (a->face != b->face || a->t != b->t))) ++mismatches;
    if (a) ++hits;
  }
  return {mismatches == 0, fmt("%d rays x %d faces: %d mismatches (%d hits)", kRaycastRays, kRaycastFaces, mismatches, hits)};
}

Outcome coverage_check() {
  const fs::path dir = work_dir() / "coverage";
  const fs::path stl = dir / "larynx.stl";
  fs::create_directories(dir);
  const CliResult gen = cli({"gen-phantom", "--out", stl.string()});
  if (gen.code != kExitOk) return {false, "gen-phantom failed: " + gen.err};
  auto area = [&](const std::string& mode) -> std::optional<double> {
    const CliResult r = cli({"workspace", "--mesh", stl.string(), "--mode", mode, "--n", std::to_string(kCoverageConfigs),
                             "--rays", std::to_string(kCoverageRays), "--seed", std::to_string(kCoverageSeed),
                             "--out-dir", (dir / mode).string()});
    if (r.code != kExitOk) return std::nullopt;
    return json::parse(r.out)["coverage_cm2"].get<double>();
  };
  const auto steer = area("steerable");
  const auto straight = area("straight");
  if (!steer || !straight) return {false, "workspace run failed"};
  const double ratio = *steer / *straight;
  return {ratio >= kCoverageRatio, fmt("steerable %.2f cm^2, straight %.2f cm^2, ratio %.2f (>= %.1f); N=%d, %d rays, "
                                      "seed %llu",
                                      *steer, *straight, ratio, kCoverageRatio, kCoverageConfigs, kCoverageRays,
                                      static_cast<unsigned long long>(kCoverageSeed))};
}

Outcome determinism_check() {
  const fs::path dir = work_dir() / "determinism";
  auto once = [&](const std::string& threads) {
    return cli({"workspace", "--n", std::to_string(kDeterminismConfigs), "--seed", "7", "--threads", threads,
                "--out-dir", (dir / ("t" + threads)).string()});
  };
  const CliResult a = once("1");
  const CliResult b = once("4");
  if (a.code != kExitOk || b.code != kExitOk) return {false, "workspace failed: " + a.err + b.err};
  const std::string sa = read_file(dir / "t1" / "summary.json"), sb = read_file(dir / "t4" / "summary.json");
  const auto la = load_colored_mesh(dir / "t1" / "reachability.ply").face_labels;
  const auto lb = load_colored_mesh(dir / "t4" / "reachability.ply").face_labels;
  std::size_t reachable = 0;
  for (auto l : la) reachable += l;
  const bool same = sa == sb && la == lb && read_file(dir / "t1" / "faces.csv") == read_file(dir / "t4" / "faces.csv");
  return {same, fmt("threads 1 vs 4, N=%d: summary.json %s, reachable face sets %s (%zu faces)", kDeterminismConfigs,
                    sa == sb ? "identical" : "DIFFER", la == lb ? "identical" : "DIFFER", reachable)};
}

Outcome registration_check() {
  std::mt19937_64 rng(8);
  double worst = 0;
  for (int i = 0; i < kRegistrationTrials; ++i) {
    const Mat3 R = Eigen::AngleAxisd(uniform(rng, 0, std::numbers::pi), random_unit(rng)).toRotationMatrix();
    const Vec3 t = random_vec(rng, -100, 100);
    std::vector<Vec3> src, dst;
    for (int k = 0; k < 4; ++k) {
      src.push_back(random_vec(rng, -30, 30));
      dst.push_back(R * src.back() + t);
    }
    const RegistrationResult r = register_fiducials(src, dst);
    worst = std::max({worst, r.rms_error, (r.rotation - R).cwiseAbs().maxCoeff()});
  }
  bool rejected = false;
  try {
    const std::vector<Vec3> line{{0, 0, 0}, {1, 2, 3}, {2, 4, 6}, {-1, -2, -3}};
    register_fiducials(line, line);
  } catch (const DomainError&) {
    rejected = true;
  }
  return {worst < kRegistrationRms && rejected,
          fmt("%d exact 4-point transforms: worst rms/rotation error %.1e mm (< %.0e); collinear input %s",
              kRegistrationTrials, worst, kRegistrationRms, rejected ? "rejected" : "ACCEPTED")};
}

Outcome power_check() {
  const CliResult r = cli({"power", "--input-w", "10", "--bend-radius", "6"});
  if (r.code != kExitOk) return {false, "power failed: " + r.err};
  const double w = json::parse(r.out)["delivered_w"].get<double>();
  const bool ok = w == kPowerExpected && std::abs(w - kPowerRounded) < 5e-4;
  return {ok, fmt("10 W at 6 mm -> %.5f W (10 x 0.545 x 0.955 = %.5f; rounded %.3f)", w, kPowerExpected, kPowerRounded)};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;  // 0 = no runtime bound
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "max bend angle", kBudgetLimits, max_bend_angle_check},
      {2, "minimum bend radius + fiber safety", kBudgetSafety, min_bend_radius_check},
      {3, "model linearity", 0, linearity_check},
      {4, "kinematic identities", 0, identities_check},
      {5, "ray caster vs exhaustive scan", kBudgetRaycast, raycast_check},
      {6, "coverage doubling", kBudgetCoverage, coverage_check},
      {7, "determinism across threads", 0, determinism_check},
      {8, "registration", 0, registration_check},
      {9, "power budget", 0, power_check},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [over %.0f s budget]", c.budget_s);
    }
    std::printf("%s  AC%d %-36s %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%s\n", failures == 0 ? "ALL PASS" : fmt("%d FAILED", failures).c_str());
  return failures == 0 ? 0 : 1;
}
