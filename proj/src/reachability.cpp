#include "steerfiber/reachability.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "steerfiber/cone.hpp"
#include "steerfiber/errors.hpp"
#include "steerfiber/raycast.hpp"

namespace steerfiber {

void BeamSpec::validate() const {
  if (!(divergence > 0.0 && divergence < std::numbers::pi)) throw DomainError("beam.divergence must lie in (0, 180) degrees");
  if (rays_per_config < 1) throw DomainError("beam.rays_per_config must be >= 1");
  if (!(max_range > 0.0)) throw DomainError("beam.max_range must be > 0");
}

SheathDesign DeviceModel::effective_sheath() const {
  SheathDesign s = sheath;
  if (mode == FiberMode::kStraight) s.precurve = 0.0;
  return s;
}

bool SceneConfig::operator==(const SceneConfig& o) const { return to_joints(*this) == to_joints(o); }

JointVector to_joints(const SceneConfig& c) {
  return {c.scope.insertion, c.scope.roll, c.scope.tip_bend, c.fiber.dl, c.fiber.z, c.fiber.theta};
}

SceneConfig from_joints(const JointVector& q) { return {{q[0], q[1], q[2]}, {q[3], q[4], q[5]}}; }

Placement place_device(const DeviceModel& model, const SceneConfig& config) {
  Placement out;
  out.scope = scope_frames(model.scope, config.scope);
  out.fiber = forward_kinematics(model.effective_sheath(), config.fiber);
  out.fiber_tip = out.scope.channel_exit * out.fiber.tip;
  out.backbones[0] = {out.scope.backbone, model.scope.radius()};
  out.backbones[1].radius = model.sheath.outer_radius;
  out.backbones[1].points.reserve(out.fiber.backbone.size());
  for (const Pose& p : out.fiber.backbone) {
    out.backbones[1].points.push_back(out.scope.channel_exit * p.translation());
  }
  return out;
}

std::array<std::pair<double, double>, 6> joint_bounds(const DeviceModel& model) {
  const SheathDesign sheath = model.effective_sheath();
  const double dl_max = model.mode == FiberMode::kStraight ? 0.0 : closure_displacement(sheath);
  constexpr double pi = std::numbers::pi;
  return {{{model.scope.insertion_min, model.scope.insertion_max},
           {-pi, pi},
           {model.scope.bend_min, model.scope.bend_max},
           {0.0, dl_max},
           {0.0, sheath.z_travel},
           {-pi, pi}}};
}

bool config_valid(const DeviceModel& model, const SceneConfig& config, const TriMesh& mesh, double clearance) {
  const SheathDesign sheath = model.effective_sheath();
  if (effective_bend_radius(sheath, config.fiber.dl) < kFiberMinBendRadius) return false;
  const Placement placement = place_device(model, config);
  return collision_free(placement.backbones, mesh, clearance);
}

SampleResult sample_configs(const TriMesh& mesh, const DeviceModel& model, const SamplingParams& params) {
  if (params.n_configs < 1) throw DomainError("sampling.n must be >= 1");
  if (!(params.step_fraction > 0.0)) throw DomainError("sampling.step_fraction must be > 0");
  model.scope.validate();
  model.sheath.validate();

  const auto bounds = joint_bounds(model);
  JointVector lo{}, span{};
  for (int k = 0; k < 6; ++k) {
    lo[k] = bounds[k].first;
    span[k] = bounds[k].second - bounds[k].first;
  }
  auto normalize = [&](const JointVector& q) {
    JointVector n{};
    for (int k = 0; k < 6; ++k) n[k] = span[k] > 0.0 ? (q[k] - lo[k]) / span[k] : 0.0;
    return n;
  };

  SampleResult out;
  const SceneConfig root{{model.scope.insertion_min, 0.0, 0.0}, {0.0, 0.0, 0.0}};
  if (!config_valid(model, root, mesh, params.clearance)) {
    out.warning = "start configuration is in collision; no configurations sampled";
    return out;
  }
  std::vector<JointVector> nodes{normalize(to_joints(root))};
  out.configs.push_back(root);
  out.parents.push_back(-1);

  std::mt19937_64 rng(params.seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  const std::size_t budget = params.budget_factor * params.n_configs;

  while (out.configs.size() < params.n_configs && out.attempts < budget) {
    ++out.attempts;
    JointVector target{};
    for (int k = 0; k < 6; ++k) target[k] = span[k] > 0.0 ? uniform() : 0.0;

    std::size_t nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      double d2 = 0.0;
      for (int k = 0; k < 6; ++k) {
        const double d = target[k] - nodes[i][k];
        d2 += params.metric_weights[k] * d * d;
      }
      if (d2 < best) {
        best = d2;
        nearest = i;
      }
    }
    const double dist = std::sqrt(best);
    if (!(dist > 0.0)) continue;
    const double f = std::min(1.0, params.step_fraction / dist);
    JointVector next{}, q{};
    for (int k = 0; k < 6; ++k) {
      next[k] = std::clamp(nodes[nearest][k] + f * (target[k] - nodes[nearest][k]), 0.0, 1.0);
      q[k] = std::clamp(lo[k] + next[k] * span[k], bounds[k].first, bounds[k].second);
    }
    const SceneConfig candidate = from_joints(q);
    if (!config_valid(model, candidate, mesh, params.clearance)) continue;
    nodes.push_back(next);
    out.configs.push_back(candidate);
    out.parents.push_back(static_cast<std::int64_t>(nearest));
  }
  if (out.configs.size() < params.n_configs) {
    out.warning = "sampled " + std::to_string(out.configs.size()) + " of " + std::to_string(params.n_configs) +
                  " configurations within " + std::to_string(budget) + " attempts";
  }
  return out;
}

std::vector<std::uint32_t> cast_laser_cone(const Pose& tip, const BeamSpec& beam, const TriMesh& mesh,
                                           std::uint64_t seed) {
  beam.validate();
  const auto dirs = random_cone(beam.rays_per_config, 0.5 * beam.divergence, seed);
  return cast_cone_faces(tip, dirs, mesh, beam.max_range);
}

std::size_t ReachabilityMap::reachable_count() const {
  return static_cast<std::size_t>(std::count(jointly_reachable.begin(), jointly_reachable.end(), 1));
}

namespace {

struct Accumulator {
  std::vector<std::uint64_t> laser_hits;
  std::vector<std::uint8_t> laser_seen;
  std::vector<std::uint8_t> camera_seen;
  std::vector<std::uint8_t> joint;

  explicit Accumulator(std::size_t faces) : laser_hits(faces, 0), laser_seen(faces, 0), camera_seen(faces, 0), joint(faces, 0) {}

  void merge(const Accumulator& o) {
    for (std::size_t f = 0; f < laser_hits.size(); ++f) {
      laser_hits[f] += o.laser_hits[f];
      laser_seen[f] |= o.laser_seen[f];
      camera_seen[f] |= o.camera_seen[f];
      joint[f] |= o.joint[f];
    }
  }
};

void evaluate_config(const TriMesh& mesh, const DeviceModel& model, const SceneConfig& config, const BeamSpec& beam,
                     std::uint64_t config_seed, const std::vector<Vec3>& camera_dirs, CameraTest test,
                     Accumulator& acc) {
  const Placement placement = place_device(model, config);
  const Pose& tip = placement.fiber_tip;
  const Pose& camera = placement.scope.camera;
  const auto seen = cast_cone_faces(camera, camera_dirs, mesh, model.scope.camera_range);
  for (std::uint32_t f : seen) acc.camera_seen[f] = 1;

  const auto laser_dirs = random_cone(beam.rays_per_config, 0.5 * beam.divergence, config_seed);
  for (const Vec3& local : laser_dirs) {
    const Ray ray{tip.translation(), (tip.rotation() * local).normalized()};
    const auto hit = first_hit(ray, mesh);
    if (!hit || hit->t > beam.max_range) continue;
    ++acc.laser_hits[hit->face];
    acc.laser_seen[hit->face] = 1;
    if (acc.joint[hit->face]) continue;
    const bool visible = test == CameraTest::kSpot
                             ? camera_sees_point(camera, model.scope, mesh, ray.origin + hit->t * ray.direction,
                                                 hit->face)
                             : std::binary_search(seen.begin(), seen.end(), hit->face);
    if (visible) acc.joint[hit->face] = 1;
  }
}

ReachabilityMap finish(const TriMesh& mesh, const Accumulator& acc, std::size_t configs, std::uint64_t seed,
                       const MapOptions& options) {
  ReachabilityMap map;
  map.face_areas = mesh.face_areas();
  map.laser_hits = acc.laser_hits;
  map.camera_seen = acc.camera_seen;
  map.configs_evaluated = configs;
  map.seed = seed;
  if (options.visibility == VisibilityMode::kJoint) {
    map.jointly_reachable = acc.joint;
  } else {
    map.jointly_reachable.resize(mesh.face_count());
    for (std::size_t f = 0; f < mesh.face_count(); ++f) {
      map.jointly_reachable[f] = acc.laser_seen[f] && acc.camera_seen[f] ? 1 : 0;
    }
  }
  return map;
}

void check_inputs(const DeviceModel& model, const BeamSpec& beam, const MapOptions& options) {
  beam.validate();
  model.scope.validate();
  model.sheath.validate();
  if (options.camera_rays < 1) throw DomainError("camera ray count must be >= 1");
}

}  // namespace

ReachabilityMap accumulate_map_serial(const TriMesh& mesh, const DeviceModel& model,
                                      const std::vector<SceneConfig>& configs, const BeamSpec& beam,
                                      std::uint64_t seed, const MapOptions& options) {
  check_inputs(model, beam, options);
  const auto camera_dirs = halton_cone(options.camera_rays, model.scope.camera_fov);
  Accumulator acc(mesh.face_count());
  for (std::size_t i = 0; i < configs.size(); ++i) {
    evaluate_config(mesh, model, configs[i], beam, mix_seed(seed, i), camera_dirs, options.camera_test, acc);
  }
  return finish(mesh, acc, configs.size(), seed, options);
}

ReachabilityMap accumulate_map(const TriMesh& mesh, const DeviceModel& model, const std::vector<SceneConfig>& configs,
                               const BeamSpec& beam, std::uint64_t seed, const MapOptions& options) {
  check_inputs(model, beam, options);
  const auto camera_dirs = halton_cone(options.camera_rays, model.scope.camera_fov);
  Accumulator total(mesh.face_count());
  const auto n = static_cast<std::int64_t>(configs.size());
#pragma omp parallel
  {
    Accumulator local(mesh.face_count());
#pragma omp for schedule(dynamic, 8) nowait
    for (std::int64_t i = 0; i < n; ++i) {
      evaluate_config(mesh, model, configs[i], beam, mix_seed(seed, static_cast<std::uint64_t>(i)), camera_dirs,
                      options.camera_test, local);
    }
#pragma omp critical(steerfiber_map_merge)
    total.merge(local);
  }
  return finish(mesh, total, configs.size(), seed, options);
}

ReachabilityMap build_map(const TriMesh& mesh, const DeviceModel& model, const SamplingParams& params,
                          const BeamSpec& beam, const MapOptions& options) {
  if (params.n_configs == 0) {
    check_inputs(model, beam, options);
    return finish(mesh, Accumulator(mesh.face_count()), 0, params.seed, options);
  }
  SampleResult samples = sample_configs(mesh, model, params);
  ReachabilityMap map = accumulate_map(mesh, model, samples.configs, beam, params.seed, options);
  map.warning = samples.warning;
  return map;
}

double coverage_area(const ReachabilityMap& map) {
  double mm2 = 0.0;
  for (std::size_t f = 0; f < map.face_areas.size(); ++f) {
    if (map.jointly_reachable[f]) mm2 += map.face_areas[f];
  }
  return mm2 / 100.0;
}

}  // namespace steerfiber
