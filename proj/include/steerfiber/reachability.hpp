#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "steerfiber/collision.hpp"
#include "steerfiber/endoscope.hpp"
#include "steerfiber/mesh.hpp"
#include "steerfiber/sheath.hpp"

namespace steerfiber {

struct BeamSpec {
  double divergence = deg_to_rad(40.0);  // full cone angle, rad
  std::size_t rays_per_config = 1000;
  double max_range = std::numeric_limits<double>::infinity();  // mm

  void validate() const;
};

enum class FiberMode { kSteerable, kStraight };
enum class VisibilityMode {
  kJoint,   // laser hit and camera view must coincide in one configuration
  kPooled,  // union of laser hits intersected with union of camera views
};

// Everything needed to place the device in the anatomy.
struct DeviceModel {
  SheathDesign sheath;
  ScopeDesign scope;
  FiberMode mode = FiberMode::kSteerable;

  // Straight mode locks dl to zero and drops any precurve.
  SheathDesign effective_sheath() const;
};

struct SceneConfig {
  ScopeConfig scope;
  FiberConfig fiber;

  bool operator==(const SceneConfig& o) const;
};

// Joint configuration as a 6-vector: insertion, roll, tip_bend, dl, z, theta.
using JointVector = std::array<double, 6>;
JointVector to_joints(const SceneConfig& c);
SceneConfig from_joints(const JointVector& q);

struct Placement {
  ScopeFrames scope;
  FiberKinematics fiber;
  Pose fiber_tip;  // world frame
  std::array<Backbone, 2> backbones;  // scope, fiber (world frame)
};

Placement place_device(const DeviceModel& model, const SceneConfig& config);

struct SamplingParams {
  std::size_t n_configs = 10000;
  std::uint64_t seed = 1;
  double clearance = 0.0;  // added to each body radius (mm)
  // Weights of the normalized-joint metric used for nearest-node search.
  JointVector metric_weights{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  double step_fraction = 0.1;     // RRT step, fraction of each joint range
  std::size_t budget_factor = 50;  // attempts allowed per requested node
};

struct SampleResult {
  std::vector<SceneConfig> configs;  // tree nodes, root first
  std::vector<std::int64_t> parents; // -1 for the root
  std::size_t attempts = 0;
  std::optional<std::string> warning;
};

// Joint bounds used by the sampler for this device.
std::array<std::pair<double, double>, 6> joint_bounds(const DeviceModel& model);

// True iff the configuration clears the mesh and respects the fiber bend
// limit.
bool config_valid(const DeviceModel& model, const SceneConfig& config, const TriMesh& mesh, double clearance);

// RRT over the six joints. Deterministic for a given seed; sequential.
SampleResult sample_configs(const TriMesh& mesh, const DeviceModel& model, const SamplingParams& params);

// Faces struck first by the laser cone (random directions from `seed`).
std::vector<std::uint32_t> cast_laser_cone(const Pose& tip, const BeamSpec& beam, const TriMesh& mesh,
                                           std::uint64_t seed);

// How a laser hit is checked against the camera in joint mode.
enum class CameraTest {
  kSpot,     // the camera has line of sight to the laser spot itself
  kSampled,  // the face is among camera_visible_faces(camera_rays)
};

struct MapOptions {
  VisibilityMode visibility = VisibilityMode::kJoint;
  CameraTest camera_test = CameraTest::kSpot;
  std::size_t camera_rays = 1000;  // Halton rays for the camera-visible set
};

struct ReachabilityMap {
  std::vector<double> face_areas;          // mm^2, copied from the mesh
  std::vector<std::uint64_t> laser_hits;   // rays landing on each face
  std::vector<std::uint8_t> camera_seen;   // seen by the camera in some config
  std::vector<std::uint8_t> jointly_reachable;
  std::size_t configs_evaluated = 0;
  std::uint64_t seed = 0;
  std::optional<std::string> warning;

  std::size_t reachable_count() const;
  bool operator==(const ReachabilityMap&) const = default;
};

// Accumulates a map for given configurations. Configurations are processed
// with OpenMP; the merge is order independent so the result does not depend
// on the worker count.
ReachabilityMap accumulate_map(const TriMesh& mesh, const DeviceModel& model, const std::vector<SceneConfig>& configs,
                               const BeamSpec& beam, std::uint64_t seed, const MapOptions& options = {});

// Single-threaded reference for accumulate_map.
ReachabilityMap accumulate_map_serial(const TriMesh& mesh, const DeviceModel& model,
                                      const std::vector<SceneConfig>& configs, const BeamSpec& beam,
                                      std::uint64_t seed, const MapOptions& options = {});

// Samples params.n_configs configurations and accumulates their map.
ReachabilityMap build_map(const TriMesh& mesh, const DeviceModel& model, const SamplingParams& params,
                          const BeamSpec& beam, const MapOptions& options = {});

// Jointly reachable area in cm^2.
double coverage_area(const ReachabilityMap& map);

}  // namespace steerfiber
