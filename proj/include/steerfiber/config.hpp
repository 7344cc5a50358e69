#pragma once

#include <string>
#include <string_view>

#include "steerfiber/reachability.hpp"

namespace steerfiber {

// Everything a CLI run can configure. Config files are flat `key = value`
// lines with dotted section prefixes; `#` starts a comment. Angles are in
// degrees (keys ending in `_deg`), lengths in millimetres.
struct RunConfig {
  SheathDesign sheath;
  ScopeDesign scope;
  BeamSpec beam;
  SamplingParams sampling;
  MapOptions map;
  FiberMode mode = FiberMode::kSteerable;
  std::string mesh_path;  // empty: use the bundled phantom
  double mesh_scale = 1.0;
  std::string out_dir = ".";

  DeviceModel device() const { return {sheath, scope, mode}; }

  // Applies one key. Throws ConfigError naming the key on unknown keys or
  // unparsable values.
  void set(std::string_view key, std::string_view value);

  // Throws ConfigError if any sub-invariant fails.
  void validate() const;
};

// Parses config text on top of `base`. Unknown keys are rejected.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

// Every recognised key with its unit, for help output.
std::string config_keys_help();

}  // namespace steerfiber
