#include "steerfiber/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "steerfiber/calibration.hpp"
#include "steerfiber/config.hpp"
#include "steerfiber/errors.hpp"
#include "steerfiber/fileio.hpp"
#include "steerfiber/mesh_io.hpp"
#include "steerfiber/phantom.hpp"
#include "steerfiber/reachability.hpp"

namespace steerfiber {

namespace {

using Json = nlohmann::ordered_json;

// Non-finite values are not representable in JSON.
Json number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (!out_path.empty()) write_file_atomic(out_path, text);
  out << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(read_file(path));
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

double to_double(const std::string& cell, const std::string& where) {
  try {
    std::size_t used = 0;
    const double v = std::stod(cell, &used);
    if (cell.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(cell);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + cell + "'");
  }
}

bool is_header(const std::vector<std::string>& row) {
  try {
    to_double(row.at(0), "");
    return false;
  } catch (const ConfigError&) {
    return true;
  }
}

std::vector<Vec3> read_points(const std::string& path) {
  std::vector<Vec3> pts;
  auto rows = read_csv(path);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i == 0 && is_header(rows[i])) continue;
    const std::string where = path + " row " + std::to_string(i + 1);
    if (rows[i].size() != 3) throw ConfigError(where + ": expected x,y,z");
    pts.emplace_back(to_double(rows[i][0], where), to_double(rows[i][1], where), to_double(rows[i][2], where));
  }
  return pts;
}

Json pose_json(const Pose& p) {
  Json rot = Json::array();
  for (int r = 0; r < 3; ++r) rot.push_back({p.rotation()(r, 0), p.rotation()(r, 1), p.rotation()(r, 2)});
  return {{"position_mm", {p.translation().x(), p.translation().y(), p.translation().z()}}, {"rotation", rot}};
}

const char* mode_name(FiberMode m) { return m == FiberMode::kSteerable ? "steerable" : "straight"; }

// Shared --config handling: file first, then key=value overrides.
struct ConfigOptions {
  std::string path;
  std::vector<std::string> overrides;

  void add_to(CLI::App* app) {
    app->add_option("--config", path, "Config file (flat 'section.key = value' lines)");
    app->add_option("--set", overrides, "Override one config key, 'section.key=value' (repeatable)");
  }

  RunConfig load() const {
    RunConfig cfg = path.empty() ? RunConfig{} : load_config(path);
    for (const auto& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    return cfg;
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Steerable laser-fiber kinematics and reachable-workspace analysis.\n"
               "Lengths in mm, angles in degrees on the command line.",
               "steerfiber"};
  app.require_subcommand(1);
  app.footer("Config keys:\n" + config_keys_help());

  ConfigOptions cfg_opts;
  std::string out_path;

  // limits
  auto* limits = app.add_subcommand("limits", "Maximum bend angle, minimum bend radius and closure displacement");
  cfg_opts.add_to(limits);
  limits->add_option("--out", out_path, "Also write the JSON to this file");

  // fk
  auto* fk = app.add_subcommand("fk", "Forward kinematics of the steerable sheath");
  cfg_opts.add_to(fk);
  double fk_dl = 0.0, fk_z = 0.0, fk_theta = 0.0;
  bool fk_clamp = false, fk_backbone = false;
  fk->add_option("--dl", fk_dl, "Tendon displacement [mm]");
  fk->add_option("--z", fk_z, "Axial translation [mm]");
  fk->add_option("--theta", fk_theta, "Axial rotation [deg]");
  fk->add_flag("--clamp", fk_clamp, "Clamp tendon displacement at full closure instead of failing");
  fk->add_flag("--backbone", fk_backbone, "Include backbone sample positions [mm]");
  fk->add_option("--out", out_path, "Also write the JSON to this file");

  // bend-curve
  auto* curve = app.add_subcommand("bend-curve", "CSV of model bend angle versus tendon displacement");
  cfg_opts.add_to(curve);
  std::size_t curve_steps = 20;
  curve->add_option("--steps", curve_steps, "Intervals between zero and full closure [count]")->check(CLI::PositiveNumber);
  curve->add_option("--out", out_path, "Also write the CSV to this file");

  // workspace
  auto* ws = app.add_subcommand("workspace", "Sample configurations, cast laser and camera rays, map coverage");
  cfg_opts.add_to(ws);
  std::optional<std::string> ws_mesh, ws_mode, ws_out_dir, ws_visibility;
  std::optional<std::size_t> ws_n, ws_rays, ws_camera_rays;
  std::optional<std::uint64_t> ws_seed;
  std::optional<double> ws_scale;
  int ws_threads = 0;
  ws->add_option("--mesh", ws_mesh, "Anatomy STL [mm]; default: bundled larynx phantom");
  ws->add_option("--scale", ws_scale, "Multiply mesh coordinates by this factor [mm per file unit]");
  ws->add_option("--n", ws_n, "Configurations to sample [count]");
  ws->add_option("--rays", ws_rays, "Laser rays per configuration [count]");
  ws->add_option("--camera-rays", ws_camera_rays, "Camera rays per configuration [count]");
  ws->add_option("--seed", ws_seed, "RNG seed [integer]");
  ws->add_option("--mode", ws_mode, "Fiber mode: steerable|straight")->check(CLI::IsMember({"steerable", "straight"}));
  ws->add_option("--visibility", ws_visibility, "Camera gating: joint|pooled")->check(CLI::IsMember({"joint", "pooled"}));
  ws->add_option("--threads", ws_threads, "Worker threads, 0 = OpenMP default [count]")->check(CLI::NonNegativeNumber);
  ws->add_option("--out-dir", ws_out_dir, "Directory for reachability.ply, summary.json, faces.csv [path]");

  // fit
  auto* fit = app.add_subcommand("fit", "Least-squares line through (dl_mm, phi_deg) samples");
  std::string fit_in;
  fit->add_option("--in", fit_in, "CSV with columns dl_mm,phi_deg [mm, deg]")->required();
  fit->add_option("--out", out_path, "Also write the JSON to this file");

  // register
  auto* reg = app.add_subcommand("register", "Rigid registration of corresponding fiducials");
  std::string reg_src, reg_dst;
  reg->add_option("--src", reg_src, "CSV of source points x,y,z [mm]")->required();
  reg->add_option("--dst", reg_dst, "CSV of target points x,y,z in the same order [mm]")->required();
  reg->add_option("--out", out_path, "Also write the JSON to this file");

  // power
  auto* power = app.add_subcommand("power", "Laser power delivered through the coupling and the bent fiber");
  double power_in = 10.0;
  std::string power_radius = "6";
  power->add_option("--input-w", power_in, "Laser output power [W]");
  power->add_option("--bend-radius", power_radius, "Fiber bend radius [mm], 'inf' for straight");
  power->add_option("--out", out_path, "Also write the JSON to this file");

  // gen-phantom
  auto* phantom = app.add_subcommand("gen-phantom", "Write the bundled synthetic larynx phantom as binary STL");
  std::string phantom_out = "larynx_phantom.stl";
  phantom->add_option("--out", phantom_out, "Output STL path [path]");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (limits->parsed()) {
      const RunConfig cfg = cfg_opts.load();
      cfg.sheath.validate();
      Json j;
      j["phi_max_deg"] = rad_to_deg(max_bend_angle(cfg.sheath));
      j["min_bend_radius_mm"] = number(min_bend_radius(cfg.sheath));
      j["neutral_plane_mm"] = neutral_plane(cfg.sheath);
      j["closure_tendon_mm"] = closure_displacement(cfg.sheath);
      j["notch_count"] = cfg.sheath.notch_count;
      j["fiber_min_bend_radius_mm"] = kFiberMinBendRadius;
      emit(dump(j), out_path, out);
    } else if (fk->parsed()) {
      const RunConfig cfg = cfg_opts.load();
      const FiberConfig fc{fk_dl, fk_z, deg_to_rad(fk_theta)};
      const auto kin = forward_kinematics(cfg.sheath, fc, fk_clamp ? ClosurePolicy::kClamp : ClosurePolicy::kError);
      Json j;
      j["dl_mm"] = fk_dl;
      j["z_mm"] = fk_z;
      j["theta_deg"] = fk_theta;
      j["tip"] = pose_json(kin.tip);
      j["bend_angle_deg"] = rad_to_deg(kin.bend_angle);
      j["notch_kappa_per_mm"] = kin.notch.kappa;
      j["notch_arc_mm"] = kin.notch.s;
      j["clamped"] = kin.clamped;
      if (fk_backbone) {
        Json pts = Json::array();
        for (const Pose& p : kin.backbone) pts.push_back({p.translation().x(), p.translation().y(), p.translation().z()});
        j["backbone_mm"] = pts;
      }
      emit(dump(j), out_path, out);
    } else if (curve->parsed()) {
      const RunConfig cfg = cfg_opts.load();
      cfg.sheath.validate();
      const double closure = closure_displacement(cfg.sheath);
      std::ostringstream csv;
      csv << std::setprecision(12) << "dl_mm,phi_deg\n";
      for (std::size_t i = 0; i <= curve_steps; ++i) {
        const double dl = closure * static_cast<double>(i) / static_cast<double>(curve_steps);
        const auto kin = forward_kinematics(cfg.sheath, {dl, 0.0, 0.0}, ClosurePolicy::kClamp);
        csv << dl << "," << rad_to_deg(kin.bend_angle) << "\n";
      }
      emit(csv.str(), out_path, out);
    } else if (ws->parsed()) {
      RunConfig cfg = cfg_opts.load();
      if (ws_mesh) cfg.mesh_path = *ws_mesh;
      if (ws_scale) cfg.set("io.scale", std::to_string(*ws_scale));
      if (ws_n) cfg.sampling.n_configs = *ws_n;
      if (ws_rays) cfg.beam.rays_per_config = *ws_rays;
      if (ws_camera_rays) cfg.map.camera_rays = *ws_camera_rays;
      if (ws_seed) cfg.sampling.seed = *ws_seed;
      if (ws_mode) cfg.set("map.mode", *ws_mode);
      if (ws_visibility) cfg.set("map.visibility", *ws_visibility);
      if (ws_out_dir) cfg.out_dir = *ws_out_dir;
      cfg.validate();
      if (ws_threads > 0) omp_set_num_threads(ws_threads);

      const TriMesh mesh = cfg.mesh_path.empty() ? make_larynx_phantom() : load_mesh(cfg.mesh_path, cfg.mesh_scale);
      const ReachabilityMap map = build_map(mesh, cfg.device(), cfg.sampling, cfg.beam, cfg.map);
      if (map.warning) err << "warning: " << *map.warning << "\n";

      std::size_t laser_faces = 0;
      for (auto h : map.laser_hits) laser_faces += h > 0 ? 1 : 0;
      Json j;
      j["mesh"] = cfg.mesh_path.empty() ? std::string("bundled-larynx-phantom")
                                        : std::filesystem::path(cfg.mesh_path).filename().string();
      j["mode"] = mode_name(cfg.mode);
      j["seed"] = cfg.sampling.seed;
      j["configs_requested"] = cfg.sampling.n_configs;
      j["configs_evaluated"] = map.configs_evaluated;
      j["rays_per_config"] = cfg.beam.rays_per_config;
      j["divergence_deg"] = rad_to_deg(cfg.beam.divergence);
      j["camera_rays"] = cfg.map.camera_rays;
      j["visibility"] = cfg.map.visibility == VisibilityMode::kJoint ? "joint" : "pooled";
      j["camera_test"] = cfg.map.camera_test == CameraTest::kSpot ? "spot" : "sampled";
      j["faces_total"] = mesh.face_count();
      j["faces_laser_hit"] = laser_faces;
      j["faces_reachable"] = map.reachable_count();
      j["mesh_area_cm2"] = mesh.total_area() / 100.0;
      j["coverage_cm2"] = coverage_area(map);
      j["warning"] = map.warning ? Json(*map.warning) : Json(nullptr);

      std::ostringstream csv;
      csv << std::setprecision(17) << "face,area_mm2,laser_hits,camera_seen,jointly_reachable\n";
      for (std::size_t f = 0; f < mesh.face_count(); ++f) {
        csv << f << "," << map.face_areas[f] << "," << map.laser_hits[f] << "," << int{map.camera_seen[f]} << ","
            << int{map.jointly_reachable[f]} << "\n";
      }
      const std::string ply = encode_colored_ply(mesh, map.jointly_reachable);
      const std::string summary = dump(j);

      const std::filesystem::path dir(cfg.out_dir);
      std::filesystem::create_directories(dir);
      write_file_atomic(dir / "reachability.ply", ply);
      write_file_atomic(dir / "faces.csv", csv.str());
      write_file_atomic(dir / "summary.json", summary);
      out << summary;
    } else if (fit->parsed()) {
      std::vector<BendSample> samples;
      auto rows = read_csv(fit_in);
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == 0 && is_header(rows[i])) continue;
        const std::string where = fit_in + " row " + std::to_string(i + 1);
        if (rows[i].size() != 2) throw ConfigError(where + ": expected dl_mm,phi_deg");
        samples.push_back({to_double(rows[i][0], where), deg_to_rad(to_double(rows[i][1], where))});
      }
      const LineFit lf = fit_bend_line(samples);
      Json j;
      j["samples"] = samples.size();
      j["slope_deg_per_mm"] = rad_to_deg(lf.slope);
      j["slope_rad_per_mm"] = lf.slope;
      j["intercept_deg"] = rad_to_deg(lf.intercept);
      j["r_squared"] = lf.r_squared;
      j["max_abs_residual_deg"] = rad_to_deg(lf.max_abs_residual);
      emit(dump(j), out_path, out);
    } else if (reg->parsed()) {
      const auto src = read_points(reg_src);
      const auto dst = read_points(reg_dst);
      const RegistrationResult r = register_fiducials(src, dst);
      Json j = pose_json(r.pose());
      j["translation_mm"] = j["position_mm"];
      j.erase("position_mm");
      j["rms_error_mm"] = r.rms_error;
      j["points"] = src.size();
      emit(dump(j), out_path, out);
    } else if (power->parsed()) {
      const double radius = power_radius == "inf" ? std::numeric_limits<double>::infinity()
                                                  : to_double(power_radius, "--bend-radius");
      Json j;
      j["input_w"] = power_in;
      j["bend_radius_mm"] = number(radius);
      j["coupling_efficiency"] = kCouplingEfficiency;
      j["bend_loss"] = bend_loss(radius);
      j["delivered_w"] = power_budget(power_in, radius);
      emit(dump(j), out_path, out);
    } else if (phantom->parsed()) {
      const TriMesh mesh = make_larynx_phantom();
      save_stl(mesh, phantom_out);
      Json j;
      j["path"] = phantom_out;
      j["faces"] = mesh.face_count();
      j["area_cm2"] = mesh.total_area() / 100.0;
      out << dump(j);
    }
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace steerfiber
