#include "thzqs/config.hpp"

#include <fstream>
#include <set>

#include "thzqs/errors.hpp"

namespace thzqs {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
  if (!j.is_object())
    throw ConfigError("config: '" + path + "' must be an object");
  for (const auto& [key, _] : j.items()) {
    if (!allowed.count(key))
      throw ConfigError("config: unknown key '" +
                        (path.empty() ? key : path + "." + key) + "'");
  }
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number())
    throw ConfigError("config: '" + path + "' must be a number");
  return j.get<double>();
}

int get_int(const json& j, const std::string& path) {
  if (!j.is_number_integer())
    throw ConfigError("config: '" + path + "' must be an integer");
  return j.get<int>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean())
    throw ConfigError("config: '" + path + "' must be a boolean");
  return j.get<bool>();
}

template <typename Setter>
void maybe(const json& j, const char* key, Setter set) {
  if (j.contains(key)) set(j.at(key));
}

void parse_crystal(const json& j, CrystalParams& c) {
  require_keys(j, "crystal",
               {"length_m", "poling_period_m", "pump_wavelength_m",
                "pump_waist_m", "temperature_K"});
  maybe(j, "length_m",
        [&](const json& v) { c.length_m = get_number(v, "crystal.length_m"); });
  maybe(j, "poling_period_m", [&](const json& v) {
    c.poling_period_m = get_number(v, "crystal.poling_period_m");
  });
  maybe(j, "pump_wavelength_m", [&](const json& v) {
    c.pump_wavelength_m = get_number(v, "crystal.pump_wavelength_m");
  });
  maybe(j, "pump_waist_m", [&](const json& v) {
    c.pump_waist_m = get_number(v, "crystal.pump_waist_m");
  });
  maybe(j, "temperature_K", [&](const json& v) {
    c.temperature_K = get_number(v, "crystal.temperature_K");
  });
}

void parse_aperture(const json& j, ApertureModel& a) {
  require_keys(j, "aperture", {"theta_i_max_rad", "tir_cap_rad"});
  maybe(j, "theta_i_max_rad", [&](const json& v) {
    a.theta_i_max_rad = get_number(v, "aperture.theta_i_max_rad");
  });
  maybe(j, "tir_cap_rad", [&](const json& v) {
    a.tir_cap_rad = get_number(v, "aperture.tir_cap_rad");
  });
}

void parse_quadrature(const json& j, QuadratureSpec& q) {
  require_keys(j, "quadrature",
               {"n_omega", "n_theta", "rel_tol", "check_convergence",
                "window_lobes", "theta_grid_max_rad"});
  maybe(j, "n_omega",
        [&](const json& v) { q.n_omega = get_int(v, "quadrature.n_omega"); });
  maybe(j, "n_theta",
        [&](const json& v) { q.n_theta = get_int(v, "quadrature.n_theta"); });
  maybe(j, "rel_tol", [&](const json& v) {
    q.rel_tol = get_number(v, "quadrature.rel_tol");
  });
  maybe(j, "check_convergence", [&](const json& v) {
    q.check_convergence = get_bool(v, "quadrature.check_convergence");
  });
  maybe(j, "window_lobes", [&](const json& v) {
    q.window_lobes = get_number(v, "quadrature.window_lobes");
  });
  maybe(j, "theta_grid_max_rad", [&](const json& v) {
    q.theta_grid_max_rad = get_number(v, "quadrature.theta_grid_max_rad");
  });
}

void parse_scan(const json& j, ScanConfig& s) {
  require_keys(j, "scan",
               {"step_m", "span_m", "exposure_s", "repeats", "roi_pixels_x",
                "roi_pixels_y", "path_offset_m", "fixed_position_m"});
  maybe(j, "step_m",
        [&](const json& v) { s.step_m = get_number(v, "scan.step_m"); });
  maybe(j, "span_m",
        [&](const json& v) { s.span_m = get_number(v, "scan.span_m"); });
  maybe(j, "exposure_s", [&](const json& v) {
    s.exposure_s = get_number(v, "scan.exposure_s");
  });
  maybe(j, "repeats",
        [&](const json& v) { s.repeats = get_int(v, "scan.repeats"); });
  maybe(j, "roi_pixels_x", [&](const json& v) {
    s.roi_pixels_x = get_int(v, "scan.roi_pixels_x");
  });
  maybe(j, "roi_pixels_y", [&](const json& v) {
    s.roi_pixels_y = get_int(v, "scan.roi_pixels_y");
  });
  maybe(j, "path_offset_m", [&](const json& v) {
    s.path_offset_m = get_number(v, "scan.path_offset_m");
  });
  maybe(j, "fixed_position_m", [&](const json& v) {
    s.fixed_position_m = get_number(v, "scan.fixed_position_m");
  });
}

void parse_noise(const json& j, NoiseModel& n) {
  require_keys(j, "noise",
               {"background_cps_per_pixel", "dark_cps_per_pixel",
                "readout_e_rms", "laser_rel_rms", "quantum_efficiency",
                "calibration_cps_per_pixel", "shot_noise"});
  maybe(j, "background_cps_per_pixel", [&](const json& v) {
    n.background_cps_per_pixel =
        get_number(v, "noise.background_cps_per_pixel");
  });
  maybe(j, "dark_cps_per_pixel", [&](const json& v) {
    n.dark_cps_per_pixel = get_number(v, "noise.dark_cps_per_pixel");
  });
  maybe(j, "readout_e_rms", [&](const json& v) {
    n.readout_e_rms = get_number(v, "noise.readout_e_rms");
  });
  maybe(j, "laser_rel_rms", [&](const json& v) {
    n.laser_rel_rms = get_number(v, "noise.laser_rel_rms");
  });
  maybe(j, "quantum_efficiency", [&](const json& v) {
    n.quantum_efficiency = get_number(v, "noise.quantum_efficiency");
  });
  maybe(j, "calibration_cps_per_pixel", [&](const json& v) {
    n.calibration_cps_per_pixel =
        get_number(v, "noise.calibration_cps_per_pixel");
  });
  maybe(j, "shot_noise", [&](const json& v) {
    n.shot_noise = get_bool(v, "noise.shot_noise");
  });
}

void parse_object(const json& j, ObjectPlate& o) {
  require_keys(j, "object", {"n", "sigma_n", "d_m", "fresnel"});
  maybe(j, "n", [&](const json& v) { o.n = get_number(v, "object.n"); });
  maybe(j, "sigma_n",
        [&](const json& v) { o.sigma_n = get_number(v, "object.sigma_n"); });
  maybe(j, "d_m", [&](const json& v) { o.d_m = get_number(v, "object.d_m"); });
  maybe(j, "fresnel",
        [&](const json& v) { o.fresnel = get_bool(v, "object.fresnel"); });
}

void parse_gain(const json& j, GainCurve& g, std::vector<double>& powers) {
  require_keys(j, "gain", {"v0_per_watt", "reference_power_W", "powers_W"});
  maybe(j, "v0_per_watt", [&](const json& v) {
    g.v0_per_watt = get_number(v, "gain.v0_per_watt");
  });
  maybe(j, "reference_power_W", [&](const json& v) {
    g.reference_power_W = get_number(v, "gain.reference_power_W");
  });
  maybe(j, "powers_W", [&](const json& v) {
    if (!v.is_array())
      throw ConfigError("config: 'gain.powers_W' must be an array");
    powers.clear();
    for (std::size_t i = 0; i < v.size(); ++i)
      powers.push_back(get_number(v.at(i), "gain.powers_W"));
  });
}

void parse_spectrum(const json& j, SpectrumGridConfig& s) {
  require_keys(j, "spectrum",
               {"nu_min_THz", "nu_max_THz", "nu_points", "theta_s_max_rad",
                "theta_points"});
  maybe(j, "nu_min_THz", [&](const json& v) {
    s.nu_min_THz = get_number(v, "spectrum.nu_min_THz");
  });
  maybe(j, "nu_max_THz", [&](const json& v) {
    s.nu_max_THz = get_number(v, "spectrum.nu_max_THz");
  });
  maybe(j, "nu_points", [&](const json& v) {
    s.nu_points = get_int(v, "spectrum.nu_points");
  });
  maybe(j, "theta_s_max_rad", [&](const json& v) {
    s.theta_s_max_rad = get_number(v, "spectrum.theta_s_max_rad");
  });
  maybe(j, "theta_points", [&](const json& v) {
    s.theta_points = get_int(v, "spectrum.theta_points");
  });
}

}  // namespace

RunConfig RunConfig::defaults() { return RunConfig{}; }

RunConfig RunConfig::from_json(const json& j) {
  RunConfig cfg;
  require_keys(j, "",
               {"crystal", "dispersion_file", "branches", "aperture",
                "quadrature", "scan", "noise", "object", "gain", "spectrum",
                "phi0_rad", "seed", "out_dir"});
  if (j.contains("crystal")) parse_crystal(j.at("crystal"), cfg.crystal);
  maybe(j, "dispersion_file", [&](const json& v) {
    if (!v.is_string())
      throw ConfigError("config: 'dispersion_file' must be a string");
    cfg.dispersion_file = v.get<std::string>();
  });
  maybe(j, "branches", [&](const json& v) {
    if (!v.is_array())
      throw ConfigError("config: 'branches' must be an array");
    cfg.branches.clear();
    for (const auto& b : v) {
      const std::string name = b.is_string() ? b.get<std::string>() : "";
      if (name == "stokes")
        cfg.branches.push_back(Conversion::Stokes);
      else if (name == "antistokes")
        cfg.branches.push_back(Conversion::AntiStokes);
      else
        throw ConfigError(
            "config: 'branches' entries must be 'stokes' or 'antistokes'");
    }
  });
  if (j.contains("aperture")) parse_aperture(j.at("aperture"), cfg.aperture);
  if (j.contains("quadrature"))
    parse_quadrature(j.at("quadrature"), cfg.quadrature);
  if (j.contains("scan")) parse_scan(j.at("scan"), cfg.scan);
  if (j.contains("noise")) parse_noise(j.at("noise"), cfg.noise);
  if (j.contains("object")) parse_object(j.at("object"), cfg.object);
  if (j.contains("gain")) parse_gain(j.at("gain"), cfg.gain, cfg.powers_W);
  if (j.contains("spectrum")) parse_spectrum(j.at("spectrum"), cfg.spectrum);
  maybe(j, "phi0_rad",
        [&](const json& v) { cfg.phi0_rad = get_number(v, "phi0_rad"); });
  maybe(j, "seed", [&](const json& v) {
    if (!v.is_number_unsigned() && !v.is_number_integer())
      throw ConfigError("config: 'seed' must be an integer");
    cfg.seed = v.get<std::uint64_t>();
  });
  maybe(j, "out_dir", [&](const json& v) {
    if (!v.is_string())
      throw ConfigError("config: 'out_dir' must be a string");
    cfg.out_dir = v.get<std::string>();
  });
  cfg.validate();
  return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

json RunConfig::to_json() const {
  json j;
  j["crystal"] = {{"length_m", crystal.length_m},
                  {"poling_period_m", crystal.poling_period_m},
                  {"pump_wavelength_m", crystal.pump_wavelength_m},
                  {"pump_waist_m", crystal.pump_waist_m},
                  {"temperature_K", crystal.temperature_K}};
  j["dispersion_file"] = dispersion_file;
  j["branches"] = json::array();
  for (auto b : branches) j["branches"].push_back(to_string(b));
  j["aperture"] = {{"theta_i_max_rad", aperture.theta_i_max_rad},
                   {"tir_cap_rad", aperture.tir_cap_rad}};
  j["quadrature"] = {{"n_omega", quadrature.n_omega},
                     {"n_theta", quadrature.n_theta},
                     {"rel_tol", quadrature.rel_tol},
                     {"check_convergence", quadrature.check_convergence},
                     {"window_lobes", quadrature.window_lobes},
                     {"theta_grid_max_rad", quadrature.theta_grid_max_rad}};
  j["scan"] = {{"step_m", scan.step_m},
               {"span_m", scan.span_m},
               {"exposure_s", scan.exposure_s},
               {"repeats", scan.repeats},
               {"roi_pixels_x", scan.roi_pixels_x},
               {"roi_pixels_y", scan.roi_pixels_y},
               {"path_offset_m", scan.path_offset_m},
               {"fixed_position_m", scan.fixed_position_m}};
  j["noise"] = {{"background_cps_per_pixel", noise.background_cps_per_pixel},
                {"dark_cps_per_pixel", noise.dark_cps_per_pixel},
                {"readout_e_rms", noise.readout_e_rms},
                {"laser_rel_rms", noise.laser_rel_rms},
                {"quantum_efficiency", noise.quantum_efficiency},
                {"calibration_cps_per_pixel", noise.calibration_cps_per_pixel},
                {"shot_noise", noise.shot_noise}};
  j["object"] = {{"n", object.n},
                 {"sigma_n", object.sigma_n},
                 {"d_m", object.d_m},
                 {"fresnel", object.fresnel}};
  j["gain"] = {{"v0_per_watt", gain.v0_per_watt},
               {"reference_power_W", gain.reference_power_W},
               {"powers_W", powers_W}};
  j["spectrum"] = {{"nu_min_THz", spectrum.nu_min_THz},
                   {"nu_max_THz", spectrum.nu_max_THz},
                   {"nu_points", spectrum.nu_points},
                   {"theta_s_max_rad", spectrum.theta_s_max_rad},
                   {"theta_points", spectrum.theta_points}};
  j["phi0_rad"] = phi0_rad;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j;
}

void RunConfig::validate() const {
  try {
    aperture.validate();
    quadrature.validate();
    scan.validate();
    noise.validate();
    gain.validate(powers_W);
  } catch (const DomainError& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (branches.empty())
    throw ConfigError("config: 'branches' must not be empty");
  if (object.d_m < 0.0)
    throw ConfigError("config: 'object.d_m' must be >= 0");
  if (object.d_m > 0.0 && !(object.n > 1.0))
    throw ConfigError("config: 'object.n' must be > 1");
  if (spectrum.nu_points < 2 || spectrum.theta_points < 2 ||
      !(spectrum.nu_max_THz > spectrum.nu_min_THz) ||
      !(spectrum.nu_min_THz > 0))
    throw ConfigError("config: bad 'spectrum' grid");
  if (!(crystal.length_m > 0) || !(crystal.poling_period_m > 0) ||
      !(crystal.pump_wavelength_m > 0) || !(crystal.pump_waist_m > 0) ||
      !(crystal.temperature_K >= 0))
    throw ConfigError("config: 'crystal' values must be positive");
}

}  // namespace thzqs
