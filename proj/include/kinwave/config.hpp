#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "kinwave/kinetics.hpp"
#include "kinwave/measures.hpp"
#include "kinwave/wave_finder.hpp"

namespace kinwave {

// One experiment description. Populated from JSON or from the plain key-value
// format (they are interchangeable), or from a named preset.
struct RunConfig {
  // measure: inline lists, or a density to discretize
  std::vector<double> velocities;
  std::vector<double> weights;
  bool has_density = false;
  DensitySpec density;
  std::size_t n = 0;
  QuadratureRule rule = QuadratureRule::midpoint;

  double chi_s = 0.25;
  double chi_n = 0.0;

  double alpha = 1.0;
  double d_s = 1.0;
  double d_n = 1.0;
  double gamma = 1.0;
  double n_plus = 1.0;
  double d_rho = 1.0;

  double L = 0.0;        // 0 selects the automatic field extent
  std::size_t nz = 4096;
  double dc = 0.0;       // 0 selects the default scan step

  VelocityMeasure build_measure() const;
  KineticParams build_params() const { return KineticParams(chi_s, chi_n); }
  FieldParams build_field_params() const {
    return FieldParams{alpha, d_s, gamma, d_n, n_plus};
  }

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::string& path);
  static RunConfig preset(const std::string& name);
  static std::vector<std::string> preset_names();
};

// Plain-text key-value configs: `key = value` lines, `[section]` headers for
// nesting, values in JSON syntax (bare words read as strings).
nlohmann::json parse_config_text(const std::string& text);

}  // namespace kinwave
