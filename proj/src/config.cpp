#include "kinwave/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kinwave/errors.hpp"

namespace kinwave {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

nlohmann::json parse_value(const std::string& raw) {
  const std::string v = trim(raw);
  try {
    return nlohmann::json::parse(v);
  } catch (const nlohmann::json::parse_error&) {
    return nlohmann::json(v);  // bare word -> string
  }
}

DensityKind density_kind_from_string(const std::string& s) {
  if (s == "uniform") return DensityKind::uniform;
  if (s == "semicircle" || s == "circle-projection")
    return DensityKind::semicircle;
  if (s == "ball2d-projection") return DensityKind::ball2d;
  if (s == "ball3d-projection") return DensityKind::ball3d;
  if (s == "exp-bump") return DensityKind::exp_bump;
  if (s == "custom-table") return DensityKind::table;
  throw InvalidInput("config: unknown density kind '" + s + "'");
}

}  // namespace

nlohmann::json parse_config_text(const std::string& text) {
  nlohmann::json root = nlohmann::json::object();
  nlohmann::json* scope = &root;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw InvalidInput("config: bad section header at line " +
                           std::to_string(lineno));
      const std::string name = trim(line.substr(1, line.size() - 2));
      root[name] = nlohmann::json::object();
      scope = &root[name];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidInput("config: expected key = value at line " +
                         std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    (*scope)[key] = parse_value(line.substr(eq + 1));
  }
  return root;
}

VelocityMeasure RunConfig::build_measure() const {
  if (!velocities.empty()) {
    std::vector<double> w = weights;
    if (w.empty()) w.assign(velocities.size(), 1.0);
    return make_discrete(velocities, w);
  }
  if (has_density) {
    if (n == 0) throw InvalidInput("config: density measure needs n");
    return quadrature(density, n, rule);
  }
  throw InvalidInput("config: no velocity measure given");
}

RunConfig RunConfig::from_json(const nlohmann::json& j) {
  RunConfig cfg;
  const auto get_num = [&](const char* key, double& out) {
    if (j.contains(key)) out = j.at(key).get<double>();
  };
  if (j.contains("velocities"))
    cfg.velocities = j.at("velocities").get<std::vector<double>>();
  if (j.contains("weights"))
    cfg.weights = j.at("weights").get<std::vector<double>>();
  if (j.contains("density")) {
    const auto& d = j.at("density");
    cfg.has_density = true;
    cfg.density.kind = density_kind_from_string(d.at("kind").get<std::string>());
    if (d.contains("v0")) cfg.density.v0 = d.at("v0").get<double>();
    if (d.contains("a")) cfg.density.a = d.at("a").get<double>();
    if (d.contains("b")) cfg.density.b = d.at("b").get<double>();
    if (d.contains("xs")) cfg.density.xs = d.at("xs").get<std::vector<double>>();
    if (d.contains("ys")) cfg.density.ys = d.at("ys").get<std::vector<double>>();
  }
  if (j.contains("n")) cfg.n = j.at("n").get<std::size_t>();
  if (j.contains("rule")) {
    const std::string r = j.at("rule").get<std::string>();
    if (r == "midpoint")
      cfg.rule = QuadratureRule::midpoint;
    else if (r == "gauss-legendre")
      cfg.rule = QuadratureRule::gauss_legendre;
    else
      throw InvalidInput("config: unknown quadrature rule '" + r + "'");
  }
  get_num("chi_s", cfg.chi_s);
  get_num("chi_n", cfg.chi_n);
  get_num("alpha", cfg.alpha);
  get_num("d_s", cfg.d_s);
  get_num("d_n", cfg.d_n);
  get_num("gamma", cfg.gamma);
  get_num("n_plus", cfg.n_plus);
  get_num("d_rho", cfg.d_rho);
  get_num("L", cfg.L);
  get_num("dc", cfg.dc);
  if (j.contains("nz")) cfg.nz = j.at("nz").get<std::size_t>();
  if (j.contains("beta")) {
    const double beta = j.at("beta").get<double>();
    if (beta != 1.0)
      throw InvalidInput("config: beta is fixed to 1");
  }
  return cfg;
}

RunConfig RunConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  // JSON and the key-value format are accepted interchangeably.
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{')
    return from_json(nlohmann::json::parse(text));
  return from_json(parse_config_text(text));
}

std::vector<std::string> RunConfig::preset_names() {
  return {"fig3", "fig5", "fig7", "fig8", "fig9", "fig10"};
}

RunConfig RunConfig::preset(const std::string& name) {
  RunConfig cfg;
  cfg.chi_s = 0.48;
  cfg.chi_n = 0.44;
  cfg.alpha = 50.0;
  cfg.d_s = 0.5;
  if (name == "fig3") {
    cfg.chi_n = 0.0;
    cfg.has_density = true;
    cfg.density.kind = DensityKind::uniform;
    cfg.density.v0 = 1.0;
    cfg.n = 64;
    return cfg;
  }
  if (name == "fig5" || name == "fig7" || name == "fig8" || name == "fig9") {
    cfg.velocities = {-1.0, -0.5, 0.5, 1.0};
    cfg.weights = {1.0, 1.0, 1.0, 1.0};
    return cfg;
  }
  if (name == "fig10") {
    cfg.has_density = true;
    cfg.density.kind = DensityKind::exp_bump;
    cfg.density.v0 = 1.0;
    cfg.density.a = 5.0;
    cfg.density.b = 4.0;
    cfg.n = 200;              // dv = 0.01
    cfg.dc = 0.01 / 3.0;      // dc = dv / 3
    return cfg;
  }
  throw InvalidInput("unknown preset '" + name + "'");
}

}  // namespace kinwave
