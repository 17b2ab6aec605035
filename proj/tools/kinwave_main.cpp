#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "kinwave/case_modes.hpp"
#include "kinwave/config.hpp"
#include "kinwave/csv.hpp"
#include "kinwave/errors.hpp"
#include "kinwave/fields.hpp"
#include "kinwave/kinetics.hpp"
#include "kinwave/measures.hpp"
#include "kinwave/oracles.hpp"
#include "kinwave/simd.hpp"
#include "kinwave/transfer.hpp"
#include "kinwave/wave_finder.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNoWave = 3;
constexpr int kExitNumerical = 4;

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir = ".";
  double c = std::numeric_limits<double>::quiet_NaN();
  double dc = 0.0;
  double t_end = 300.0;
  unsigned threads = 0;
};

unsigned pick_threads(const Options& opt) {
  if (opt.threads > 0) return opt.threads;
  if (const char* env = std::getenv("KINWAVE_THREADS")) {
    const long v = std::atol(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

kinwave::RunConfig load_config(const Options& opt) {
  if (!opt.preset.empty() && !opt.config_path.empty())
    throw kinwave::InvalidInput("give either --preset or --config, not both");
  kinwave::RunConfig cfg;
  if (!opt.preset.empty())
    cfg = kinwave::RunConfig::preset(opt.preset);
  else if (!opt.config_path.empty())
    cfg = kinwave::RunConfig::from_file(opt.config_path);
  if (opt.dc > 0.0) cfg.dc = opt.dc;
  return cfg;
}

fs::path ensure_out(const Options& opt) {
  fs::path dir(opt.out_dir);
  fs::create_directories(dir);
  return dir;
}

void write_profile_csv(const fs::path& path, const kinwave::TravellingWave& w) {
  const auto& m = w.profile.basis().measure;
  kinwave::CsvWriter csv(path.string());
  std::vector<std::string> names = {"z", "rho", "rho_minus", "rho_plus", "I"};
  for (std::size_t i = 0; i < m.size(); ++i)
    names.push_back("f_v" + std::to_string(i + 1));
  names.push_back("S");
  if (w.n) {
    names.push_back("N");
    names.push_back("u");
  }
  csv.header(names);
  std::vector<double> row;
  for (std::size_t j = 0; j < w.s.z.size(); ++j) {
    const double z = w.s.z[j];
    row.clear();
    row.push_back(z);
    row.push_back(w.profile.rho(z));
    row.push_back(w.profile.rho_side(z, -1));
    row.push_back(w.profile.rho_side(z, +1));
    row.push_back(w.profile.tumbling_density(z));
    for (std::size_t i = 0; i < m.size(); ++i) row.push_back(w.profile.f(z, i));
    row.push_back(w.s.value[j]);
    if (w.n) {
      row.push_back(w.n->n[j]);
      row.push_back(w.n->u[j]);
    }
    csv.row(row);
  }
}

json wave_to_json(const kinwave::TravellingWave& w) {
  json jw;
  jw["c"] = w.c;
  jw["upsilon"] = w.upsilon_value;
  json lm = json::array(), lp = json::array();
  for (const auto& mode : w.profile.basis().left) lm.push_back(mode.lambda);
  for (const auto& mode : w.profile.basis().right) lp.push_back(mode.lambda);
  jw["lambda_minus"] = lm;
  jw["lambda_plus"] = lp;
  jw["a"] = w.profile.left_weights();
  jw["b"] = w.profile.right_weights();
  jw["ansatz_valid"] = w.ansatz_valid;
  jw["kind"] = w.kind == kinwave::TravellingWave::Kind::stationary_cluster
                   ? "stationary_cluster"
                   : "travelling";
  return jw;
}

void write_scan_csv(const fs::path& dir, const kinwave::UpsilonScan& scan) {
  {
    kinwave::CsvWriter csv((dir / "scan.csv").string());
    csv.header({"c", "upsilon", "interval_id"});
    for (std::size_t j = 0; j < scan.c_values.size(); ++j)
      csv.row(std::vector<double>{scan.c_values[j], scan.upsilon_values[j],
                                  static_cast<double>(scan.interval_ids[j])});
  }
  {
    kinwave::CsvWriter csv((dir / "jumps.csv").string());
    csv.header({"v_index", "v", "upsilon_below", "upsilon_above", "jump"});
    for (const auto& rec : scan.jumps)
      csv.row(std::vector<double>{static_cast<double>(rec.v_index), rec.v,
                                  rec.upsilon_below, rec.upsilon_above,
                                  rec.jump()});
  }
}

int cmd_rates(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto p = cfg.build_params();
  std::cout << "T(z<0, v<c) = " << kinwave::format_full(p.t_mm()) << "\n"
            << "T(z<0, v>c) = " << kinwave::format_full(p.t_mp()) << "\n"
            << "T(z>0, v<c) = " << kinwave::format_full(p.t_pm()) << "\n"
            << "T(z>0, v>c) = " << kinwave::format_full(p.t_pp()) << "\n";
  const auto dir = ensure_out(opt);
  kinwave::CsvWriter csv((dir / "rates.csv").string());
  csv.header({"t_mm", "t_mp", "t_pm", "t_pp"});
  csv.row(std::vector<double>{p.t_mm(), p.t_mp(), p.t_pm(), p.t_pp()});
  return kExitOk;
}

int cmd_critical(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto w = kinwave::critical_speeds(m, p);
  std::cout << "c_lo = " << kinwave::format_full(w.c_lo) << "\n"
            << "c_hi = " << kinwave::format_full(w.c_hi) << "\n"
            << "scan window = (" << kinwave::format_full(std::max(0.0, w.c_lo))
            << ", " << kinwave::format_full(w.c_hi) << ")  [c >= 0 policy]\n";
  const auto dir = ensure_out(opt);
  kinwave::CsvWriter csv((dir / "critical_speeds.csv").string());
  csv.header({"c_lo", "c_hi"});
  csv.row(std::vector<double>{w.c_lo, w.c_hi});
  return kExitOk;
}

int cmd_modes(const Options& opt) {
  if (!std::isfinite(opt.c))
    throw kinwave::InvalidInput("modes: --c is required");
  const auto cfg = load_config(opt);
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto basis = kinwave::dispersion_roots(m, p, opt.c);
  std::cout << basis.left.size() << " left modes, " << basis.right.size()
            << " right modes at c = " << kinwave::format_full(opt.c) << "\n";
  for (const auto& mode : basis.left)
    std::cout << "left  lambda = " << kinwave::format_full(mode.lambda) << "\n";
  for (const auto& mode : basis.right)
    std::cout << "right lambda = " << kinwave::format_full(mode.lambda) << "\n";

  const auto dir = ensure_out(opt);
  kinwave::CsvWriter csv((dir / "modes.csv").string());
  std::vector<std::string> names = {"side", "lambda"};  // side: -1 left, +1 right
  for (std::size_t i = 0; i < m.size(); ++i)
    names.push_back("F_v" + std::to_string(i + 1));
  csv.header(names);
  const auto dump = [&](const kinwave::CaseMode& mode, double side) {
    std::vector<double> row = {side, mode.lambda};
    row.insert(row.end(), mode.profile.begin(), mode.profile.end());
    csv.row(row);
  };
  for (const auto& mode : basis.left) dump(mode, -1.0);
  for (const auto& mode : basis.right) dump(mode, +1.0);
  return kExitOk;
}

int cmd_scan(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto scan =
      kinwave::upsilon_scan(m, p, cfg.alpha, cfg.d_s, cfg.dc, pick_threads(opt));
  write_scan_csv(ensure_out(opt), scan);
  std::cout << scan.c_values.size() << " scan points on ("
            << kinwave::format_full(scan.c_lo) << ", "
            << kinwave::format_full(scan.c_hi) << "), "
            << scan.jumps.size() << " interior velocities\n";
  return kExitOk;
}

int run_wave(const kinwave::RunConfig& cfg, const fs::path& dir,
             unsigned threads) {
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto scan = kinwave::upsilon_scan(m, p, cfg.alpha, cfg.d_s, cfg.dc,
                                          threads);
  write_scan_csv(dir, scan);
  const auto waves = kinwave::find_waves(scan, m, p, cfg.build_field_params());

  json out;
  out["waves"] = json::array();
  std::size_t valid = 0;
  for (std::size_t k = 0; k < waves.size(); ++k) {
    out["waves"].push_back(wave_to_json(waves[k]));
    write_profile_csv(dir / ("wave_" + std::to_string(k) + "_profile.csv"),
                      waves[k]);
    if (waves[k].ansatz_valid) ++valid;
    std::cout << "wave " << k << ": c = " << kinwave::format_full(waves[k].c)
              << (waves[k].ansatz_valid ? "" : "  [ansatz check failed]")
              << "\n";
  }
  std::ofstream(dir / "waves.json") << out.dump(2) << "\n";
  std::cout << waves.size() << " roots, " << valid << " ansatz-valid waves\n";
  return valid > 0 ? kExitOk : kExitNoWave;
}

int cmd_wave(const Options& opt) {
  return run_wave(load_config(opt), ensure_out(opt), pick_threads(opt));
}

int cmd_cluster(const Options& opt) {
  const auto cfg = load_config(opt);
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto wave = kinwave::stationary_cluster(m, p, cfg.alpha, cfg.d_s);

  // symmetry residual on a sample grid
  double sym = 0.0;
  const auto grid = kinwave::default_zgrid(wave.profile, 100, 6.0);
  for (double z : grid)
    for (std::size_t i = 0; i < m.size(); ++i)
      sym = std::max(sym, std::abs(wave.profile.f(z, i) -
                                   wave.profile.f(-z, m.size() - 1 - i)));

  const auto dir = ensure_out(opt);
  write_profile_csv(dir / "cluster_profile.csv", wave);
  json out;
  out["c"] = 0.0;
  out["upsilon"] = wave.upsilon_value;
  out["symmetry_residual"] = sym;
  out["ansatz_valid"] = wave.ansatz_valid;
  std::ofstream(dir / "cluster.json") << out.dump(2) << "\n";
  std::cout << "stationary cluster: upsilon = "
            << kinwave::format_full(wave.upsilon_value)
            << ", symmetry residual = " << kinwave::format_full(sym) << "\n";
  return kExitOk;
}

int cmd_macro(const Options& opt) {
  const auto cfg = load_config(opt);
  const kinwave::MacroParams mp{cfg.chi_s, cfg.chi_n, cfg.alpha, cfg.d_s,
                                cfg.d_rho};
  const double c = kinwave::macro_speed(mp);
  const double residual =
      cfg.chi_n - c - cfg.chi_s * c / std::sqrt(c * c + 4 * cfg.alpha * cfg.d_s);
  json out;
  out["c"] = c;
  out["residual"] = residual;
  if (cfg.chi_n > 0.0) out["upsilon_at_c"] = kinwave::macro_upsilon(mp, c);
  const auto dir = ensure_out(opt);
  std::ofstream(dir / "macro.json") << out.dump(2) << "\n";
  std::cout << "macroscopic wave speed c = " << kinwave::format_full(c)
            << " (residual " << kinwave::format_full(residual) << ")\n";
  return kExitOk;
}

int cmd_relax(const Options& opt) {
  if (!std::isfinite(opt.c))
    throw kinwave::InvalidInput("relax: --c is required");
  const auto cfg = load_config(opt);
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();

  const double L = cfg.L > 0.0 ? cfg.L : 30.0;
  const std::size_t nz = cfg.nz;
  double a_max = 0.0;
  for (double v : m.velocities) a_max = std::max(a_max, std::abs(v - opt.c));
  const double dt = 0.4 * (2.0 * L / static_cast<double>(nz)) / a_max;

  const auto result = kinwave::relax_to_steady(m, p, opt.c, L, nz, dt,
                                               opt.t_end, nullptr, 1e-9);
  const auto profile =
      kinwave::solve_weights(kinwave::dispersion_roots(m, p, opt.c));
  const double dist = kinwave::l1_distance(result, m, profile);

  const auto dir = ensure_out(opt);
  {
    kinwave::CsvWriter csv((dir / "relax_profile.csv").string());
    std::vector<std::string> names = {"z", "rho", "rho_minus", "rho_plus", "I"};
    for (std::size_t i = 0; i < m.size(); ++i)
      names.push_back("f_v" + std::to_string(i + 1));
    csv.header(names);
    std::vector<double> row;
    for (std::size_t mc = 0; mc < result.z.size(); ++mc) {
      row.clear();
      row.push_back(result.z[mc]);
      double rho = 0.0, rm = 0.0, rp = 0.0, turn = 0.0;
      for (std::size_t i = 0; i < m.size(); ++i) {
        const double fv = result.f[i][mc];
        rho += m.weights[i] * fv;
        const bool above = m.velocities[i] > opt.c;
        (above ? rp : rm) += m.weights[i] * fv;
        turn += m.weights[i] * p.rate(result.z[mc] < 0 ? -1 : 1, above ? 1 : -1) * fv;
      }
      row.push_back(rho);
      row.push_back(rm);
      row.push_back(rp);
      row.push_back(turn);
      for (std::size_t i = 0; i < m.size(); ++i) row.push_back(result.f[i][mc]);
      csv.row(row);
    }
  }
  json out;
  out["l1_distance_to_modes"] = dist;
  out["steps"] = result.steps;
  out["t_final"] = result.t_final;
  out["residual_final"] = result.residual_history.empty()
                              ? 0.0
                              : result.residual_history.back();
  std::ofstream(dir / "relax.json") << out.dump(2) << "\n";
  std::cout << "relaxation vs mode profile: L1 distance = "
            << kinwave::format_full(dist) << " after " << result.steps
            << " steps\n";
  return kExitOk;
}

int reproduce_fig3(const fs::path& dir) {
  const auto cfg = kinwave::RunConfig::preset("fig3");
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto wave = kinwave::stationary_cluster(m, p, cfg.alpha, cfg.d_s);
  write_profile_csv(dir / "cluster_profile.csv", wave);

  const double half = 6.0 / wave.profile.lambda_principal_right();
  const auto rep = kinwave::overshoot_detect(wave.profile, half, 4001);
  kinwave::CsvWriter csv((dir / "overshoot.csv").string());
  csv.header({"v", "argmax_z", "overshooting"});
  for (std::size_t i = 0; i < m.size(); ++i) {
    const bool over =
        std::find(rep.overshooting.begin(), rep.overshooting.end(), i) !=
        rep.overshooting.end();
    csv.row(std::vector<double>{m.velocities[i], rep.argmax_z[i],
                                over ? 1.0 : 0.0});
  }
  json out;
  out["upsilon"] = wave.upsilon_value;
  out["overshoot_count"] = rep.overshooting.size();
  std::ofstream(dir / "summary.json") << out.dump(2) << "\n";
  return kExitOk;
}

int reproduce_fig5(const fs::path& dir) {
  const auto cfg = kinwave::RunConfig::preset("fig5");
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const auto w = kinwave::critical_speeds(m, p);
  const double width = w.c_hi - w.c_lo;
  const double offsets[] = {0.3,  0.1,  0.03, 0.01,
                            3e-3, 1e-3, 3e-4, 1e-4};

  // The exponents vanish at the true window ends, including a negative lower
  // end; the c >= 0 wave policy does not constrain this diagnostic sweep.
  kinwave::CsvWriter csv((dir / "flatness.csv").string());
  csv.header({"side", "t", "c", "lambda_principal"});
  for (double t : offsets) {
    const double c = w.c_lo + t * width;
    const auto basis = kinwave::dispersion_roots(m, p, c);
    csv.row(std::vector<double>{+1.0, t, c, basis.right.front().lambda});
  }
  for (double t : offsets) {
    const double c = w.c_hi - t * width;
    const auto basis = kinwave::dispersion_roots(m, p, c);
    csv.row(std::vector<double>{-1.0, t, c, basis.left.front().lambda});
  }
  return kExitOk;
}

int reproduce_fig7(const fs::path& dir) {
  const auto cfg = kinwave::RunConfig::preset("fig7");
  const auto m = cfg.build_measure();
  const auto p = cfg.build_params();
  const std::size_t v_index = 2;  // v = 0.5
  const double v = m.velocities[v_index];

  const double eps[] = {1e-4, 1e-5, 1e-6};
  std::vector<kinwave::WaveProfile> profiles;
  std::vector<double> cs;
  for (double e : eps) cs.push_back(v - e);
  for (double e : eps) cs.push_back(v + e);
  for (double c : cs)
    profiles.push_back(
        kinwave::solve_weights(kinwave::dispersion_roots(m, p, c)));

  {
    kinwave::CsvWriter csv((dir / "swap_profiles.csv").string());
    std::vector<std::string> names = {"z"};
    for (double c : cs) names.push_back("rho_c" + kinwave::format_full(c));
    csv.header(names);
    std::vector<double> row;
    for (int j = -1500; j <= 1500; ++j) {
      const double z = j * 0.004;
      row.clear();
      row.push_back(z);
      for (const auto& prof : profiles) row.push_back(prof.rho(z));
      csv.row(row);
    }
  }
  {
    kinwave::CsvWriter csv((dir / "swap_amplitudes.csv").string());
    csv.header({"c", "lambda_extreme", "transferred", "lower_bound"});
    for (std::size_t j = 0; j < cs.size(); ++j) {
      const bool below = cs[j] < v;
      const auto& prof = profiles[j];
      const auto& basis = prof.basis();
      const double lam = below ? basis.right.back().lambda
                               : basis.left.back().lambda;
      const double amp = below
                             ? prof.right_weights().back() *
                                   basis.right.back().mean
                             : prof.left_weights().back() *
                                   basis.left.back().mean;
      const double bound =
          below ? m.weights[v_index] * 4.0 * p.chi_s *
                      prof.rho_side(0.0, -1) / (p.t_pp() * p.t_mp())
                : m.weights[v_index] * 4.0 * p.chi_s *
                      prof.rho_side(0.0, +1) / (p.t_pm() * p.t_mm());
      csv.row(std::vector<double>{cs[j], lam, amp, bound});
    }
  }
  const auto rec = kinwave::jump_at(m, p, v_index, cfg.alpha, cfg.d_s);
  json out;
  out["v"] = rec.v;
  out["upsilon_below"] = rec.upsilon_below;
  out["upsilon_above"] = rec.upsilon_above;
  out["jump"] = rec.jump();
  out["transferred_from_below"] = rec.transferred_from_below;
  out["transferred_from_above"] = rec.transferred_from_above;
  std::ofstream(dir / "jump.json") << out.dump(2) << "\n";
  return kExitOk;
}

int reproduce_fig9(const fs::path& dir, unsigned threads) {
  for (double vmin : {0.1, 0.5, 0.8}) {
    auto cfg = kinwave::RunConfig::preset("fig9");
    cfg.velocities = {-1.0, -vmin, vmin, 1.0};
    cfg.weights = {1.0, 1.0, 1.0, 1.0};
    char label[32];
    std::snprintf(label, sizeof label, "vmin_%.1f", vmin);
    const fs::path sub = dir / label;
    fs::create_directories(sub);
    run_wave(cfg, sub, threads);  // exit code per variant ignored here
  }
  return kExitOk;
}

int cmd_reproduce(const Options& opt) {
  if (opt.preset.empty())
    throw kinwave::InvalidInput("reproduce: --preset is required");
  const auto dir = ensure_out(opt);
  const unsigned threads = pick_threads(opt);
  if (opt.preset == "fig3") return reproduce_fig3(dir);
  if (opt.preset == "fig5") return reproduce_fig5(dir);
  if (opt.preset == "fig7") return reproduce_fig7(dir);
  if (opt.preset == "fig8")
    return run_wave(kinwave::RunConfig::preset("fig8"), dir, threads);
  if (opt.preset == "fig9") return reproduce_fig9(dir, threads);
  if (opt.preset == "fig10") {
    const int rc = run_wave(kinwave::RunConfig::preset("fig10"), dir, threads);
    return rc == kExitNoWave ? kExitOk : rc;  // no wave is the expected outcome
  }
  throw kinwave::InvalidInput("unknown preset '" + opt.preset + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling waves of the discrete-velocity run-and-tumble "
               "chemotaxis system"};
  app.require_subcommand(1);
  app.fallthrough();

  Options opt;
  app.add_option("--threads", opt.threads, "worker threads (default: env KINWAVE_THREADS or all cores)");

  const auto add_common = [&](CLI::App* sub, bool with_c) {
    sub->add_option("--config", opt.config_path, "config file (JSON or key=value)");
    sub->add_option("--preset", opt.preset, "named preset (fig3, fig5, fig7, fig8, fig9, fig10)");
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--dc", opt.dc, "scan step override");
    if (with_c) sub->add_option("--c", opt.c, "wave speed");
  };

  auto* rates = app.add_subcommand("rates", "print the four tumbling rates");
  add_common(rates, false);
  auto* crit = app.add_subcommand("critical-speeds", "admissible speed window");
  add_common(crit, false);
  auto* modes = app.add_subcommand("modes", "dispersion exponents and mode profiles at --c");
  add_common(modes, true);
  auto* scan = app.add_subcommand("scan", "matching function over the speed window");
  add_common(scan, false);
  auto* wave = app.add_subcommand("wave", "locate and assemble travelling waves");
  add_common(wave, false);
  auto* cluster = app.add_subcommand("cluster", "stationary cluster (chi_n = 0)");
  add_common(cluster, false);
  auto* macro = app.add_subcommand("macro", "macroscopic diffusion-limit wave");
  add_common(macro, false);
  auto* relax = app.add_subcommand("relax", "time-marching relaxation vs the mode solve");
  add_common(relax, true);
  relax->add_option("--t-end", opt.t_end, "integration horizon");
  auto* repro = app.add_subcommand("reproduce", "write a figure dataset");
  add_common(repro, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (rates->parsed()) return cmd_rates(opt);
    if (crit->parsed()) return cmd_critical(opt);
    if (modes->parsed()) return cmd_modes(opt);
    if (scan->parsed()) return cmd_scan(opt);
    if (wave->parsed()) return cmd_wave(opt);
    if (cluster->parsed()) return cmd_cluster(opt);
    if (macro->parsed()) return cmd_macro(opt);
    if (relax->parsed()) return cmd_relax(opt);
    if (repro->parsed()) return cmd_reproduce(opt);
  } catch (const kinwave::InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const kinwave::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
