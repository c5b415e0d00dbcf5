#include "tfsrc/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "tfsrc/errors.hpp"

namespace tfsrc {

namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"problem", {"alpha", "t_final", "n_steps"}},
      {"operator", {"family", "n_modes", "eps"}},
      {"measurement", {"functional", "x", "gamma"}},
      {"data", {"a", "r", "g", "h", "e_data"}},
      {"solver", {"tol", "max_iter", "relaxation", "anderson_depth"}},
      {"output", {"dir", "modes"}},
      {"perturb", {"e_scale", "a_sine", "g_scale"}},
  };
  return keys;
}

std::vector<std::string> split_words(const std::string& desc) {
  std::istringstream in(desc);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

double to_number(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("expected a number for " + what + ", got '" + text + "'");
  }
}

long to_integer(const std::string& text, const std::string& what) {
  const double v = to_number(text, what);
  if (v != std::floor(v)) throw ConfigError("expected an integer for " + what + ", got '" + text + "'");
  return static_cast<long>(v);
}

bool to_bool(const std::string& text, const std::string& what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("expected true/false for " + what + ", got '" + text + "'");
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

// Reads a two-column numeric CSV, skipping a header line if present.
std::pair<Eigen::VectorXd, Eigen::VectorXd> read_two_columns(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open data file " + path.string());
  std::vector<double> first;
  std::vector<double> second;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double x = 0;
    double y = 0;
    if (!(fields >> x >> y)) {
      if (line_no == 1) continue;  // header
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    first.push_back(x);
    second.push_back(y);
  }
  return {Eigen::Map<Eigen::VectorXd>(first.data(), static_cast<Eigen::Index>(first.size())),
          Eigen::Map<Eigen::VectorXd>(second.data(), static_cast<Eigen::Index>(second.size()))};
}

}  // namespace

RunConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  RunConfig cfg;
  cfg.base_dir = base_dir;
  for (const auto& [section, body] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) throw ConfigError("unknown section [" + section + "]");
    if (body.empty() && !body.data().empty()) {
      throw ConfigError("key '" + section + "' must live inside a section");
    }
    for (const auto& [key, node] : body) {
      if (!known->second.count(key)) {
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
      }
      const std::string value = node.data();
      const std::string what = section + "." + key;
      if (section == "problem") {
        if (key == "alpha") cfg.alpha = to_number(value, what);
        if (key == "t_final") cfg.t_final = to_number(value, what);
        if (key == "n_steps") cfg.n_steps = to_integer(value, what);
      } else if (section == "operator") {
        if (key == "family") cfg.family = value;
        if (key == "n_modes") cfg.n_modes = to_integer(value, what);
        if (key == "eps") cfg.eps = to_number(value, what);
      } else if (section == "measurement") {
        if (key == "functional") cfg.functional = value;
        if (key == "x") cfg.x_star = to_number(value, what);
        if (key == "gamma") cfg.gamma = to_number(value, what);
      } else if (section == "data") {
        if (key == "a") cfg.a_profile = value;
        if (key == "r") cfg.r_profile = value;
        if (key == "g") cfg.g_field = value;
        if (key == "h") cfg.h_field = value;
        if (key == "e_data") cfg.e_data = value;
      } else if (section == "solver") {
        if (key == "tol") cfg.solver.tol = to_number(value, what);
        if (key == "max_iter") cfg.solver.max_iter = static_cast<int>(to_integer(value, what));
        if (key == "relaxation") cfg.solver.relaxation = to_number(value, what);
        if (key == "anderson_depth") {
          cfg.solver.anderson_depth = static_cast<int>(to_integer(value, what));
        }
      } else if (section == "output") {
        if (key == "dir") cfg.output_dir = resolve(base_dir, value);
        if (key == "modes") cfg.write_modes = to_bool(value, what);
      } else if (section == "perturb") {
        if (key == "e_scale") cfg.e_scale = to_number(value, what);
        if (key == "a_sine") cfg.a_sine = to_number(value, what);
        if (key == "g_scale") cfg.g_scale = to_number(value, what);
      }
    }
  }
  if (cfg.output_dir == ".") cfg.output_dir = base_dir;

  if (!(cfg.alpha > 0 && cfg.alpha < 1)) throw ConfigError("problem.alpha must lie in (0, 1)");
  if (!(cfg.t_final > 0)) throw ConfigError("problem.t_final must be positive");
  if (cfg.n_steps < 2) throw ConfigError("problem.n_steps must be at least 2");
  if (cfg.n_modes < 1) throw ConfigError("operator.n_modes must be at least 1");
  if (!(cfg.solver.tol > 0)) throw ConfigError("solver.tol must be positive");
  if (cfg.solver.max_iter < 1) throw ConfigError("solver.max_iter must be at least 1");
  if (!(cfg.solver.relaxation > 0 && cfg.solver.relaxation <= 1)) {
    throw ConfigError("solver.relaxation must lie in (0, 1]");
  }
  if (cfg.solver.anderson_depth < 0) throw ConfigError("solver.anderson_depth must be >= 0");
  if (cfg.gamma && !(*cfg.gamma >= 0)) throw ConfigError("measurement.gamma must be >= 0");
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration " + path.string());
  return parse_config(in, path.parent_path().empty() ? "." : path.parent_path());
}

TimeGrid<double> make_grid(const RunConfig& cfg) { return TimeGrid<double>(cfg.t_final, cfg.n_steps); }

GridFunction<double> make_profile(const std::string& desc, const TimeGrid<double>& grid) {
  const auto words = split_words(desc);
  if (words.empty()) throw ConfigError("empty time profile");
  const std::string& kind = words[0];
  std::vector<double> p;
  for (std::size_t i = 1; i < words.size(); ++i) p.push_back(to_number(words[i], "profile " + kind));
  const auto need = [&](std::size_t n) {
    if (p.size() != n) {
      throw ConfigError("profile '" + kind + "' takes " + std::to_string(n) + " parameters");
    }
  };
  if (kind == "const") {
    need(1);
    return GridFunction<double>::sample(grid, [&](double) { return p[0]; });
  }
  if (kind == "affine") {
    need(2);
    return GridFunction<double>::sample(grid, [&](double t) { return p[0] + p[1] * t; });
  }
  if (kind == "sin_offset") {
    need(3);
    if (!(p[2] > 0)) throw ConfigError("sin_offset period must be positive");
    return GridFunction<double>::sample(
        grid, [&](double t) { return p[0] + p[1] * std::sin(2 * std::numbers::pi * t / p[2]); });
  }
  throw ConfigError("unknown time profile '" + kind + "'");
}

EigenSystem make_eigensystem(const RunConfig& cfg) {
  if (cfg.family == "dirichlet_laplacian") return dirichlet_laplacian(cfg.n_modes);
  if (cfg.family == "involution") return involution_operator(cfg.n_modes, cfg.eps);
  if (cfg.family == "harmonic_oscillator") return harmonic_oscillator_1d(cfg.n_modes);
  throw ConfigError("unknown operator family '" + cfg.family + "'");
}

Measurement make_measurement(const RunConfig& cfg, const EigenSystem& sys) {
  if (cfg.functional == "total_energy") return total_energy_functional(sys, cfg.gamma);
  if (cfg.functional == "point") return point_functional(sys, cfg.x_star, cfg.gamma);
  if (cfg.functional == "boundary_flux") return boundary_flux_functional(sys, cfg.gamma);
  throw ConfigError("unknown functional '" + cfg.functional + "'");
}

ModalVector make_field(const std::string& desc, const EigenSystem& sys,
                       const std::filesystem::path& base_dir) {
  const auto words = split_words(desc);
  if (words.empty()) throw ConfigError("empty field specification");
  const std::string& kind = words[0];
  if (kind == "zero") {
    if (words.size() != 1) throw ConfigError("field 'zero' takes no parameters");
    return ModalVector::Zero(sys.size());
  }
  if (kind == "poly_x_1mx") {
    if (words.size() > 2) throw ConfigError("field 'poly_x_1mx' takes at most a scale");
    const double scale = words.size() == 2 ? to_number(words[1], "poly_x_1mx scale") : 1.0;
    return scale * project([](double x) { return x * (1 - x); }, sys);
  }
  if (kind == "mode") {
    if (words.size() < 2 || words.size() > 3) throw ConfigError("field 'mode' takes k [scale]");
    const long k = to_integer(words[1], "mode index");
    if (k < 1 || k > sys.size()) {
      throw ConfigError("mode index must lie in 1.." + std::to_string(sys.size()));
    }
    const double scale = words.size() == 3 ? to_number(words[2], "mode scale") : 1.0;
    ModalVector v = ModalVector::Zero(sys.size());
    v[k - 1] = scale;
    return v;
  }
  if (kind == "samples") {
    if (words.size() != 2) throw ConfigError("field 'samples' takes a file path");
    const auto [xs, values] = read_two_columns(resolve(base_dir, words[1]));
    return project_samples(xs, values, sys);
  }
  throw ConfigError("unknown field '" + kind + "'");
}

Scenario make_base_scenario(const RunConfig& cfg) {
  const TimeGrid<double> grid = make_grid(cfg);
  EigenSystem sys = make_eigensystem(cfg);
  Measurement meas = make_measurement(cfg, sys);
  ModalVector g = make_field(cfg.g_field, sys, cfg.base_dir);
  ModalVector h = make_field(cfg.h_field, sys, cfg.base_dir);
  return Scenario(cfg.alpha, std::move(sys), std::move(meas), make_profile(cfg.a_profile, grid),
                  std::move(g), std::move(h));
}

Scenario make_inverse_scenario(const RunConfig& cfg) {
  const Scenario base = make_base_scenario(cfg);
  const auto words = split_words(cfg.e_data);
  if (words.size() == 1 && words[0] == "forward") {
    const ForwardSolution fw = solve_forward(base, make_profile(cfg.r_profile, base.grid()));
    return base.with_e_data(fw.measurement);
  }
  if (words.size() == 2 && words[0] == "file") {
    const auto [ts, values] = read_two_columns(resolve(cfg.base_dir, words[1]));
    if (values.size() != base.grid().size()) {
      throw ConfigError("E(t) file has " + std::to_string(values.size()) + " rows, the grid has " +
                        std::to_string(base.grid().size()) + " nodes");
    }
    const double tol = 1e-9 * base.grid().t_final();
    for (Eigen::Index j = 0; j < ts.size(); ++j) {
      if (std::abs(ts[j] - base.grid().node(j)) > tol) {
        throw ConfigError("E(t) file row " + std::to_string(j + 1) + " is not at grid node t = " +
                          std::to_string(base.grid().node(j)));
      }
    }
    return base.with_e_data(GridFunction<double>(base.grid(), values));
  }
  throw ConfigError("data.e_data must be 'forward' or 'file <path>'");
}

Scenario make_perturbed_scenario(const RunConfig& cfg, const Scenario& base) {
  const TimeGrid<double>& grid = base.grid();
  Eigen::VectorXd a = base.a().values();
  for (Eigen::Index j = 0; j < grid.size(); ++j) {
    a[j] += cfg.a_sine * std::sin(2 * std::numbers::pi * grid.node(j) / grid.t_final());
  }
  return base.with_a(GridFunction<double>(grid, std::move(a)))
      .with_g((1 + cfg.g_scale) * base.g())
      .with_e_data(GridFunction<double>(grid, (1 + cfg.e_scale) * base.e_data().values()));
}

}  // namespace tfsrc
