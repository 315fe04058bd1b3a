#include "nls/config.hpp"

#include "nls/tomo.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace nls {

static std::string join_errors(const std::vector<ConfigError>& errs) {
  std::ostringstream os;
  os << "config invalid (" << errs.size() << " error" << (errs.size() == 1 ? "" : "s") << ")";
  for (const ConfigError& e : errs) {
    os << "\n  ";
    if (e.line > 0) os << "line " << e.line << ": ";
    os << e.message;
  }
  return os.str();
}

ConfigParseError::ConfigParseError(std::vector<ConfigError> errs)
    : std::runtime_error(join_errors(errs)), errors(std::move(errs)) {}

namespace {

struct Parser {
  RunConfig cfg;
  std::vector<ConfigError> errors;
  std::map<std::string, int> key_lines; // section.key -> line where it was set
  bool weight_present = false;

  void fail(int line, const std::string& msg) { errors.push_back({line, msg}); }

  int line_of(const std::string& section_key) const {
    auto it = key_lines.find(section_key);
    return it == key_lines.end() ? 0 : it->second;
  }

  static std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  }

  bool to_double(const std::string& v, double& out) {
    try {
      size_t pos = 0;
      out = std::stod(v, &pos);
      return pos == v.size() && std::isfinite(out);
    } catch (const std::exception&) {
      return false;
    }
  }

  bool to_int(const std::string& v, long long& out) {
    try {
      size_t pos = 0;
      out = std::stoll(v, &pos);
      return pos == v.size();
    } catch (const std::exception&) {
      return false;
    }
  }

  bool to_bool(const std::string& v, bool& out) {
    if (v == "true" || v == "1" || v == "yes") { out = true; return true; }
    if (v == "false" || v == "0" || v == "no") { out = false; return true; }
    return false;
  }

  void set_key(const std::string& section, const std::string& key, const std::string& value,
               int line) {
    key_lines[section + "." + key] = line;
    auto bad_value = [&](const char* expect) {
      fail(line, "key '" + section + "." + key + "': expected " + expect + ", got '" + value +
                     "'");
    };
    double d;
    long long n;
    bool b;

    if (section == "grid") {
      if (key == "origin_x") { if (to_double(value, d)) cfg.grid.origin_x = d; else bad_value("a number"); }
      else if (key == "origin_y") { if (to_double(value, d)) cfg.grid.origin_y = d; else bad_value("a number"); }
      else if (key == "h") { if (to_double(value, d)) cfg.grid.h = d; else bad_value("a number"); }
      else if (key == "nx") { if (to_int(value, n)) cfg.grid.nx = static_cast<int>(n); else bad_value("an integer"); }
      else if (key == "ny") { if (to_int(value, n)) cfg.grid.ny = static_cast<int>(n); else bad_value("an integer"); }
      else if (key == "boundary") {
        if (value == "clamp") cfg.grid.boundary = BoundaryMode::clamp_minus_one;
        else if (value == "mirror") cfg.grid.boundary = BoundaryMode::mirror;
        else bad_value("'clamp' or 'mirror'");
      } else fail(line, "unknown key '" + key + "' in [grid]");
    } else if (section == "init") {
      if (key == "shape") {
        if (value == "disk") cfg.init.shape = ShapeKind::disk;
        else if (value == "rectangle") cfg.init.shape = ShapeKind::rectangle;
        else if (value == "annulus") cfg.init.shape = ShapeKind::annulus;
        else bad_value("'disk', 'rectangle' or 'annulus'");
      }
      else if (key == "center_x") { if (to_double(value, d)) cfg.init.center_x = d; else bad_value("a number"); }
      else if (key == "center_y") { if (to_double(value, d)) cfg.init.center_y = d; else bad_value("a number"); }
      else if (key == "radius") { if (to_double(value, d)) cfg.init.radius = d; else bad_value("a number"); }
      else if (key == "half_width_x1") { if (to_double(value, d)) cfg.init.half_width_x1 = d; else bad_value("a number"); }
      else if (key == "half_width_x2") { if (to_double(value, d)) cfg.init.half_width_x2 = d; else bad_value("a number"); }
      else if (key == "r_inner") { if (to_double(value, d)) cfg.init.r_inner = d; else bad_value("a number"); }
      else if (key == "r_outer") { if (to_double(value, d)) cfg.init.r_outer = d; else bad_value("a number"); }
      else if (key == "class_c") { if (to_bool(value, b)) cfg.init.class_c = b; else bad_value("a boolean"); }
      else if (key == "perturb_seed") { if (to_int(value, n) && n >= 0) cfg.init.perturb_seed = static_cast<std::uint64_t>(n); else bad_value("a nonnegative integer"); }
      else if (key == "perturb_amp") { if (to_double(value, d)) cfg.init.perturb_amp = d; else bad_value("a number"); }
      else if (key == "perturb_modes") { if (to_int(value, n)) cfg.init.perturb_modes = static_cast<int>(n); else bad_value("an integer"); }
      else fail(line, "unknown key '" + key + "' in [init]");
    } else if (section == "velocity") {
      if (key == "model") {
        if (value == "tomographic") cfg.velocity.model = Model::tomographic;
        else if (value == "volume_power") cfg.velocity.model = Model::volume_power;
        else if (value == "general_k1") cfg.velocity.model = Model::general_k1;
        else bad_value("'tomographic', 'volume_power' or 'general_k1'");
      }
      else if (key == "amplitude") { if (to_double(value, d)) cfg.velocity.amplitude = d; else bad_value("a number"); }
      else if (key == "weight") { cfg.velocity.weight = value; weight_present = true; }
      else if (key == "curvature_coef") { if (to_double(value, d)) cfg.velocity.curvature_coef = d; else bad_value("a number"); }
      else if (key == "grad_delta") { if (to_double(value, d)) cfg.velocity.grad_delta = d; else bad_value("a number"); }
      else fail(line, "unknown key '" + key + "' in [velocity]");
    } else if (section == "time") {
      if (key == "T") { if (to_double(value, d)) cfg.time.T = d; else bad_value("a number"); }
      else if (key == "cfl_safety") { if (to_double(value, d)) cfg.time.cfl_safety = d; else bad_value("a number"); }
      else if (key == "snapshot_stride") { if (to_int(value, n)) cfg.time.snapshot_stride = static_cast<int>(n); else bad_value("an integer"); }
      else if (key == "steady_tol") { if (to_double(value, d)) cfg.time.steady_tol = d; else bad_value("a number"); }
      else fail(line, "unknown key '" + key + "' in [time]");
    } else if (section == "output") {
      if (key == "dir") cfg.output.dir = value;
      else if (key == "snapshots") { if (to_bool(value, b)) cfg.output.snapshots = b; else bad_value("a boolean"); }
      else if (key == "metrics") { if (to_bool(value, b)) cfg.output.metrics = b; else bad_value("a boolean"); }
      else if (key == "contours") { if (to_bool(value, b)) cfg.output.contours = b; else bad_value("a boolean"); }
      else fail(line, "unknown key '" + key + "' in [output]");
    }
  }

  void validate() {
    auto fail_key = [&](const std::string& sk, const std::string& msg) {
      errors.push_back({line_of(sk), msg});
    };

    if (!(cfg.grid.h > 0.0) || !std::isfinite(cfg.grid.h))
      fail_key("grid.h", "grid.h must be positive");
    if (cfg.grid.nx < 3) fail_key("grid.nx", "grid.nx must be >= 3");
    if (cfg.grid.ny < 3) fail_key("grid.ny", "grid.ny must be >= 3");

    switch (cfg.init.shape) {
      case ShapeKind::disk:
        if (!(cfg.init.radius > 0.0)) fail_key("init.radius", "init.radius must be positive");
        break;
      case ShapeKind::rectangle:
        if (!(cfg.init.half_width_x1 > 0.0))
          fail_key("init.half_width_x1", "init.half_width_x1 must be positive");
        if (!(cfg.init.half_width_x2 > 0.0))
          fail_key("init.half_width_x2", "init.half_width_x2 must be positive");
        break;
      case ShapeKind::annulus:
        if (!(cfg.init.r_inner > 0.0)) fail_key("init.r_inner", "init.r_inner must be positive");
        if (!(cfg.init.r_outer > cfg.init.r_inner))
          fail_key("init.r_outer", "init.r_outer must exceed init.r_inner");
        break;
    }
    if (!(cfg.init.perturb_amp >= 0.0))
      fail_key("init.perturb_amp", "init.perturb_amp must be >= 0");
    if (cfg.init.perturb_modes < 1)
      fail_key("init.perturb_modes", "init.perturb_modes must be >= 1");

    if (!(cfg.velocity.amplitude >= 0.0))
      fail_key("velocity.amplitude", "velocity.amplitude must be >= 0");
    if (!(cfg.velocity.curvature_coef >= 0.0))
      fail_key("velocity.curvature_coef", "velocity.curvature_coef must be >= 0");
    if (!(cfg.velocity.grad_delta >= 0.0))
      fail_key("velocity.grad_delta", "velocity.grad_delta must be >= 0");
    const std::string& w = cfg.velocity.weight;
    if (w.rfind("constant:", 0) == 0) {
      double g;
      Parser tmp;
      if (!tmp.to_double(w.substr(9), g) || !(g > 0.0))
        fail_key("velocity.weight", "velocity.weight constant must be a positive number");
    } else if (w.rfind("file:", 0) != 0) {
      fail_key("velocity.weight", "velocity.weight must be 'constant:<g>' or 'file:<path>'");
    } else if (w.size() <= 5) {
      fail_key("velocity.weight", "velocity.weight file path is empty");
    }

    if (!(cfg.time.T > 0.0)) fail_key("time.T", "time.T must be positive");
    if (!(cfg.time.cfl_safety > 0.0) || cfg.time.cfl_safety > 1.0)
      fail_key("time.cfl_safety", "time.cfl_safety must lie in (0, 1]");
    if (cfg.time.snapshot_stride < 1)
      fail_key("time.snapshot_stride", "time.snapshot_stride must be >= 1");
    if (!(cfg.time.steady_tol >= 0.0))
      fail_key("time.steady_tol", "time.steady_tol must be >= 0");
    if (cfg.output.dir.empty()) fail_key("output.dir", "output.dir must not be empty");
  }
};

} // namespace

RunConfig parse_config(std::istream& is, bool* weight_key_present) {
  Parser p;
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string body = Parser::trim(line);
    if (body.empty() || body[0] == '#' || body[0] == ';') continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        p.fail(lineno, "malformed section header '" + body + "'");
        continue;
      }
      section = body.substr(1, body.size() - 2);
      if (section != "grid" && section != "init" && section != "velocity" && section != "time" &&
          section != "output")
        p.fail(lineno, "unknown section [" + section + "]");
      continue;
    }
    size_t eq = body.find('=');
    if (eq == std::string::npos) {
      p.fail(lineno, "expected 'key = value', got '" + body + "'");
      continue;
    }
    if (section.empty()) {
      p.fail(lineno, "key before any [section] header");
      continue;
    }
    std::string key = Parser::trim(body.substr(0, eq));
    std::string value = Parser::trim(body.substr(eq + 1));
    if (key.empty()) {
      p.fail(lineno, "empty key");
      continue;
    }
    if (section == "grid" || section == "init" || section == "velocity" || section == "time" ||
        section == "output")
      p.set_key(section, key, value, lineno);
  }
  p.validate();
  if (!p.errors.empty()) throw ConfigParseError(std::move(p.errors));
  if (weight_key_present) *weight_key_present = p.weight_present;
  return p.cfg;
}

RunConfig parse_config_string(const std::string& text, bool* weight_key_present) {
  std::istringstream is(text);
  return parse_config(is, weight_key_present);
}

RunConfig parse_config_file(const std::string& path, bool* weight_key_present) {
  std::ifstream is(path);
  if (!is) throw ConfigParseError({{0, "cannot open config file: " + path}});
  return parse_config(is, weight_key_present);
}

std::string print_config(const RunConfig& c) {
  std::ostringstream os;
  os << "[grid]\n";
  os << "origin_x = " << fmt17(c.grid.origin_x) << "\n";
  os << "origin_y = " << fmt17(c.grid.origin_y) << "\n";
  os << "h = " << fmt17(c.grid.h) << "\n";
  os << "nx = " << c.grid.nx << "\n";
  os << "ny = " << c.grid.ny << "\n";
  os << "boundary = " << (c.grid.boundary == BoundaryMode::mirror ? "mirror" : "clamp") << "\n";
  os << "\n[init]\n";
  os << "shape = "
     << (c.init.shape == ShapeKind::disk
             ? "disk"
             : c.init.shape == ShapeKind::rectangle ? "rectangle" : "annulus")
     << "\n";
  os << "center_x = " << fmt17(c.init.center_x) << "\n";
  os << "center_y = " << fmt17(c.init.center_y) << "\n";
  os << "radius = " << fmt17(c.init.radius) << "\n";
  os << "half_width_x1 = " << fmt17(c.init.half_width_x1) << "\n";
  os << "half_width_x2 = " << fmt17(c.init.half_width_x2) << "\n";
  os << "r_inner = " << fmt17(c.init.r_inner) << "\n";
  os << "r_outer = " << fmt17(c.init.r_outer) << "\n";
  os << "class_c = " << (c.init.class_c ? "true" : "false") << "\n";
  os << "perturb_seed = " << c.init.perturb_seed << "\n";
  os << "perturb_amp = " << fmt17(c.init.perturb_amp) << "\n";
  os << "perturb_modes = " << c.init.perturb_modes << "\n";
  os << "\n[velocity]\n";
  os << "model = "
     << (c.velocity.model == Model::tomographic
             ? "tomographic"
             : c.velocity.model == Model::volume_power ? "volume_power" : "general_k1")
     << "\n";
  os << "amplitude = " << fmt17(c.velocity.amplitude) << "\n";
  os << "weight = " << c.velocity.weight << "\n";
  os << "curvature_coef = " << fmt17(c.velocity.curvature_coef) << "\n";
  os << "grad_delta = " << fmt17(c.velocity.grad_delta) << "\n";
  os << "\n[time]\n";
  os << "T = " << fmt17(c.time.T) << "\n";
  os << "cfl_safety = " << fmt17(c.time.cfl_safety) << "\n";
  os << "snapshot_stride = " << c.time.snapshot_stride << "\n";
  os << "steady_tol = " << fmt17(c.time.steady_tol) << "\n";
  os << "\n[output]\n";
  os << "dir = " << c.output.dir << "\n";
  os << "snapshots = " << (c.output.snapshots ? "true" : "false") << "\n";
  os << "metrics = " << (c.output.metrics ? "true" : "false") << "\n";
  os << "contours = " << (c.output.contours ? "true" : "false") << "\n";
  return os.str();
}

GridSpec grid_from_config(const RunConfig& cfg) {
  return make_grid({cfg.grid.origin_x, cfg.grid.origin_y}, cfg.grid.h, cfg.grid.nx, cfg.grid.ny);
}

Shape shape_from_config(const RunConfig& cfg) {
  switch (cfg.init.shape) {
    case ShapeKind::disk: return Shape::disk(cfg.init.center_x, cfg.init.center_y, cfg.init.radius);
    case ShapeKind::rectangle:
      return Shape::rectangle(cfg.init.center_x, cfg.init.center_y, cfg.init.half_width_x1,
                              cfg.init.half_width_x2);
    case ShapeKind::annulus:
      return Shape::annulus(cfg.init.center_x, cfg.init.center_y, cfg.init.r_inner,
                            cfg.init.r_outer);
  }
  throw std::logic_error("unreachable shape kind");
}

ScalarField initial_field_from_config(const RunConfig& cfg) {
  GridSpec grid = grid_from_config(cfg);
  ScalarField f = rasterize(shape_from_config(cfg), grid, cfg.init.class_c);
  f.mode = cfg.grid.boundary;
  if (cfg.init.perturb_amp > 0.0)
    f = perturb(f, cfg.init.perturb_seed, cfg.init.perturb_amp, cfg.init.perturb_modes);
  return f;
}

WeightTable weight_from_config(const RunConfig& cfg) {
  const std::string& w = cfg.velocity.weight;
  if (w.rfind("constant:", 0) == 0) return make_constant_weight(std::stod(w.substr(9)));
  return load_projection_weight(w.substr(5));
}

VelocityParams params_from_config(const RunConfig& cfg) {
  return make_velocity_params(cfg.velocity.model,
                              make_constant_amplitude(cfg.velocity.amplitude),
                              weight_from_config(cfg), cfg.velocity.curvature_coef,
                              cfg.velocity.grad_delta);
}

} // namespace nls
