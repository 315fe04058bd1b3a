#include "nls/tomo.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nls {

Phantom make_phantom(const Shape& s, const GridSpec& grid) {
  if (s.kind == ShapeKind::rectangle)
    throw std::invalid_argument("phantom shapes are disk or annulus");
  Phantom ph;
  ph.shape = s;
  ph.levelset = rasterize(s, grid, /*class_c=*/true);
  ph.inside.resize(static_cast<size_t>(grid.node_count()));
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      ph.inside[static_cast<size_t>(j) * grid.nx + i] =
          signed_distance(s, grid.x1(i), grid.x2(j)) > 0.0 ? 1 : 0;
  return ph;
}

std::vector<Polyline> phantom_boundary(const Phantom& ph, int npts) {
  std::vector<Polyline> out;
  if (ph.shape.kind == ShapeKind::disk) {
    out.push_back(circle_polyline(ph.shape.cx, ph.shape.cy, ph.shape.radius, npts));
  } else {
    out.push_back(circle_polyline(ph.shape.cx, ph.shape.cy, ph.shape.r_in, npts));
    out.push_back(circle_polyline(ph.shape.cx, ph.shape.cy, ph.shape.r_out, npts));
  }
  return out;
}

WeightTable load_projection_weight(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open weight file: " + path);

  std::vector<double> z, g;
  std::string line;
  int lineno = 0;
  int datarow = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    size_t b = line.find_last_not_of(" \t\r");
    std::string body = line.substr(a, b - a + 1);
    if (body.empty() || body[0] == '#') continue;
    if (datarow == 0 && body == "z,g") continue; // optional header

    ++datarow;
    size_t comma = body.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("weight file row " + std::to_string(lineno) +
                               ": expected two comma-separated columns");
    double zv, gv;
    try {
      zv = std::stod(body.substr(0, comma));
      gv = std::stod(body.substr(comma + 1));
    } catch (const std::exception&) {
      throw std::runtime_error("weight file row " + std::to_string(lineno) +
                               ": malformed number");
    }
    if (!(gv > 0.0))
      throw std::runtime_error("weight file row " + std::to_string(lineno) +
                               ": weight must be positive");
    if (!z.empty() && !(zv > z.back()))
      throw std::runtime_error("weight file row " + std::to_string(lineno) +
                               ": z must be strictly increasing");
    z.push_back(zv);
    g.push_back(gv);
  }
  if (datarow == 0) throw std::runtime_error("weight file is empty: " + path);
  if (datarow == 1)
    throw std::runtime_error("weight file needs at least 2 rows: " + path);
  return make_table_weight(std::move(z), std::move(g));
}

ReconstructionResult reconstruct(const Phantom& ph, std::uint64_t noise_seed, double noise_amp,
                                 const VelocityParams& p, double T, const EvolveOptions& options,
                                 int perturb_modes) {
  ScalarField u0 = perturb(ph.levelset, noise_seed, noise_amp, perturb_modes);

  ReconstructionResult res;
  res.traj = evolve(u0, p, T, options);

  std::vector<Polyline> truth = phantom_boundary(ph, 1024);
  for (const auto& [t, field] : res.traj.snapshots) {
    std::vector<Polyline> front = extract_contour(field, 0.0);
    if (front.empty())
      throw std::runtime_error("reconstruction front vanished; no zero contour to compare");
    res.times.push_back(t);
    res.distances.push_back(hausdorff_distance(front, truth));
  }
  return res;
}

} // namespace nls
