#pragma once

#include "nls/contour.hpp"
#include "nls/evolve.hpp"
#include "nls/front_init.hpp"

#include <string>
#include <vector>

namespace nls {

// Synthetic ground-truth object: binary mask plus its compact-front level-set field.
struct Phantom {
  Shape shape;
  ScalarField levelset;       // class-C field, positive inside
  std::vector<uint8_t> inside;
};

// Disk or annulus only (a rectangle has no smooth boundary normal and is
// rejected); same margin rule as rasterize.
Phantom make_phantom(const Shape& s, const GridSpec& grid);

// Analytic boundary of the phantom, sampled as closed polylines.
std::vector<Polyline> phantom_boundary(const Phantom& ph, int npts_per_circle);

// Two-column CSV "z,g". Accepts an optional "z,g" header and '#' comments.
// Errors name the offending data row: nonpositive weight, nonmonotone z,
// malformed number, empty file.
WeightTable load_projection_weight(const std::string& path);

struct ReconstructionResult {
  Trajectory traj;
  std::vector<double> times;      // one entry per snapshot
  std::vector<double> distances;  // Hausdorff between zero contour and phantom boundary
};

// Perturbs the phantom's field with seeded noise of the given sup amplitude,
// evolves it, and records the Hausdorff distance series at every snapshot.
ReconstructionResult reconstruct(const Phantom& ph, std::uint64_t noise_seed, double noise_amp,
                                 const VelocityParams& p, double T, const EvolveOptions& options,
                                 int perturb_modes = 4);

} // namespace nls
