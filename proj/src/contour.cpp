#include "nls/contour.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace nls {

namespace {

// Crossing points live on grid edges. Key = edge index, orientation in bit 0.
inline std::int64_t edge_key(int i, int j, int nx, bool horizontal) {
  return ((static_cast<std::int64_t>(j) * nx + i) << 1) | (horizontal ? 1 : 0);
}

struct Segment {
  std::int64_t e0, e1;
};

} // namespace

std::vector<Polyline> extract_contour(const ScalarField& f, double level) {
  const GridSpec& g = f.grid;
  const double nudge = 1e-12 * oscillation(f);

  auto val = [&](int i, int j) {
    double v = f.at(i, j);
    return v == level ? level + nudge : v;
  };
  auto cross = [&](int i0, int j0, int i1, int j1) -> std::array<double, 2> {
    double v0 = val(i0, j0), v1 = val(i1, j1);
    double t = (level - v0) / (v1 - v0);
    return {g.x1(i0) + t * (g.x1(i1) - g.x1(i0)), g.x2(j0) + t * (g.x2(j1) - g.x2(j0))};
  };

  std::vector<Segment> segs;
  std::unordered_map<std::int64_t, std::array<double, 2>> pts;
  std::unordered_map<std::int64_t, std::array<int, 2>> adj; // edge -> up to 2 segment ids
  auto note_edge = [&](std::int64_t e, int i0, int j0, int i1, int j1, int seg_id) {
    if (!pts.count(e)) pts.emplace(e, cross(i0, j0, i1, j1));
    auto [it, fresh] = adj.try_emplace(e, std::array<int, 2>{-1, -1});
    (void)fresh;
    if (it->second[0] < 0)
      it->second[0] = seg_id;
    else
      it->second[1] = seg_id;
  };
  auto add_seg = [&](std::int64_t ea, std::array<int, 4> na, std::int64_t eb,
                     std::array<int, 4> nb) {
    int id = static_cast<int>(segs.size());
    segs.push_back({ea, eb});
    note_edge(ea, na[0], na[1], na[2], na[3], id);
    note_edge(eb, nb[0], nb[1], nb[2], nb[3], id);
  };

  for (int j = 0; j + 1 < g.ny; ++j)
    for (int i = 0; i + 1 < g.nx; ++i) {
      bool b00 = val(i, j) > level;
      bool b10 = val(i + 1, j) > level;
      bool b11 = val(i + 1, j + 1) > level;
      bool b01 = val(i, j + 1) > level;
      int mask = (b00 ? 1 : 0) | (b10 ? 2 : 0) | (b11 ? 4 : 0) | (b01 ? 8 : 0);
      if (mask == 0 || mask == 15) continue;

      std::int64_t bottom = edge_key(i, j, g.nx, true);
      std::int64_t top = edge_key(i, j + 1, g.nx, true);
      std::int64_t left = edge_key(i, j, g.nx, false);
      std::int64_t right = edge_key(i + 1, j, g.nx, false);
      std::array<int, 4> nb = {i, j, i + 1, j};
      std::array<int, 4> nt = {i, j + 1, i + 1, j + 1};
      std::array<int, 4> nl = {i, j, i, j + 1};
      std::array<int, 4> nr = {i + 1, j, i + 1, j + 1};

      switch (mask) {
        case 1: case 14: add_seg(left, nl, bottom, nb); break;
        case 2: case 13: add_seg(bottom, nb, right, nr); break;
        case 4: case 11: add_seg(right, nr, top, nt); break;
        case 8: case 7: add_seg(top, nt, left, nl); break;
        case 3: case 12: add_seg(left, nl, right, nr); break;
        case 6: case 9: add_seg(bottom, nb, top, nt); break;
        case 5: case 10: {
          double avg = 0.25 * (val(i, j) + val(i + 1, j) + val(i + 1, j + 1) + val(i, j + 1));
          bool center_above = avg > level;
          if ((mask == 5) == center_above) {
            add_seg(left, nl, top, nt);
            add_seg(bottom, nb, right, nr);
          } else {
            add_seg(left, nl, bottom, nb);
            add_seg(right, nr, top, nt);
          }
          break;
        }
      }
    }

  std::vector<Polyline> out;
  std::vector<char> used(segs.size(), 0);
  auto other_seg = [&](std::int64_t e, int seg_id) -> int {
    const auto& pair = adj[e];
    if (pair[0] == seg_id) return pair[1];
    return pair[0] == seg_id || pair[1] == seg_id ? pair[0] : -1;
  };

  for (size_t s0 = 0; s0 < segs.size(); ++s0) {
    if (used[s0]) continue;
    // walk backwards to a chain end (or around a loop)
    int cur = static_cast<int>(s0);
    std::int64_t tail = segs[s0].e0;
    while (true) {
      int prev = other_seg(tail, cur);
      if (prev < 0 || prev == static_cast<int>(s0)) break;
      cur = prev;
      tail = segs[cur].e0 == tail ? segs[cur].e1 : segs[cur].e0;
      if (cur == static_cast<int>(s0)) break; // closed loop
    }

    Polyline pl;
    std::int64_t start_edge = tail;
    std::int64_t e = tail;
    int seg = cur;
    pl.pts.push_back(pts[e]);
    while (seg >= 0 && !used[seg]) {
      used[seg] = 1;
      e = segs[seg].e0 == e ? segs[seg].e1 : segs[seg].e0;
      pl.pts.push_back(pts[e]);
      seg = other_seg(e, seg);
    }
    if (e == start_edge && pl.pts.size() > 2) {
      pl.closed = true;
      pl.pts.pop_back(); // closing point implied
    }
    out.push_back(std::move(pl));
  }
  return out;
}

static void gather_samples(const std::vector<Polyline>& polys,
                           std::vector<std::array<double, 2>>& out) {
  for (const Polyline& p : polys) {
    size_t n = p.pts.size();
    for (size_t k = 0; k < n; ++k) {
      out.push_back(p.pts[k]);
      size_t next = k + 1;
      if (next == n) {
        if (!p.closed) break;
        next = 0;
      }
      out.push_back({0.5 * (p.pts[k][0] + p.pts[next][0]), 0.5 * (p.pts[k][1] + p.pts[next][1])});
    }
  }
}

double hausdorff_distance(const std::vector<Polyline>& a, const std::vector<Polyline>& b) {
  std::vector<std::array<double, 2>> pa, pb;
  gather_samples(a, pa);
  gather_samples(b, pb);
  if (pa.empty() || pb.empty())
    throw std::invalid_argument("hausdorff_distance: empty polyline set");

  auto directed = [](const std::vector<std::array<double, 2>>& from,
                     const std::vector<std::array<double, 2>>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        double dx = p[0] - q[0], dy = p[1] - q[1];
        best = std::min(best, dx * dx + dy * dy);
      }
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(pa, pb), directed(pb, pa));
}

Extent contour_extent(const std::vector<Polyline>& polys) {
  Extent e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
           std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const Polyline& p : polys)
    for (const auto& q : p.pts) {
      e.x1_lo = std::min(e.x1_lo, q[0]);
      e.x1_hi = std::max(e.x1_hi, q[0]);
      e.x2_lo = std::min(e.x2_lo, q[1]);
      e.x2_hi = std::max(e.x2_hi, q[1]);
    }
  return e;
}

Polyline circle_polyline(double cx, double cy, double r, int npts) {
  Polyline p;
  p.closed = true;
  p.pts.reserve(static_cast<size_t>(npts));
  for (int k = 0; k < npts; ++k) {
    double th = 2.0 * 3.14159265358979323846 * k / npts;
    p.pts.push_back({cx + r * std::cos(th), cy + r * std::sin(th)});
  }
  return p;
}

void write_contour_csv(const std::vector<Polyline>& polys, std::ostream& os) {
  os << "polyline_id,x1,x2\n";
  for (size_t id = 0; id < polys.size(); ++id) {
    const Polyline& p = polys[id];
    for (const auto& q : p.pts)
      os << id << "," << fmt17(q[0]) << "," << fmt17(q[1]) << "\n";
    if (p.closed && !p.pts.empty())
      os << id << "," << fmt17(p.pts[0][0]) << "," << fmt17(p.pts[0][1]) << "\n";
  }
}

} // namespace nls
