#pragma once

#include <cstdint>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/common.hpp"

namespace perc {

// Vertex path; consecutive vertices are adjacent in the window.
class PathSpec {
  public:
    PathSpec() = default;
    PathSpec(const GraphWindow& window, std::vector<std::uint32_t> vertices);

    const std::vector<std::uint32_t>& vertices() const { return v_; }
    std::uint32_t origin() const { return v_.front(); }
    std::uint32_t endpoint() const { return v_.back(); }
    std::size_t length() const { return v_.size() - 1; }  // edge count

  private:
    std::vector<std::uint32_t> v_;
};

struct Cutset {
    VertexSet vertices;       // Pi
    VertexSet separated_set;  // component of F when Pi cuts
    bool cuts = false;
    bool minimal = false;
    int r_connected_for = 0;  // smallest R' making Pi R'-connected
    int diam_cutset = 0;      // extrinsic window metric
    int diam_f = 0;
    int min_dist_to_origin = 0;
};

// Distance-r vertices admitting a path to the window boundary that meets
// B_r(center) only at its start (window-boundary proxy for infinity).
VertexSet exposed_sphere(const GraphWindow& window, std::uint32_t center, int r);

// A(n,m): union of radius-m balls about the exposed sphere of radius n at o.
VertexSet annulus(const GraphWindow& window, int n, int m);

Cutset analyze_cutset(const GraphWindow& window, const VertexSet& F, const VertexSet& Pi);

// Exact check that removing the exposed sphere of radius r disconnects B_r
// from the sphere of radius 2r.
bool verify_sphere_separation(const GraphWindow& window, int r);

// Deterministic shortest path (BFS parent order = generator order).
PathSpec geodesic(const GraphWindow& window, std::uint32_t x, std::uint32_t y);

// Union of radius-n balls about the path vertices.
VertexSet corridor(const GraphWindow& window, const PathSpec& path, int n);

// Greedy maximal family of paths from B_n to the window boundary, pairwise at
// distance >= a. Heuristic: no optimality guarantee.
std::vector<PathSpec> disjoint_ray_family(const GraphWindow& window, int n, int a);

}  // namespace perc
