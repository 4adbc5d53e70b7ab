#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "perc/common.hpp"
#include "perc/rng.hpp"

namespace perc {

// Group elements are flat integer coordinate vectors: the offset vector for
// lattices, row-major matrix entries for matrix groups.
using Element = std::vector<std::int64_t>;

struct GroupSpec {
    enum class Kind { lattice, heisenberg, matrix_group };

    Kind kind = Kind::lattice;
    int dim = 0;                            // lattice only
    std::vector<Element> generators;        // offsets (lattice) or row-major matrices
    int matrix_size = 0;                    // matrix groups only

    static GroupSpec lattice(int d, std::vector<Element> gens);
    static GroupSpec heisenberg();
    static GroupSpec matrix_group(int size, std::vector<Element> gens);
};

// A group with a fixed symmetrized ordered generating set. Immutable.
class GroupModel {
  public:
    explicit GroupModel(GroupSpec spec);

    const GroupSpec& spec() const { return spec_; }
    const Element& identity() const { return identity_; }
    int generator_count() const { return static_cast<int>(generators_.size()); }

    Element multiply(const Element& x, int gen_index) const;

    // Window-size-independent unique key: fixed-width little-endian int64s.
    std::string canonical_key(const Element& x) const;

  private:
    GroupSpec spec_;
    std::vector<Element> generators_;  // user order first, then appended inverses
    Element identity_;
};

GroupModel build_group(const GroupSpec& spec);

inline constexpr std::size_t kDefaultVertexCap = 4'000'000;

// Finite ball of radius W around the origin, with deterministic BFS order.
class GraphWindow {
  public:
    GraphWindow(const GroupModel& group, int W, std::size_t vertex_cap = kDefaultVertexCap);

    int radius() const { return W_; }
    const GroupModel& group() const { return *group_; }

    std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(dist_.size()); }
    std::uint32_t edge_count() const { return static_cast<std::uint32_t>(edge_endpoints_.size()); }

    const Element& element_of(std::uint32_t v) const { return elements_[v]; }
    const std::string& vertex_key(std::uint32_t v) const { return vertex_keys_[v]; }
    int dist(std::uint32_t v) const { return dist_[v]; }

    // Adjacency in generator order: (neighbour, edge index) pairs.
    struct Arc {
        std::uint32_t to;
        std::uint32_t edge;
    };
    const std::vector<Arc>& neighbors(std::uint32_t v) const { return adjacency_[v]; }

    std::pair<std::uint32_t, std::uint32_t> edge_endpoints(std::uint32_t e) const {
        return edge_endpoints_[e];
    }
    const std::string& edge_key(std::uint32_t e) const { return edge_keys_[e]; }
    const rng::Digest& edge_digest(std::uint32_t e) const { return edge_digests_[e]; }

    VertexSet ball(int r) const;    // dist <= r
    VertexSet sphere(int r) const;  // dist == r

    std::int64_t ball_size(int r) const {
        if (r < 0) return 0;
        return cum_ball_[std::min<std::size_t>(r, cum_ball_.size() - 1)];
    }
    std::int64_t sphere_size(int r) const {
        if (r < 0 || r > W_) return 0;
        return cum_ball_[r] - (r > 0 ? cum_ball_[r - 1] : 0);
    }
    std::int64_t boundary_edge_count(int r) const { return boundary_edges_[r]; }

  private:
    const GroupModel* group_;
    int W_;
    std::vector<Element> elements_;
    std::vector<std::string> vertex_keys_;
    std::vector<int> dist_;
    std::vector<std::vector<Arc>> adjacency_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> edge_endpoints_;
    std::vector<std::string> edge_keys_;
    std::vector<rng::Digest> edge_digests_;
    std::vector<std::int64_t> cum_ball_;       // |B_r| per radius
    std::vector<std::int64_t> boundary_edges_; // |dB_r| per radius
};

GraphWindow build_window(const GroupModel& group, int W,
                         std::size_t vertex_cap = kDefaultVertexCap);

struct BallMetrics {
    std::int64_t ball_size;
    std::int64_t sphere_size;
    std::int64_t edge_boundary_size;
};

BallMetrics ball_metrics(const GraphWindow& window, int r);

struct GrowthFit {
    double d_hat;
    double residual;  // 1 - R^2 of the log-log fit
};

GrowthFit growth_exponent_fit(const GroupModel& group, int n_max,
                              std::size_t vertex_cap = kDefaultVertexCap);

struct RatioScan {
    int m;
    double ratio;
};

// Minimiser of |dB_m|/|B_m| over m in [n, 2n).
RatioScan ratio_scan(const GraphWindow& window, int n);

}  // namespace perc
