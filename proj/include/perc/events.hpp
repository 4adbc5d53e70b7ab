#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/common.hpp"
#include "perc/geometry.hpp"
#include "perc/perco.hpp"

namespace perc {

// sigma(n), t(n), eps(n) scale functions used by seed-based events.
struct SeedSchedule {
    double chi = 0.5;

    int sigma(int n) const;    // floor(exp(log^{chi^3} n)), at least 1
    int t(int n) const;        // floor(exp(log^{chi^2} n)), at least 1
    double epsilon(int n) const;  // 1 / log^10 n

    // smallest n from which sigma(n) <= t(n) <= n holds onward
    int valid_from() const;
};

// Two disjoint clusters of B_n(x) each meeting B_m(x) and reaching distance n.
bool piv(const Config& config, std::uint32_t x, int m, int n);

bool uniqueness(const Config& config, std::uint32_t x, int m, int n);

// All p-clusters of B_n(x) crossing from B_m(x) to distance n lie in a single
// q-cluster of B_n(x).
bool sprinkled_uniqueness(const LabelField& labels, double p, double q, std::uint32_t x, int m,
                          int n);

// o(path) connected to e(path) inside the thickness-n corridor of the path.
bool corridor_crossing(const Config& config, const PathSpec& path, int n);

// Cluster of o reaches distance n but not the window boundary.
bool truncated_radius_event(const LabelField& labels, double p, int n);

// Cluster of o has volume >= n_vol and does not reach the window boundary.
bool truncated_volume_event(const LabelField& labels, double p, std::int64_t n_vol);

// {B_{n/10} <-> dist-n in B_n} together with uniqueness(n/5, n/2); floors.
bool local_existence_uniqueness(const Config& config, int n);

// The same event centred at x; the coarse field evaluates this per site.
bool local_existence_uniqueness_at(const Config& config, std::uint32_t x, int n);

// B_sigma(x) connected to B_sigma(y) inside B_n.
bool two_seed_connected(const Config& config, std::uint32_t x, std::uint32_t y, int n, int sigma);

// Site process X(v) = crossing + local uniqueness in B_k(v) (ratios floored);
// evaluable where B_k(v) fits inside the window.
struct CoarseField {
    const GraphWindow* window = nullptr;
    int k = 0;
    std::vector<std::int8_t> value;  // -1 outside the evaluable region, else 0/1

    bool evaluable(std::uint32_t v) const { return value[v] >= 0; }
    bool open(std::uint32_t v) const { return value[v] == 1; }
    int evaluable_radius() const { return window->radius() - k; }
};

CoarseField coarse_field(const LabelField& labels, double p, int k, int workers = 1);

struct CoarseCutset {
    VertexSet cutset;     // X-closed, inclusion-minimal
    VertexSet component;  // X-open component of o (o always included)
};

// Empty when the X-open component of o reaches the evaluable-region boundary.
std::optional<CoarseCutset> smallest_closed_coarse_cutset(const CoarseField& field);

// Number of Y_r-clusters joining B_r to distance 4n, where Y_r keeps p-open
// edges touching B_r that connect to distance 4n at level p, and opens
// annulus edges at level p+delta.
int hybrid_crossing_count(const LabelField& labels, double p, double delta, int r, int n);

}  // namespace perc
