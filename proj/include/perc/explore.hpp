#pragma once

#include <cstdint>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/common.hpp"
#include "perc/perco.hpp"

namespace perc {

// Edge-by-edge exploration of the cluster of x in B_m: reveal the smallest
// unexplored edge adjacent to the current cluster, in global edge-index order.
struct ExplorationTrace {
    std::vector<std::uint32_t> edges;   // e_1 .. e_T
    std::vector<std::uint8_t> status;   // 1 open, 0 closed
    std::vector<double> running_sum;    // X_t after revealing e_t
    std::uint64_t stop_time = 0;        // T
    double final_sum = 0.0;             // X_T = h(C_x)
    std::int64_t open_count = 0;        // |open(C_x)|
    std::int64_t closed_count = 0;      // |closed(C_x)|
    VertexSet cluster;                  // explored vertex set
};

ExplorationTrace explore_cluster(const Config& config, int m, std::uint32_t x);

// Closed edges of E(B_m) whose endpoints lie in distinct clusters of B_m that
// both touch distance m.
std::vector<std::uint32_t> meeting_edges(const Config& config, int m);

struct CountingTallies {
    std::int64_t lhs_open = 0;    // sum over boundary clusters of |open(C)|
    std::int64_t rhs_open = 0;    // |open(union)|
    std::int64_t lhs_closed = 0;  // sum over boundary clusters of |closed(C)|
    std::int64_t rhs_closed = 0;  // |closed(union)| + |H|
    std::int64_t meeting_count = 0;
    double h_sum = 0.0;           // sum of p|closed(C)| - (1-p)|open(C)|
};

// Both identities hold exactly for every configuration; a violation is a test
// failure, not a runtime error.
CountingTallies counting_identity_check(const Config& config, int m);

}  // namespace perc
