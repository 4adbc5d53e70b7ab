#pragma once

// Test-only oracles, independent of the library's construction paths.

#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/perco.hpp"

namespace oracle {

// Brute-force ball sizes of the discrete Heisenberg group: enumerate reduced
// words in x, y, x^-1, y^-1 as upper-triangular coordinates (a, b, c).
inline std::vector<std::int64_t> heisenberg_ball_sizes(int radius) {
    using Coord = std::array<std::int64_t, 3>;  // (a, b, c)
    // right-multiplication by x: (a,b,c) -> (a+1, b, c)
    // right-multiplication by y: (a,b,c) -> (a, b+1, c+a)
    auto step = [](const Coord& g, int dir) {
        Coord h = g;
        switch (dir) {
            case 0: h[0] += 1; break;
            case 1: h[1] += 1; h[2] += g[0]; break;
            case 2: h[0] -= 1; break;
            case 3: h[1] -= 1; h[2] -= g[0]; break;
        }
        return h;
    };
    std::set<Coord> seen{{0, 0, 0}};
    std::vector<Coord> frontier{{0, 0, 0}};
    std::vector<std::int64_t> sizes{1};
    for (int r = 1; r <= radius; ++r) {
        std::vector<Coord> next;
        for (const auto& g : frontier)
            for (int dir = 0; dir < 4; ++dir) {
                const Coord h = step(g, dir);
                if (seen.insert(h).second) next.push_back(h);
            }
        frontier = std::move(next);
        sizes.push_back(sizes.back() + static_cast<std::int64_t>(frontier.size()));
    }
    return sizes;
}

// Recursive DFS partition of a region into open clusters, canonical ids.
inline std::map<std::uint32_t, std::uint32_t> dfs_clusters(const perc::Config& config,
                                                           const perc::VertexSet& region) {
    const perc::GraphWindow& win = config.window();
    std::map<std::uint32_t, std::uint32_t> id;
    for (const std::uint32_t start : region) {
        if (id.count(start)) continue;
        std::vector<std::uint32_t> stack{start};
        std::vector<std::uint32_t> members;
        std::set<std::uint32_t> seen{start};
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            members.push_back(v);
            for (const auto& arc : win.neighbors(v)) {
                if (!region.contains(arc.to) || seen.count(arc.to)) continue;
                if (!config.open(arc.edge)) continue;
                seen.insert(arc.to);
                stack.push_back(arc.to);
            }
        }
        std::uint32_t min_v = members.front();
        for (const auto m : members) min_v = std::min(min_v, m);
        for (const auto m : members) id[m] = min_v;
    }
    return id;
}

// All 2^k assignments over the given edges; other edges fixed closed.
inline std::vector<std::vector<std::uint8_t>> all_masks(const perc::GraphWindow& win,
                                                        const std::vector<std::uint32_t>& edges) {
    std::vector<std::vector<std::uint8_t>> out;
    const std::size_t k = edges.size();
    for (std::uint64_t bits = 0; bits < (1ULL << k); ++bits) {
        std::vector<std::uint8_t> mask(win.edge_count(), 0);
        for (std::size_t i = 0; i < k; ++i)
            if (bits & (1ULL << i)) mask[edges[i]] = 1;
        out.push_back(std::move(mask));
    }
    return out;
}

}  // namespace oracle
