#pragma once

#include <cstdint>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/perco.hpp"

// Reusable per-thread buffers for the replica-hot evaluators. Epoch stamps
// avoid clearing arrays between replicas.

namespace perc::detail {

struct Scratch {
    std::vector<std::uint32_t> stamp;   // BFS membership epoch
    std::vector<int> depth;             // valid where stamp == epoch
    std::vector<std::uint32_t> queue;   // BFS order of the current ball
    std::vector<std::uint32_t> parent;  // union-find, window-indexed
    std::vector<std::uint32_t> uf_stamp;
    std::vector<std::uint32_t> flag_stamp;
    std::vector<std::uint8_t> flags;
    std::uint32_t epoch = 0;

    void ensure(std::uint32_t n) {
        if (stamp.size() < n) {
            stamp.resize(n, 0);
            depth.resize(n, 0);
            parent.resize(n, 0);
            uf_stamp.resize(n, 0);
            flag_stamp.resize(n, 0);
            flags.resize(n, 0);
        }
    }

    void begin(const GraphWindow& win) {
        ensure(win.vertex_count());
        ++epoch;
        queue.clear();
    }

    bool in_ball(std::uint32_t v) const { return stamp[v] == epoch; }

    // Fills queue/depth with the ball of radius r around x (window metric).
    void ball_bfs(const GraphWindow& win, std::uint32_t x, int r) {
        stamp[x] = epoch;
        depth[x] = 0;
        queue.push_back(x);
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t v = queue[head];
            if (depth[v] == r) continue;
            for (const auto& arc : win.neighbors(v)) {
                if (stamp[arc.to] == epoch) continue;
                stamp[arc.to] = epoch;
                depth[arc.to] = depth[v] + 1;
                queue.push_back(arc.to);
            }
        }
    }

    std::uint32_t uf_find(std::uint32_t v) {
        if (uf_stamp[v] != epoch) {
            uf_stamp[v] = epoch;
            parent[v] = v;
            return v;
        }
        std::uint32_t root = v;
        while (parent[root] != root) root = parent[root];
        while (parent[v] != root) {
            const std::uint32_t next = parent[v];
            parent[v] = root;
            v = next;
        }
        return root;
    }

    void uf_merge(std::uint32_t a, std::uint32_t b) {
        a = uf_find(a);
        b = uf_find(b);
        if (a == b) return;
        if (a < b)
            parent[b] = a;
        else
            parent[a] = b;
    }

    // Per-root bit flags, lazily reset by epoch.
    std::uint8_t& flag(std::uint32_t root) {
        if (flag_stamp[root] != epoch) {
            flag_stamp[root] = epoch;
            flags[root] = 0;
        }
        return flags[root];
    }
};

Scratch& thread_scratch();

}  // namespace perc::detail
