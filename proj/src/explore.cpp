#include "perc/explore.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace perc {

namespace {

// Edges of E(B_m): both endpoints at distance <= m ("clusters in A" keep only
// edges inside A).
std::vector<std::uint8_t> region_edge_mask(const GraphWindow& win, int m) {
    std::vector<std::uint8_t> mask(win.edge_count(), 0);
    for (std::uint32_t e = 0; e < win.edge_count(); ++e) {
        const auto [u, v] = win.edge_endpoints(e);
        mask[e] = win.dist(u) <= m && win.dist(v) <= m;
    }
    return mask;
}

}  // namespace

ExplorationTrace explore_cluster(const Config& config, int m, std::uint32_t x) {
    const GraphWindow& win = config.window();
    if (m > win.radius()) throw margin_error("explore_cluster requires m <= W");
    if (win.dist(x) > m) throw std::invalid_argument("start vertex outside B_m");

    const auto in_region = region_edge_mask(win, m);
    const double p = config.p();

    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> frontier;
    std::vector<std::uint8_t> queued(win.edge_count(), 0);
    std::vector<std::uint8_t> in_cluster(win.vertex_count(), 0);
    std::vector<std::uint32_t> cluster{x};
    in_cluster[x] = 1;

    auto push_edges = [&](std::uint32_t v) {
        for (const auto& arc : win.neighbors(v)) {
            if (!in_region[arc.edge] || queued[arc.edge]) continue;
            queued[arc.edge] = 1;
            frontier.push(arc.edge);
        }
    };
    push_edges(x);

    ExplorationTrace out;
    double sum = 0.0;
    while (!frontier.empty()) {
        const std::uint32_t e = frontier.top();
        frontier.pop();
        const bool open = config.open(e);
        out.edges.push_back(e);
        out.status.push_back(open ? 1 : 0);
        if (open) {
            sum -= 1.0 - p;
            ++out.open_count;
            const auto [u, v] = win.edge_endpoints(e);
            for (const std::uint32_t w : {u, v}) {
                if (in_cluster[w]) continue;
                in_cluster[w] = 1;
                cluster.push_back(w);
                push_edges(w);
            }
        } else {
            sum += p;
            ++out.closed_count;
        }
        out.running_sum.push_back(sum);
    }
    out.stop_time = out.edges.size();
    out.final_sum = sum;
    out.cluster = VertexSet(std::move(cluster));
    return out;
}

namespace {

struct RegionClusters {
    std::vector<std::uint32_t> root;     // per vertex; ~0u outside B_m
    std::vector<std::uint8_t> touching;  // per vertex, flag of its root
};

RegionClusters ball_clusters(const Config& config, int m) {
    const GraphWindow& win = config.window();
    RegionClusters rc;
    rc.root.assign(win.vertex_count(), ~0u);
    rc.touching.assign(win.vertex_count(), 0);

    std::vector<std::uint32_t> parent(win.vertex_count());
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) parent[v] = v;
    auto find = [&](std::uint32_t v) {
        std::uint32_t r = v;
        while (parent[r] != r) r = parent[r];
        while (parent[v] != r) {
            const auto nxt = parent[v];
            parent[v] = r;
            v = nxt;
        }
        return r;
    };

    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (win.dist(v) > m) continue;
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || win.dist(arc.to) > m) continue;
            if (!config.open(arc.edge)) continue;
            const auto a = find(v);
            const auto b = find(arc.to);
            if (a == b) continue;
            parent[std::max(a, b)] = std::min(a, b);
        }
    }
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (win.dist(v) > m) continue;
        rc.root[v] = find(v);
        if (win.dist(v) == m) rc.touching[rc.root[v]] = 1;
    }
    return rc;
}

}  // namespace

std::vector<std::uint32_t> meeting_edges(const Config& config, int m) {
    const GraphWindow& win = config.window();
    if (m >= win.radius()) throw margin_error("meeting_edges requires m < W");
    const auto rc = ball_clusters(config, m);
    std::vector<std::uint32_t> out;
    for (std::uint32_t e = 0; e < win.edge_count(); ++e) {
        if (config.open(e)) continue;
        const auto [u, v] = win.edge_endpoints(e);
        if (win.dist(u) > m || win.dist(v) > m) continue;
        const auto ru = rc.root[u];
        const auto rv = rc.root[v];
        if (ru != rv && rc.touching[ru] && rc.touching[rv]) out.push_back(e);
    }
    return out;
}

CountingTallies counting_identity_check(const Config& config, int m) {
    const GraphWindow& win = config.window();
    if (m >= win.radius()) throw margin_error("counting_identity_check requires m < W");
    const auto rc = ball_clusters(config, m);
    const double p = config.p();

    // per-root open/closed adjacency tallies (set semantics per cluster)
    std::vector<std::int64_t> open_adj(win.vertex_count(), 0);
    std::vector<std::int64_t> closed_adj(win.vertex_count(), 0);

    CountingTallies t;
    for (std::uint32_t e = 0; e < win.edge_count(); ++e) {
        const auto [u, v] = win.edge_endpoints(e);
        if (win.dist(u) > m || win.dist(v) > m) continue;
        const auto ru = rc.root[u];
        const auto rv = rc.root[v];
        if (config.open(e)) {
            // endpoints share a cluster
            ++open_adj[ru];
            if (rc.touching[ru]) ++t.rhs_open;
        } else {
            ++closed_adj[ru];
            if (ru != rv) ++closed_adj[rv];
            if (rc.touching[ru] || rc.touching[rv]) ++t.rhs_closed;
            if (ru != rv && rc.touching[ru] && rc.touching[rv]) ++t.meeting_count;
        }
    }
    t.rhs_closed += t.meeting_count;

    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (rc.root[v] != v || !rc.touching[v]) continue;  // roots of boundary clusters
        t.lhs_open += open_adj[v];
        t.lhs_closed += closed_adj[v];
        t.h_sum += p * static_cast<double>(closed_adj[v]) - (1.0 - p) * static_cast<double>(open_adj[v]);
    }
    return t;
}

}  // namespace perc
