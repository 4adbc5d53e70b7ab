#include "perc/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace perc {

namespace {

constexpr int kUnreached = std::numeric_limits<int>::max();

// BFS distances from a source set, optionally confined to allowed vertices.
std::vector<int> bfs_dist(const GraphWindow& win, const std::vector<std::uint32_t>& sources,
                          const std::vector<std::uint8_t>* allowed = nullptr) {
    std::vector<int> d(win.vertex_count(), kUnreached);
    std::vector<std::uint32_t> queue;
    queue.reserve(sources.size());
    for (std::uint32_t s : sources) {
        if (allowed && !(*allowed)[s]) continue;
        if (d[s] == kUnreached) {
            d[s] = 0;
            queue.push_back(s);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t v = queue[head];
        for (const auto& arc : win.neighbors(v)) {
            if (d[arc.to] != kUnreached) continue;
            if (allowed && !(*allowed)[arc.to]) continue;
            d[arc.to] = d[v] + 1;
            queue.push_back(arc.to);
        }
    }
    return d;
}

std::vector<std::uint32_t> boundary_vertices(const GraphWindow& win) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v)
        if (win.dist(v) == win.radius()) out.push_back(v);
    return out;
}

// Pairwise extrinsic distances between the members of a set.
std::vector<std::vector<int>> pairwise_dist(const GraphWindow& win, const VertexSet& s) {
    std::vector<std::vector<int>> out;
    out.reserve(s.size());
    for (std::uint32_t v : s) {
        const auto d = bfs_dist(win, {v});
        std::vector<int> row;
        row.reserve(s.size());
        for (std::uint32_t u : s) row.push_back(d[u]);
        out.push_back(std::move(row));
    }
    return out;
}

int set_diameter(const std::vector<std::vector<int>>& pd) {
    int diam = 0;
    for (const auto& row : pd)
        for (int d : row) diam = std::max(diam, d);
    return diam;
}

// Largest edge of a single-linkage spanning tree: the smallest R' such that
// the distance-<=R' graph on the set is connected.
int coarse_connect_radius(const std::vector<std::vector<int>>& pd) {
    const std::size_t n = pd.size();
    if (n <= 1) return 0;
    std::vector<std::uint8_t> in_tree(n, 0);
    std::vector<int> best(n, kUnreached);
    in_tree[0] = 1;
    for (std::size_t j = 1; j < n; ++j) best[j] = pd[0][j];
    int radius = 0;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t pick = n;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_tree[j] && (pick == n || best[j] < best[pick])) pick = j;
        radius = std::max(radius, best[pick]);
        in_tree[pick] = 1;
        for (std::size_t j = 0; j < n; ++j)
            if (!in_tree[j]) best[j] = std::min(best[j], pd[pick][j]);
    }
    return radius;
}

bool cuts_from_boundary(const GraphWindow& win, const VertexSet& F, const VertexSet& Pi,
                        std::vector<std::uint32_t>* component) {
    std::vector<std::uint8_t> allowed(win.vertex_count(), 1);
    for (std::uint32_t v : Pi) allowed[v] = 0;
    const auto d = bfs_dist(win, std::vector<std::uint32_t>(F.begin(), F.end()), &allowed);
    bool reached_boundary = false;
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (d[v] == kUnreached) continue;
        if (win.dist(v) == win.radius()) {
            reached_boundary = true;
            break;
        }
    }
    if (component && !reached_boundary) {
        component->clear();
        for (std::uint32_t v = 0; v < win.vertex_count(); ++v)
            if (d[v] != kUnreached) component->push_back(v);
    }
    return !reached_boundary;
}

}  // namespace

PathSpec::PathSpec(const GraphWindow& window, std::vector<std::uint32_t> vertices)
    : v_(std::move(vertices)) {
    if (v_.empty()) throw std::invalid_argument("path must contain at least one vertex");
    for (std::size_t i = 0; i + 1 < v_.size(); ++i) {
        bool adjacent = false;
        for (const auto& arc : window.neighbors(v_[i]))
            if (arc.to == v_[i + 1]) {
                adjacent = true;
                break;
            }
        if (!adjacent) throw std::invalid_argument("consecutive path vertices are not adjacent");
    }
}

VertexSet exposed_sphere(const GraphWindow& window, std::uint32_t center, int r) {
    if (r < 0) throw margin_error("exposed_sphere requires r >= 0");
    if (window.dist(center) + 2 * r > window.radius())
        throw margin_error("exposed_sphere requires dist(center) + 2r <= W (margin >= r)");
    if (r == 0) return VertexSet::single(center);

    const auto dc = bfs_dist(window, {center});

    std::vector<std::uint8_t> outside(window.vertex_count(), 0);
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v) outside[v] = dc[v] > r;
    const auto reach = bfs_dist(window, boundary_vertices(window), &outside);

    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v) {
        if (dc[v] != r) continue;
        for (const auto& arc : window.neighbors(v))
            if (outside[arc.to] && reach[arc.to] != kUnreached) {
                out.push_back(v);
                break;
            }
    }
    return VertexSet(std::move(out));
}

VertexSet annulus(const GraphWindow& window, int n, int m) {
    if (m < 0) throw margin_error("annulus requires m >= 0");
    if (2 * n > window.radius() || n + m > window.radius())
        throw margin_error("annulus requires 2n <= W and n + m <= W");
    const VertexSet sphere = exposed_sphere(window, 0, n);
    const auto d = bfs_dist(window, std::vector<std::uint32_t>(sphere.begin(), sphere.end()));
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
        if (d[v] <= m) out.push_back(v);
    return VertexSet(std::move(out));
}

Cutset analyze_cutset(const GraphWindow& window, const VertexSet& F, const VertexSet& Pi) {
    if (F.intersects(Pi)) throw std::invalid_argument("F and Pi overlap");
    if (!F.contains(0)) throw std::invalid_argument("F must contain the origin");

    Cutset out;
    out.vertices = Pi;

    std::vector<std::uint32_t> component;
    out.cuts = cuts_from_boundary(window, F, Pi, &component);
    if (out.cuts) out.separated_set = VertexSet(std::move(component));

    if (out.cuts && !Pi.empty()) {
        out.minimal = true;
        for (std::uint32_t v : Pi) {
            std::vector<std::uint32_t> rest;
            for (std::uint32_t u : Pi)
                if (u != v) rest.push_back(u);
            if (cuts_from_boundary(window, F, VertexSet(std::move(rest)), nullptr)) {
                out.minimal = false;  // v was redundant
                break;
            }
        }
    }

    const auto pd_pi = pairwise_dist(window, Pi);
    out.diam_cutset = set_diameter(pd_pi);
    out.r_connected_for = coarse_connect_radius(pd_pi);
    out.diam_f = set_diameter(pairwise_dist(window, F));
    out.min_dist_to_origin = 0;
    if (!Pi.empty()) {
        int best = kUnreached;
        for (std::uint32_t v : Pi) best = std::min(best, window.dist(v));
        out.min_dist_to_origin = best;
    }
    return out;
}

bool verify_sphere_separation(const GraphWindow& window, int r) {
    if (2 * r > window.radius())
        throw margin_error("verify_sphere_separation requires 2r <= W");
    const VertexSet exposed = exposed_sphere(window, 0, r);

    std::vector<std::uint8_t> allowed(window.vertex_count(), 1);
    for (std::uint32_t v : exposed) allowed[v] = 0;
    std::vector<std::uint32_t> sources;
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
        if (window.dist(v) <= r && allowed[v]) sources.push_back(v);
    const auto d = bfs_dist(window, sources, &allowed);
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
        if (window.dist(v) == 2 * r && d[v] != kUnreached) return false;
    return true;
}

PathSpec geodesic(const GraphWindow& window, std::uint32_t x, std::uint32_t y) {
    constexpr std::uint32_t no_parent = ~0u;
    std::vector<std::uint32_t> parent(window.vertex_count(), no_parent);
    std::vector<std::uint8_t> seen(window.vertex_count(), 0);
    std::vector<std::uint32_t> queue{x};
    seen[x] = 1;
    for (std::size_t head = 0; head < queue.size() && !seen[y]; ++head) {
        const std::uint32_t v = queue[head];
        for (const auto& arc : window.neighbors(v)) {
            if (seen[arc.to]) continue;
            seen[arc.to] = 1;
            parent[arc.to] = v;
            queue.push_back(arc.to);
        }
    }
    std::vector<std::uint32_t> path;
    for (std::uint32_t v = y;; v = parent[v]) {
        path.push_back(v);
        if (v == x) break;
    }
    std::reverse(path.begin(), path.end());
    return PathSpec(window, std::move(path));
}

VertexSet corridor(const GraphWindow& window, const PathSpec& path, int n) {
    for (std::uint32_t v : path.vertices())
        if (window.dist(v) + n > window.radius())
            throw margin_error("corridor requires every B_n(path vertex) inside the window");
    const auto d = bfs_dist(window, path.vertices());
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
        if (d[v] <= n) out.push_back(v);
    return VertexSet(std::move(out));
}

std::vector<PathSpec> disjoint_ray_family(const GraphWindow& window, int n, int a) {
    if (a < 1) throw std::invalid_argument("spacing a must be >= 1");
    if (2 * n > window.radius()) throw std::invalid_argument("disjoint_ray_family requires n <= W/2");

    std::vector<PathSpec> rays;
    std::vector<std::uint8_t> free(window.vertex_count(), 1);
    constexpr std::uint32_t no_parent = ~0u;

    for (;;) {
        // shortest free path from B_n to the window boundary
        std::vector<std::uint32_t> parent(window.vertex_count(), no_parent);
        std::vector<std::uint8_t> seen(window.vertex_count(), 0);
        std::vector<std::uint32_t> queue;
        for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
            if (window.dist(v) <= n && free[v]) {
                seen[v] = 1;
                queue.push_back(v);
            }
        std::uint32_t hit = no_parent;
        for (std::size_t head = 0; head < queue.size() && hit == no_parent; ++head) {
            const std::uint32_t v = queue[head];
            if (window.dist(v) == window.radius()) {
                hit = v;
                break;
            }
            for (const auto& arc : window.neighbors(v)) {
                if (seen[arc.to] || !free[arc.to]) continue;
                seen[arc.to] = 1;
                parent[arc.to] = v;
                queue.push_back(arc.to);
            }
        }
        if (hit == no_parent) break;

        std::vector<std::uint32_t> path;
        for (std::uint32_t v = hit;; v = parent[v]) {
            path.push_back(v);
            if (parent[v] == no_parent) break;
        }
        std::reverse(path.begin(), path.end());

        // block everything within distance a-1 of the new ray (full metric)
        const auto d = bfs_dist(window, path);
        for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
            if (d[v] < a) free[v] = 0;

        rays.emplace_back(window, std::move(path));
    }
    return rays;
}

}  // namespace perc
