#include "perc/perco.hpp"

#include <algorithm>
#include <stdexcept>

namespace perc {

namespace {

struct UnionFind {
    std::vector<std::uint32_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<std::uint32_t>(i);
    }
    std::uint32_t find(std::uint32_t x) {
        std::uint32_t root = x;
        while (parent[root] != root) root = parent[root];
        while (parent[x] != root) {
            const std::uint32_t next = parent[x];
            parent[x] = root;
            x = next;
        }
        return root;
    }
    void merge(std::uint32_t a, std::uint32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (a < b)
            parent[b] = a;  // keep the smaller position as root => canonical ids
        else
            parent[a] = b;
    }
};

}  // namespace

LabelField label_field(const GraphWindow& window, std::uint64_t seed, std::uint64_t replica) {
    return LabelField(window, seed, replica);
}

std::uint32_t ClusterDecomposition::id_of(std::uint32_t vertex) const {
    const auto& idx = region.indices();
    const auto it = std::lower_bound(idx.begin(), idx.end(), vertex);
    if (it == idx.end() || *it != vertex)
        throw std::out_of_range("vertex not in decomposition region");
    return cluster_of[static_cast<std::size_t>(it - idx.begin())];
}

const ClusterDecomposition::Info& ClusterDecomposition::info(std::uint32_t id) const {
    const auto it = std::lower_bound(clusters.begin(), clusters.end(), id,
                                     [](const Info& a, std::uint32_t b) { return a.id < b; });
    if (it == clusters.end() || it->id != id) throw std::out_of_range("unknown cluster id");
    return *it;
}

std::vector<std::uint32_t> ClusterDecomposition::clusters_meeting(const VertexSet& s) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v : s) {
        const auto& idx = region.indices();
        const auto it = std::lower_bound(idx.begin(), idx.end(), v);
        if (it == idx.end() || *it != v) continue;
        out.push_back(cluster_of[static_cast<std::size_t>(it - idx.begin())]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ClusterDecomposition clusters_in(const Config& config, const VertexSet& region) {
    const GraphWindow& win = config.window();
    const auto& idx = region.indices();

    // position of each window vertex inside the region, or npos
    constexpr std::uint32_t npos = ~0u;
    std::vector<std::uint32_t> pos(win.vertex_count(), npos);
    for (std::size_t i = 0; i < idx.size(); ++i) pos[idx[i]] = static_cast<std::uint32_t>(i);

    UnionFind uf(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::uint32_t v = idx[i];
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v) continue;  // handle each edge once
            if (pos[arc.to] == npos) continue;
            if (config.open(arc.edge)) uf.merge(static_cast<std::uint32_t>(i), pos[arc.to]);
        }
    }

    ClusterDecomposition out;
    out.region = region;
    out.cluster_of.resize(idx.size());

    // Roots keep the smallest position, so root position maps to the minimal
    // vertex index of the cluster (region indices are sorted).
    std::vector<std::uint32_t> root_slot(idx.size(), npos);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const std::uint32_t r = uf.find(static_cast<std::uint32_t>(i));
        const std::uint32_t id = idx[r];
        out.cluster_of[i] = id;
        if (root_slot[r] == npos) {
            root_slot[r] = static_cast<std::uint32_t>(out.clusters.size());
            out.clusters.push_back(
                ClusterDecomposition::Info{id, 0, idx[i], win.dist(idx[i])});
        }
        auto& info = out.clusters[root_slot[r]];
        ++info.volume;
        const int d = win.dist(idx[i]);
        if (d > info.farthest_dist) {
            info.farthest_dist = d;
            info.farthest_vertex = idx[i];
        }
    }
    std::sort(out.clusters.begin(), out.clusters.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    return out;
}

namespace {

void require_subset(const VertexSet& part, const VertexSet& whole, const char* what) {
    for (std::uint32_t v : part)
        if (!whole.contains(v)) throw std::invalid_argument(std::string(what) + " outside region");
}

}  // namespace

bool connected_in(const Config& config, const VertexSet& region, const VertexSet& A,
                  const VertexSet& B) {
    require_subset(A, region, "A");
    require_subset(B, region, "B");
    if (A.intersects(B)) return true;
    if (A.empty() || B.empty()) return false;

    const GraphWindow& win = config.window();
    std::vector<std::uint8_t> in_region(win.vertex_count(), 0);
    for (std::uint32_t v : region) in_region[v] = 1;
    std::vector<std::uint8_t> target(win.vertex_count(), 0);
    for (std::uint32_t v : B) target[v] = 1;

    std::vector<std::uint8_t> seen(win.vertex_count(), 0);
    std::vector<std::uint32_t> queue;
    for (std::uint32_t v : A) {
        seen[v] = 1;
        queue.push_back(v);
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t v = queue[head];
        for (const auto& arc : win.neighbors(v)) {
            if (!in_region[arc.to] || seen[arc.to] || !config.open(arc.edge)) continue;
            if (target[arc.to]) return true;
            seen[arc.to] = 1;
            queue.push_back(arc.to);
        }
    }
    return false;
}

int crossing_cluster_count(const Config& config, const VertexSet& region, const VertexSet& A,
                           const VertexSet& B) {
    require_subset(A, region, "A");
    require_subset(B, region, "B");
    const ClusterDecomposition dec = clusters_in(config, region);
    const auto in_a = dec.clusters_meeting(A);
    const auto in_b = dec.clusters_meeting(B);
    std::vector<std::uint32_t> both;
    std::set_intersection(in_a.begin(), in_a.end(), in_b.begin(), in_b.end(),
                          std::back_inserter(both));
    return static_cast<int>(both.size());
}

}  // namespace perc
