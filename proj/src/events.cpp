#include "perc/events.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

#include "perc/detail/scratch.hpp"

namespace perc {

namespace detail {

Scratch& thread_scratch() {
    thread_local Scratch scratch;
    return scratch;
}

}  // namespace detail

int SeedSchedule::sigma(int n) const {
    if (n < 1) throw std::invalid_argument("sigma(n) requires n >= 1");
    const double v = std::exp(std::pow(std::log(static_cast<double>(n)), chi * chi * chi));
    return std::max(1, static_cast<int>(std::floor(v)));
}

int SeedSchedule::t(int n) const {
    if (n < 1) throw std::invalid_argument("t(n) requires n >= 1");
    const double v = std::exp(std::pow(std::log(static_cast<double>(n)), chi * chi));
    return std::max(1, static_cast<int>(std::floor(v)));
}

double SeedSchedule::epsilon(int n) const {
    if (n < 2) throw std::invalid_argument("epsilon(n) requires n >= 2");
    return 1.0 / std::pow(std::log(static_cast<double>(n)), 10.0);
}

int SeedSchedule::valid_from() const {
    constexpr int probe_to = 4096;
    int from = 1;
    for (int n = probe_to; n >= 1; --n) {
        if (!(sigma(n) <= t(n) && t(n) <= n)) {
            from = n + 1;
            break;
        }
    }
    return from;
}

namespace {

using detail::Scratch;
using detail::thread_scratch;

void require_ball_fits(const GraphWindow& win, std::uint32_t x, int n, const char* op) {
    if (win.dist(x) + n > win.radius())
        throw margin_error(std::string(op) + " requires dist(x) + n <= W");
}

// Clusters of B_n(x) that meet B_m(x) and contain a vertex at distance n
// from x. Assumes the ball BFS has already filled the scratch.
int crossing_clusters_of_ball(const GraphWindow& win, const Config& config, Scratch& s, int m,
                              int n, int stop_at = -1) {
    for (const std::uint32_t v : s.queue) {
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || !s.in_ball(arc.to)) continue;
            if (config.open(arc.edge)) s.uf_merge(v, arc.to);
        }
    }
    constexpr std::uint8_t kMeets = 1;
    constexpr std::uint8_t kReaches = 2;
    int count = 0;
    for (const std::uint32_t v : s.queue) {
        const bool meets = s.depth[v] <= m;
        const bool reaches = s.depth[v] == n;
        if (!meets && !reaches) continue;
        const std::uint32_t root = s.uf_find(v);
        auto& f = s.flag(root);
        const std::uint8_t before = f;
        if (meets) f |= kMeets;
        if (reaches) f |= kReaches;
        if (f == (kMeets | kReaches) && before != (kMeets | kReaches)) {
            ++count;
            if (stop_at > 0 && count >= stop_at) return count;
        }
    }
    return count;
}

}  // namespace

bool piv(const Config& config, std::uint32_t x, int m, int n) {
    if (m < 1 || m > n) throw std::invalid_argument("piv requires 1 <= m <= n");
    const GraphWindow& win = config.window();
    require_ball_fits(win, x, n, "piv");
    Scratch& s = thread_scratch();
    s.begin(win);
    s.ball_bfs(win, x, n);
    return crossing_clusters_of_ball(win, config, s, m, n, 2) >= 2;
}

bool uniqueness(const Config& config, std::uint32_t x, int m, int n) {
    return !piv(config, x, m, n);
}

bool sprinkled_uniqueness(const LabelField& labels, double p, double q, std::uint32_t x, int m,
                          int n) {
    if (p > q) throw std::invalid_argument("sprinkled_uniqueness requires p <= q");
    if (m < 1 || m > n) throw std::invalid_argument("sprinkled_uniqueness requires 1 <= m <= n");
    const GraphWindow& win = labels.window();
    require_ball_fits(win, x, n, "sprinkled_uniqueness");

    const Config at_p(labels, p);
    Scratch& s = thread_scratch();
    s.begin(win);
    s.ball_bfs(win, x, n);
    for (const std::uint32_t v : s.queue) {
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || !s.in_ball(arc.to)) continue;
            if (at_p.open(arc.edge)) s.uf_merge(v, arc.to);
        }
    }
    constexpr std::uint8_t kMeets = 1;
    constexpr std::uint8_t kReaches = 2;
    constexpr std::uint8_t kListed = 4;
    std::vector<std::uint32_t> reps;  // one vertex per crossing p-cluster
    for (const std::uint32_t v : s.queue) {
        const bool meets = s.depth[v] <= m;
        const bool reaches = s.depth[v] == n;
        if (!meets && !reaches) continue;
        const std::uint32_t root = s.uf_find(v);
        auto& f = s.flag(root);
        if (meets) f |= kMeets;
        if (reaches) f |= kReaches;
        if ((f & (kMeets | kReaches)) == (kMeets | kReaches) && !(f & kListed)) {
            f |= kListed;
            reps.push_back(root);
        }
    }
    if (reps.size() <= 1) return true;

    // Same ball at level q; p-clusters are nested inside q-clusters.
    const Config at_q(labels, q);
    Scratch q_scratch;  // keep the p-partition in `s` intact
    q_scratch.begin(win);
    q_scratch.ball_bfs(win, x, n);
    for (const std::uint32_t v : q_scratch.queue) {
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || !q_scratch.in_ball(arc.to)) continue;
            if (at_q.open(arc.edge)) q_scratch.uf_merge(v, arc.to);
        }
    }
    const std::uint32_t first = q_scratch.uf_find(reps[0]);
    for (std::size_t i = 1; i < reps.size(); ++i)
        if (q_scratch.uf_find(reps[i]) != first) return false;
    return true;
}

bool corridor_crossing(const Config& config, const PathSpec& path, int n) {
    const GraphWindow& win = config.window();
    for (std::uint32_t v : path.vertices())
        if (win.dist(v) + n > win.radius())
            throw margin_error("corridor_crossing requires the corridor inside the window");
    if (path.origin() == path.endpoint()) return true;

    Scratch& s = thread_scratch();
    s.begin(win);
    // multi-source ball of radius n about the path
    for (std::uint32_t v : path.vertices()) {
        if (s.stamp[v] == s.epoch) continue;
        s.stamp[v] = s.epoch;
        s.depth[v] = 0;
        s.queue.push_back(v);
    }
    for (std::size_t head = 0; head < s.queue.size(); ++head) {
        const std::uint32_t v = s.queue[head];
        if (s.depth[v] == n) continue;
        for (const auto& arc : win.neighbors(v)) {
            if (s.stamp[arc.to] == s.epoch) continue;
            s.stamp[arc.to] = s.epoch;
            s.depth[arc.to] = s.depth[v] + 1;
            s.queue.push_back(arc.to);
        }
    }
    // open-edge flood from the origin within the corridor; uf_stamp doubles
    // as the visited marker for this epoch
    const std::uint32_t target = path.endpoint();
    std::vector<std::uint32_t> flood{path.origin()};
    s.uf_stamp[path.origin()] = s.epoch;
    for (std::size_t head = 0; head < flood.size(); ++head) {
        const std::uint32_t v = flood[head];
        for (const auto& arc : win.neighbors(v)) {
            if (!s.in_ball(arc.to) || s.uf_stamp[arc.to] == s.epoch) continue;
            if (!config.open(arc.edge)) continue;
            if (arc.to == target) return true;
            s.uf_stamp[arc.to] = s.epoch;
            flood.push_back(arc.to);
        }
    }
    return false;
}

namespace {

// Flood the open cluster of o across the whole window. Returns (max distance
// reached, volume, touched window boundary); exits early once the boundary is
// touched since every caller treats that as "infinite".
struct ClusterReach {
    int max_dist;
    std::int64_t volume;
    bool touched_boundary;
};

ClusterReach cluster_of_origin(const GraphWindow& win, const Config& config) {
    Scratch& s = thread_scratch();
    s.begin(win);
    s.stamp[0] = s.epoch;
    s.queue.push_back(0);
    ClusterReach out{0, 1, win.radius() == 0};
    if (out.touched_boundary) return out;
    // depth-first with outward bias: boundary touches exit after exploring
    // O(W)-ish vertices instead of a whole ball layer-by-layer
    while (!s.queue.empty()) {
        const std::uint32_t v = s.queue.back();
        s.queue.pop_back();
        const int dv = win.dist(v);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& arc : win.neighbors(v)) {
                const bool outward = win.dist(arc.to) > dv;
                if (outward != (pass == 1)) continue;  // inward first, outward on top
                if (s.stamp[arc.to] == s.epoch || !config.open(arc.edge)) continue;
                s.stamp[arc.to] = s.epoch;
                ++out.volume;
                const int d = win.dist(arc.to);
                if (d > out.max_dist) out.max_dist = d;
                if (d == win.radius()) {
                    out.touched_boundary = true;
                    return out;
                }
                s.queue.push_back(arc.to);
            }
        }
    }
    return out;
}

}  // namespace

bool truncated_radius_event(const LabelField& labels, double p, int n) {
    const GraphWindow& win = labels.window();
    if (3 * n > win.radius())
        throw margin_error("trunc_radius requires n <= W/3 (window-boundary proxy margin)");
    const Config config(labels, p);
    const ClusterReach reach = cluster_of_origin(win, config);
    return !reach.touched_boundary && reach.max_dist >= n;
}

bool truncated_volume_event(const LabelField& labels, double p, std::int64_t n_vol) {
    const GraphWindow& win = labels.window();
    if (n_vol > win.ball_size(win.radius() / 3))
        throw margin_error("trunc_volume requires n_vol <= |B_{W/3}| (window-boundary proxy margin)");
    const Config config(labels, p);
    const ClusterReach reach = cluster_of_origin(win, config);
    return !reach.touched_boundary && reach.volume >= n_vol;
}

bool local_existence_uniqueness_at(const Config& config, std::uint32_t x, int n) {
    const GraphWindow& win = config.window();
    require_ball_fits(win, x, n, "prop1 event");
    const int inner = n / 10;
    const int um = n / 5;
    if (inner < 1 || um < 1)
        throw margin_error("prop1 event requires n >= 10 (floored ratios must be positive)");

    Scratch& s = thread_scratch();
    s.begin(win);
    s.ball_bfs(win, x, n);
    const bool crossing = crossing_clusters_of_ball(win, config, s, inner, n, 1) >= 1;
    if (!crossing) return false;
    return uniqueness(config, x, um, n / 2);
}

bool local_existence_uniqueness(const Config& config, int n) {
    const GraphWindow& win = config.window();
    if (n > win.radius()) throw margin_error("prop1 event requires n <= W");
    return local_existence_uniqueness_at(config, 0, n);
}

bool two_seed_connected(const Config& config, std::uint32_t x, std::uint32_t y, int n,
                        int sigma) {
    const GraphWindow& win = config.window();
    if (n > win.radius()) throw margin_error("two_seed requires n <= W");
    if (win.dist(x) + sigma > n || win.dist(y) + sigma > n)
        throw margin_error("two_seed requires both seeds inside B_n");
    if (x == y) return true;

    Scratch& s = thread_scratch();
    s.begin(win);

    // seed balls (window metric, radius sigma)
    auto seed_ball = [&](std::uint32_t c) {
        std::vector<std::uint32_t> out{c};
        std::vector<int> d(win.vertex_count(), -1);
        d[c] = 0;
        for (std::size_t head = 0; head < out.size(); ++head) {
            const std::uint32_t v = out[head];
            if (d[v] == sigma) continue;
            for (const auto& arc : win.neighbors(v)) {
                if (d[arc.to] >= 0) continue;
                d[arc.to] = d[v] + 1;
                out.push_back(arc.to);
            }
        }
        return out;
    };
    const auto bx = seed_ball(x);
    const auto by = seed_ball(y);

    for (std::uint32_t v : bx)
        for (std::uint32_t u : by)
            if (u == v) return true;  // overlapping seeds

    // region = B_n about o via the window distance table
    std::vector<std::uint8_t> target(win.vertex_count(), 0);
    for (std::uint32_t v : by) target[v] = 1;

    std::vector<std::uint32_t> flood;
    for (std::uint32_t v : bx) {
        if (s.uf_stamp[v] == s.epoch) continue;
        s.uf_stamp[v] = s.epoch;
        flood.push_back(v);
    }
    for (std::size_t head = 0; head < flood.size(); ++head) {
        const std::uint32_t v = flood[head];
        for (const auto& arc : win.neighbors(v)) {
            if (win.dist(arc.to) > n) continue;
            if (s.uf_stamp[arc.to] == s.epoch || !config.open(arc.edge)) continue;
            if (target[arc.to]) return true;
            s.uf_stamp[arc.to] = s.epoch;
            flood.push_back(arc.to);
        }
    }
    return false;
}

CoarseField coarse_field(const LabelField& labels, double p, int k, int workers) {
    const GraphWindow& win = labels.window();
    if (k < 10) throw margin_error("coarse_field requires k >= 10 (nonzero floored ratios)");
    if (k > win.radius()) throw margin_error("coarse_field requires k <= W");
    const Config config(labels, p);

    CoarseField out;
    out.window = &win;
    out.k = k;
    out.value.assign(win.vertex_count(), -1);

    const std::uint32_t V = win.vertex_count();
    auto eval_range = [&](std::uint32_t lo, std::uint32_t hi) {
        for (std::uint32_t v = lo; v < hi; ++v) {
            if (win.dist(v) + k > win.radius()) continue;
            out.value[v] = local_existence_uniqueness_at(config, v, k) ? 1 : 0;
        }
    };
    if (workers <= 1) {
        eval_range(0, V);
    } else {
        std::vector<std::thread> pool;
        const std::uint32_t chunk = (V + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            const std::uint32_t lo = std::min(V, static_cast<std::uint32_t>(w) * chunk);
            const std::uint32_t hi = std::min(V, lo + chunk);
            if (lo < hi) pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& t : pool) t.join();
    }
    return out;
}

std::optional<CoarseCutset> smallest_closed_coarse_cutset(const CoarseField& field) {
    const GraphWindow& win = *field.window;
    const int reach = field.evaluable_radius();
    if (reach < 1 || !field.evaluable(0))
        throw margin_error("coarse cutset scan requires an evaluable region around o");

    // X-open component of o (o always included), inside the evaluable region
    std::vector<std::uint8_t> in_comp(win.vertex_count(), 0);
    std::vector<std::uint32_t> comp{0};
    in_comp[0] = 1;
    bool touches_boundary = win.dist(0) == reach;
    for (std::size_t head = 0; head < comp.size() && !touches_boundary; ++head) {
        const std::uint32_t v = comp[head];
        for (const auto& arc : win.neighbors(v)) {
            if (in_comp[arc.to] || !field.evaluable(arc.to) || !field.open(arc.to)) continue;
            in_comp[arc.to] = 1;
            comp.push_back(arc.to);
            if (win.dist(arc.to) == reach) {
                touches_boundary = true;
                break;
            }
        }
    }
    if (touches_boundary) return std::nullopt;

    // exterior vertex boundary; all members are evaluable and X-closed
    std::vector<std::uint32_t> boundary;
    std::vector<std::uint8_t> in_boundary(win.vertex_count(), 0);
    for (std::uint32_t v : comp)
        for (const auto& arc : win.neighbors(v)) {
            if (in_comp[arc.to] || in_boundary[arc.to]) continue;
            in_boundary[arc.to] = 1;
            boundary.push_back(arc.to);
        }
    std::sort(boundary.begin(), boundary.end());

    // prune to an inclusion-minimal cutset between the component and the
    // evaluable-region boundary
    auto still_cuts = [&](const std::vector<std::uint32_t>& pi) {
        std::vector<std::uint8_t> blocked(win.vertex_count(), 0);
        for (std::uint32_t v : pi) blocked[v] = 1;
        std::vector<std::uint32_t> flood = comp;
        std::vector<std::uint8_t> seen = in_comp;
        for (std::size_t head = 0; head < flood.size(); ++head) {
            const std::uint32_t v = flood[head];
            if (win.dist(v) == reach) return false;
            for (const auto& arc : win.neighbors(v)) {
                if (seen[arc.to] || blocked[arc.to]) continue;
                if (!field.evaluable(arc.to)) continue;
                seen[arc.to] = 1;
                flood.push_back(arc.to);
            }
        }
        return true;
    };

    std::vector<std::uint32_t> pruned = boundary;
    for (std::uint32_t v : boundary) {
        std::vector<std::uint32_t> rest;
        rest.reserve(pruned.size());
        for (std::uint32_t u : pruned)
            if (u != v) rest.push_back(u);
        if (still_cuts(rest)) pruned = std::move(rest);
    }

    CoarseCutset out;
    out.cutset = VertexSet(std::move(pruned));
    out.component = VertexSet(std::move(comp));
    return out;
}

int hybrid_crossing_count(const LabelField& labels, double p, double delta, int r, int n) {
    const GraphWindow& win = labels.window();
    if (delta < 0) throw std::invalid_argument("hybrid_crossing_count requires delta >= 0");
    if (p + delta > 1.0 + 1e-12)
        throw std::invalid_argument("hybrid_crossing_count requires p + delta <= 1");
    if (r > 2 * n || 4 * n > win.radius())
        throw margin_error("hybrid_crossing_count requires r <= 2n and 4n <= W");
    const int outer = 4 * n;
    const Config at_p(labels, p);

    // p-clusters of B_outer and which of them reach distance outer
    Scratch& s = thread_scratch();
    s.begin(win);
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (win.dist(v) > outer) continue;
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || win.dist(arc.to) > outer) continue;
            if (at_p.open(arc.edge)) s.uf_merge(v, arc.to);
        }
    }
    constexpr std::uint8_t kPReaches = 1;
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v)
        if (win.dist(v) == outer) s.flag(s.uf_find(v)) |= kPReaches;

    // second union-find pass over the hybrid configuration Y_r
    Scratch y;  // separate stamps; `s` still holds the p-partition
    y.begin(win);
    const double q = std::min(1.0, p + delta);
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (win.dist(v) > outer) continue;
        for (const auto& arc : win.neighbors(v)) {
            if (arc.to < v || win.dist(arc.to) > outer) continue;
            const bool touches_core = win.dist(v) <= r || win.dist(arc.to) <= r;
            bool open;
            if (touches_core) {
                open = at_p.open(arc.edge) && (s.flag(s.uf_find(v)) & kPReaches);
            } else {
                open = labels.label(arc.edge) <= q;
            }
            if (open) y.uf_merge(v, arc.to);
        }
    }
    constexpr std::uint8_t kMeets = 1;
    constexpr std::uint8_t kReaches = 2;
    int count = 0;
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        const int d = win.dist(v);
        if (d > outer) continue;
        const bool meets = d <= r;
        const bool reaches = d == outer;
        if (!meets && !reaches) continue;
        const std::uint32_t root = y.uf_find(v);
        auto& f = y.flag(root);
        const std::uint8_t before = f;
        if (meets) f |= kMeets;
        if (reaches) f |= kReaches;
        if (f == (kMeets | kReaches) && before != (kMeets | kReaches)) ++count;
    }
    return count;
}

}  // namespace perc
