#include "perc/cayley.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace perc {

namespace {

bool is_identity_offset(const Element& g) {
    for (auto c : g)
        if (c != 0) return false;
    return true;
}

Element negate(const Element& g) {
    Element out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = -g[i];
    return out;
}

Element identity_matrix(int n) {
    Element id(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i) * n + i] = 1;
    return id;
}

Element matmul(const Element& a, const Element& b, int n) {
    Element out(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const std::int64_t aik = a[static_cast<std::size_t>(i) * n + k];
            if (aik == 0) continue;
            for (int j = 0; j < n; ++j)
                out[static_cast<std::size_t>(i) * n + j] +=
                    aik * b[static_cast<std::size_t>(k) * n + j];
        }
    return out;
}

// Fraction-free determinant (Bareiss), fine for the small matrices we accept.
std::int64_t int_determinant(Element m, int n) {
    std::int64_t sign = 1;
    std::int64_t prev = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m[static_cast<std::size_t>(k) * n + k] == 0) {
            int swap_row = -1;
            for (int i = k + 1; i < n; ++i)
                if (m[static_cast<std::size_t>(i) * n + k] != 0) {
                    swap_row = i;
                    break;
                }
            if (swap_row < 0) return 0;
            for (int j = 0; j < n; ++j)
                std::swap(m[static_cast<std::size_t>(k) * n + j],
                          m[static_cast<std::size_t>(swap_row) * n + j]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) {
                const std::int64_t num =
                    m[static_cast<std::size_t>(i) * n + j] * m[static_cast<std::size_t>(k) * n + k] -
                    m[static_cast<std::size_t>(i) * n + k] * m[static_cast<std::size_t>(k) * n + j];
                m[static_cast<std::size_t>(i) * n + j] = num / prev;
            }
        prev = m[static_cast<std::size_t>(k) * n + k];
    }
    return sign * m[static_cast<std::size_t>(n - 1) * n + (n - 1)];
}

// General integer matrix inverse for unimodular matrices via adjugate/Gauss.
Element unimodular_inverse(const Element& m, int n) {
    // Gauss-Jordan over rationals with exact integer end state: since
    // det = +-1 the inverse is integral. Use long double accumulation then
    // round; entries stay small for generator matrices.
    std::vector<std::vector<long double>> a(n, std::vector<long double>(2 * n, 0.0L));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) a[i][j] = static_cast<long double>(m[static_cast<std::size_t>(i) * n + j]);
        a[i][n + i] = 1.0L;
    }
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        long double best = 0.0L;
        for (int i = col; i < n; ++i)
            if (std::fabs(static_cast<double>(a[i][col])) > best) {
                best = std::fabs(static_cast<double>(a[i][col]));
                piv = i;
            }
        if (piv < 0) throw config_error("matrix generator is singular");
        std::swap(a[col], a[piv]);
        const long double d = a[col][col];
        for (int j = 0; j < 2 * n; ++j) a[col][j] /= d;
        for (int i = 0; i < n; ++i) {
            if (i == col) continue;
            const long double f = a[i][col];
            if (f == 0.0L) continue;
            for (int j = 0; j < 2 * n; ++j) a[i][j] -= f * a[col][j];
        }
    }
    Element inv(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            inv[static_cast<std::size_t>(i) * n + j] =
                static_cast<std::int64_t>(std::llroundl(a[i][n + j]));
    return inv;
}

// Column Hermite reduction: unimodular column operations triangularise the
// generator matrix; the generators span Z^d iff |prod of pivots| == 1.
bool spans_integer_lattice(const std::vector<Element>& gens, int d) {
    std::vector<Element> cols = gens;
    std::int64_t prod = 1;
    std::size_t fixed = 0;
    for (int row = 0; row < d; ++row) {
        bool changed = true;
        std::size_t best = cols.size();
        while (changed) {
            changed = false;
            best = cols.size();
            for (std::size_t c = fixed; c < cols.size(); ++c)
                if (cols[c][row] != 0 &&
                    (best == cols.size() ||
                     std::llabs(cols[c][row]) < std::llabs(cols[best][row])))
                    best = c;
            if (best == cols.size()) return false;  // rank deficiency in this row
            for (std::size_t c = fixed; c < cols.size(); ++c) {
                if (c == best || cols[c][row] == 0) continue;
                const std::int64_t q = cols[c][row] / cols[best][row];
                for (int r = 0; r < d; ++r) cols[c][r] -= q * cols[best][r];
                if (cols[c][row] != 0) changed = true;
            }
        }
        prod *= cols[best][row];
        std::swap(cols[best], cols[fixed]);
        ++fixed;
    }
    return prod == 1 || prod == -1;
}

void append_le64(std::string& out, std::int64_t v) {
    const auto u = static_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

}  // namespace

GroupSpec GroupSpec::lattice(int d, std::vector<Element> gens) {
    GroupSpec s;
    s.kind = Kind::lattice;
    s.dim = d;
    s.generators = std::move(gens);
    return s;
}

GroupSpec GroupSpec::heisenberg() {
    GroupSpec s;
    s.kind = Kind::heisenberg;
    s.matrix_size = 3;
    s.generators = {
        Element{1, 1, 0, 0, 1, 0, 0, 0, 1},  // x
        Element{1, 0, 0, 0, 1, 1, 0, 0, 1},  // y
    };
    return s;
}

GroupSpec GroupSpec::matrix_group(int size, std::vector<Element> gens) {
    GroupSpec s;
    s.kind = Kind::matrix_group;
    s.matrix_size = size;
    s.generators = std::move(gens);
    return s;
}

GroupModel::GroupModel(GroupSpec spec) : spec_(std::move(spec)) {
    if (spec_.generators.empty()) throw config_error("generator list is empty");

    const bool lattice = spec_.kind == GroupSpec::Kind::lattice;
    if (lattice) {
        if (spec_.dim <= 0) throw config_error("lattice dimension must be positive");
        identity_ = Element(static_cast<std::size_t>(spec_.dim), 0);
        for (const auto& g : spec_.generators) {
            if (static_cast<int>(g.size()) != spec_.dim)
                throw config_error("lattice generator has wrong dimension");
            if (is_identity_offset(g)) throw config_error("generator equals the identity");
        }
        if (!spans_integer_lattice(spec_.generators, spec_.dim))
            throw config_error("generators do not span the integer lattice");
    } else {
        const int n = spec_.matrix_size;
        if (n <= 0) throw config_error("matrix size must be positive");
        identity_ = identity_matrix(n);
        for (const auto& g : spec_.generators) {
            if (static_cast<int>(g.size()) != n * n)
                throw config_error("matrix generator has wrong shape");
            if (g == identity_) throw config_error("generator equals the identity");
            const std::int64_t det = int_determinant(g, n);
            if (det != 1 && det != -1)
                throw config_error("matrix generator is not invertible over the integers");
        }
    }

    // Symmetrize: user generators first, inverses appended unless already present.
    generators_ = spec_.generators;
    for (const auto& g : spec_.generators) {
        Element inv;
        if (lattice)
            inv = negate(g);
        else
            inv = unimodular_inverse(g, spec_.matrix_size);
        bool present = false;
        for (const auto& h : generators_)
            if (h == inv) {
                present = true;
                break;
            }
        if (!present) generators_.push_back(std::move(inv));
    }
}

Element GroupModel::multiply(const Element& x, int gen_index) const {
    const Element& g = generators_[static_cast<std::size_t>(gen_index)];
    if (spec_.kind == GroupSpec::Kind::lattice) {
        Element out(x);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i];
        return out;
    }
    return matmul(x, g, spec_.matrix_size);
}

std::string GroupModel::canonical_key(const Element& x) const {
    std::string out;
    out.reserve(x.size() * 8);
    for (auto c : x) append_le64(out, c);
    return out;
}

GroupModel build_group(const GroupSpec& spec) { return GroupModel(spec); }

GraphWindow::GraphWindow(const GroupModel& group, int W, std::size_t vertex_cap)
    : group_(&group), W_(W) {
    if (W < 0) throw config_error("window radius must be nonnegative");

    std::unordered_map<std::string, std::uint32_t> index_of;
    elements_.push_back(group.identity());
    vertex_keys_.push_back(group.canonical_key(group.identity()));
    dist_.push_back(0);
    index_of.emplace(vertex_keys_[0], 0);

    const int gen_count = group.generator_count();

    // BFS layer by layer; discovery order is fully determined by vertex index
    // order and generator order.
    for (std::uint32_t v = 0; v < elements_.size(); ++v) {
        if (dist_[v] == W_) continue;
        for (int g = 0; g < gen_count; ++g) {
            Element nb = group.multiply(elements_[v], g);
            std::string key = group.canonical_key(nb);
            auto it = index_of.find(key);
            if (it == index_of.end()) {
                if (elements_.size() >= vertex_cap)
                    throw resource_error("window vertex count exceeds the configured cap");
                const auto idx = static_cast<std::uint32_t>(elements_.size());
                index_of.emplace(key, idx);
                elements_.push_back(std::move(nb));
                vertex_keys_.push_back(std::move(key));
                dist_.push_back(dist_[v] + 1);
            }
        }
    }

    // Edges: scan vertices in index order, generators in order; keep each
    // undirected edge once (the graph is simple, parallel edges collapse).
    adjacency_.resize(elements_.size());
    std::unordered_map<std::string, std::uint32_t> edge_index;
    for (std::uint32_t v = 0; v < elements_.size(); ++v) {
        for (int g = 0; g < gen_count; ++g) {
            Element nb = group.multiply(elements_[v], g);
            std::string key = group.canonical_key(nb);
            auto it = index_of.find(key);
            if (it == index_of.end()) continue;  // neighbour outside the window
            const std::uint32_t u = it->second;
            if (u == v) continue;  // involution self-edges collapse in a simple graph
            const std::string& ka = vertex_keys_[v];
            const std::string& kb = vertex_keys_[u];
            std::string ek = (ka < kb) ? ka + kb : kb + ka;
            auto eit = edge_index.find(ek);
            std::uint32_t e;
            if (eit == edge_index.end()) {
                e = static_cast<std::uint32_t>(edge_endpoints_.size());
                edge_index.emplace(ek, e);
                edge_endpoints_.emplace_back(v, u);
                edge_digests_.push_back(rng::edge_digest(ek));
                edge_keys_.push_back(std::move(ek));
            } else {
                e = eit->second;
            }
            bool dup = false;
            for (const auto& arc : adjacency_[v])
                if (arc.to == u) {
                    dup = true;
                    break;
                }
            if (!dup) adjacency_[v].push_back(Arc{u, e});
        }
    }

    // per-radius metrics (cheap margin checks in replica-hot loops)
    cum_ball_.assign(static_cast<std::size_t>(W_) + 1, 0);
    for (const int d : dist_) ++cum_ball_[static_cast<std::size_t>(d)];
    for (int r = 1; r <= W_; ++r) cum_ball_[r] += cum_ball_[r - 1];
    boundary_edges_.assign(static_cast<std::size_t>(W_) + 1, 0);
    for (const auto& [u, v] : edge_endpoints_) {
        const int du = dist_[u];
        const int dv = dist_[v];
        if (du != dv) ++boundary_edges_[static_cast<std::size_t>(std::min(du, dv))];
    }
}

VertexSet GraphWindow::ball(int r) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < vertex_count(); ++v)
        if (dist_[v] <= r) out.push_back(v);
    return VertexSet(std::move(out));
}

VertexSet GraphWindow::sphere(int r) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < vertex_count(); ++v)
        if (dist_[v] == r) out.push_back(v);
    return VertexSet(std::move(out));
}

GraphWindow build_window(const GroupModel& group, int W, std::size_t vertex_cap) {
    return GraphWindow(group, W, vertex_cap);
}

BallMetrics ball_metrics(const GraphWindow& window, int r) {
    if (r < 0 || r >= window.radius())
        throw margin_error("ball_metrics requires 0 <= r < W (edge boundary needs one extra layer)");
    BallMetrics m;
    m.ball_size = window.ball_size(r);
    m.sphere_size = window.sphere_size(r);
    m.edge_boundary_size = window.boundary_edge_count(r);
    return m;
}

GrowthFit growth_exponent_fit(const GroupModel& group, int n_max, std::size_t vertex_cap) {
    if (n_max < 4) throw config_error("growth_exponent_fit requires n_max >= 4");
    GraphWindow window(group, n_max, vertex_cap);
    std::vector<std::int64_t> ball_size(static_cast<std::size_t>(n_max) + 1, 0);
    for (std::uint32_t v = 0; v < window.vertex_count(); ++v)
        ++ball_size[static_cast<std::size_t>(window.dist(v))];
    for (int n = 1; n <= n_max; ++n) ball_size[n] += ball_size[n - 1];

    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    int cnt = 0;
    for (int n = n_max / 2; n <= n_max; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(static_cast<double>(ball_size[n]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
        ++cnt;
    }
    const double den = cnt * sxx - sx * sx;
    const double slope = (cnt * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / cnt;
    double ss_res = 0, ss_tot = 0;
    const double mean_y = sy / cnt;
    for (int n = n_max / 2; n <= n_max; ++n) {
        const double x = std::log(static_cast<double>(n));
        const double y = std::log(static_cast<double>(ball_size[n]));
        const double f = slope * x + intercept;
        ss_res += (y - f) * (y - f);
        ss_tot += (y - mean_y) * (y - mean_y);
    }
    return GrowthFit{slope, ss_tot > 0 ? ss_res / ss_tot : 0.0};
}

RatioScan ratio_scan(const GraphWindow& window, int n) {
    if (n < 0 || 2 * n > window.radius())
        throw margin_error("ratio_scan requires 2n <= W");
    if (n == 0) {
        const auto m0 = ball_metrics(window, 0);
        return RatioScan{0, static_cast<double>(m0.edge_boundary_size)};
    }
    RatioScan best{-1, 0.0};
    for (int m = n; m < 2 * n; ++m) {
        const auto bm = ball_metrics(window, m);
        const double ratio =
            static_cast<double>(bm.edge_boundary_size) / static_cast<double>(bm.ball_size);
        if (best.m < 0 || ratio < best.ratio) best = RatioScan{m, ratio};
    }
    return best;
}

}  // namespace perc
