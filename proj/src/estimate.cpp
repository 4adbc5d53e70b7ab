#include "perc/estimate.hpp"

#include <cmath>
#include <set>
#include <thread>

#include "perc/detail/scratch.hpp"

namespace perc {

namespace {

constexpr double kZ95 = 1.959963984540054;

}  // namespace

Estimate wilson_estimate(std::uint64_t successes, std::uint64_t n_samples, std::uint64_t seed,
                         std::string digest) {
    if (n_samples == 0) throw config_error("estimate requires n_samples >= 1");
    const double n = static_cast<double>(n_samples);
    const double k = static_cast<double>(successes);
    const double z2 = kZ95 * kZ95;
    const double centre = (k + z2 / 2.0) / (n + z2);
    const double half = kZ95 * std::sqrt(k * (n - k) / n + z2 / 4.0) / (n + z2);
    Estimate e;
    e.p_hat = k / n;
    e.ci_low = std::max(0.0, std::min(centre - half, e.p_hat));
    e.ci_high = std::min(1.0, std::max(centre + half, e.p_hat));
    e.n_samples = n_samples;
    e.successes = successes;
    e.seed = seed;
    e.config_digest = std::move(digest);
    return e;
}

std::uint64_t count_successes(std::uint64_t n_samples, int workers,
                              const std::function<bool(std::uint64_t)>& replica_event) {
    if (workers <= 1) {
        std::uint64_t hits = 0;
        for (std::uint64_t r = 0; r < n_samples; ++r)
            if (replica_event(r)) ++hits;
        return hits;
    }
    const auto w = static_cast<std::uint64_t>(workers);
    std::vector<std::uint64_t> partial(w, 0);
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (n_samples + w - 1) / w;
    for (std::uint64_t i = 0; i < w; ++i) {
        const std::uint64_t lo = std::min(n_samples, i * chunk);
        const std::uint64_t hi = std::min(n_samples, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, i] {
            std::uint64_t hits = 0;
            for (std::uint64_t r = lo; r < hi; ++r)
                if (replica_event(r)) ++hits;
            partial[i] = hits;
        });
    }
    for (auto& t : pool) t.join();
    std::uint64_t total = 0;
    for (const auto h : partial) total += h;  // integer sum: order-independent
    return total;
}

void validate_event_margins(const EventSpec& spec, int W) {
    const auto fail = [](const std::string& rule) { throw margin_error("margin rule violated: " + rule); };
    const std::string& e = spec.name;
    if (e == "piv" || e == "uniq" || e == "sprinkled_uniq") {
        if (spec.m_aux < 1 || spec.m_aux > spec.n) fail(e + " requires 1 <= m <= n");
        if (spec.n > W) fail(e + " requires n <= W");
    } else if (e == "corridor") {
        if (spec.m_aux < 0) fail("corridor requires length >= 0");
        if (spec.m_aux + spec.n > W) fail("corridor requires length + n <= W");
    } else if (e == "trunc_radius") {
        if (3 * spec.n > W) fail("trunc_radius requires n <= W/3");
    } else if (e == "trunc_volume") {
        if (spec.n < 1) fail("trunc_volume requires n >= 1");
        // the volume cap |B_{W/3}| is checked against the built window
    } else if (e == "prop1") {
        if (spec.n > W) fail("prop1 requires n <= W");
        if (spec.n < 10) fail("prop1 requires n >= 10");
    } else if (e == "two_seed") {
        if (spec.n > W) fail("two_seed requires n <= W");
        const SeedSchedule sched{spec.chi};
        const int sigma = sched.sigma(spec.n);
        if (spec.dx + sigma > spec.n || spec.dy + sigma > spec.n)
            fail("two_seed requires seed balls inside B_n (dist + sigma <= n)");
    } else if (e == "coarse_cutset") {
        if (spec.k < 10) fail("coarse_cutset requires k >= 10");
        if (spec.k >= W) fail("coarse_cutset requires k < W");
    } else if (e == "hybrid_count") {
        if (spec.m_aux > 2 * spec.n) fail("hybrid_count requires r <= 2n");
        if (4 * spec.n > W) fail("hybrid_count requires 4n <= W");
    } else {
        throw config_error("unknown event name: " + e);
    }
}

namespace {

std::uint32_t vertex_at_distance(const GraphWindow& win, int d, bool last) {
    std::uint32_t found = ~0u;
    for (std::uint32_t v = 0; v < win.vertex_count(); ++v) {
        if (win.dist(v) != d) continue;
        if (!last) return v;
        found = v;
    }
    if (found == ~0u) throw margin_error("no vertex at the requested distance");
    return found;
}

}  // namespace

bool evaluate_event(const GraphWindow& window, const EventSpec& spec, double p,
                    std::uint64_t seed, std::uint64_t replica) {
    const LabelField labels(window, seed, replica);
    const Config config(labels, p);
    const std::string& e = spec.name;
    if (e == "piv") return piv(config, 0, spec.m_aux, spec.n);
    if (e == "uniq") return uniqueness(config, 0, spec.m_aux, spec.n);
    if (e == "sprinkled_uniq")
        return sprinkled_uniqueness(labels, p, std::min(1.0, p + spec.delta), 0, spec.m_aux,
                                    spec.n);
    if (e == "corridor") {
        const std::uint32_t target = vertex_at_distance(window, spec.m_aux, false);
        return corridor_crossing(config, geodesic(window, 0, target), spec.n);
    }
    if (e == "trunc_radius") return truncated_radius_event(labels, p, spec.n);
    if (e == "trunc_volume") return truncated_volume_event(labels, p, spec.n);
    if (e == "prop1") return local_existence_uniqueness(config, spec.n);
    if (e == "two_seed") {
        const SeedSchedule sched{spec.chi};
        const std::uint32_t x = vertex_at_distance(window, spec.dx, false);
        const std::uint32_t y = vertex_at_distance(window, spec.dy, true);
        return two_seed_connected(config, x, y, spec.n, sched.sigma(spec.n));
    }
    if (e == "coarse_cutset") {
        const CoarseField field = coarse_field(labels, p, spec.k);
        const auto cut = smallest_closed_coarse_cutset(field);
        return cut.has_value() && static_cast<int>(cut->cutset.size()) >= spec.n;
    }
    if (e == "hybrid_count") {
        const int r = spec.m_aux;
        return hybrid_crossing_count(labels, p, spec.delta, r, spec.n) <= 1;
    }
    throw config_error("unknown event name: " + e);
}

Estimate estimate_event(const GraphWindow& window, const EventSpec& spec, double p,
                        std::uint64_t seed, std::uint64_t n_samples, int workers) {
    if (n_samples < 1) throw config_error("estimate_event requires n_samples >= 1");
    validate_event_margins(spec, window.radius());
    const std::uint64_t hits = count_successes(
        n_samples, workers,
        [&](std::uint64_t r) { return evaluate_event(window, spec, p, seed, r); });
    return wilson_estimate(hits, n_samples, seed);
}

namespace {

// Deterministic corridor path family for the kappa estimator.
std::vector<PathSpec> kappa_path_family(const GraphWindow& win, int m, int n,
                                        const CorridorPolicy& policy, std::uint64_t seed) {
    std::vector<PathSpec> family;

    if (policy.kind == CorridorPolicy::Kind::exhaustive) {
        if (m > policy.exhaustive_cap)
            throw config_error("exhaustive corridor policy beyond the configured cap");
        // all walks from o of length exactly 0..m (shorter walks are dominated
        // by their endpoints' closeness but belong to the minimum's domain)
        std::vector<std::uint32_t> walk{0};
        auto emit = [&](auto&& self, int remaining) -> void {
            family.emplace_back(win, walk);
            if (remaining == 0) return;
            for (const auto& arc : win.neighbors(walk.back())) {
                if (win.dist(arc.to) + n > win.radius()) continue;
                walk.push_back(arc.to);
                self(self, remaining - 1);
                walk.pop_back();
            }
        };
        emit(emit, m);
        return family;
    }

    // geodesics from o to a spread of distance-m vertices
    if (policy.kind == CorridorPolicy::Kind::geodesic_family) {
        std::vector<std::uint32_t> targets;
        for (std::uint32_t v = 0; v < win.vertex_count(); ++v)
            if (win.dist(v) == m) targets.push_back(v);
        const std::size_t stride = std::max<std::size_t>(
            1, targets.size() / static_cast<std::size_t>(policy.family_cap));
        for (std::size_t i = 0; i < targets.size(); i += stride)
            family.push_back(geodesic(win, 0, targets[i]));
    }

    if (policy.kind == CorridorPolicy::Kind::sampled_saw || policy.saw_count > 0) {
        // deterministic self-avoiding walks of length m from o
        for (int i = 0; i < policy.saw_count; ++i) {
            rng::Stream stream(seed, 0x5a77ULL, static_cast<std::uint64_t>(i));
            for (int attempt = 0; attempt < 64; ++attempt) {
                std::vector<std::uint32_t> walk{0};
                std::set<std::uint32_t> used{0};
                bool stuck = false;
                while (static_cast<int>(walk.size()) - 1 < m) {
                    std::vector<std::uint32_t> options;
                    for (const auto& arc : win.neighbors(walk.back()))
                        if (!used.count(arc.to) && win.dist(arc.to) + n <= win.radius())
                            options.push_back(arc.to);
                    if (options.empty()) {
                        stuck = true;
                        break;
                    }
                    const auto pick = options[stream.next_below(options.size())];
                    walk.push_back(pick);
                    used.insert(pick);
                }
                if (!stuck) {
                    family.emplace_back(win, std::move(walk));
                    break;
                }
            }
        }
    }
    return family;
}

}  // namespace

KappaEstimate corridor_kappa(const GraphWindow& window, int m, int n, double p,
                             const CorridorPolicy& policy, std::uint64_t seed,
                             std::uint64_t n_samples, int workers) {
    if (m < 0) throw config_error("corridor_kappa requires m >= 0");
    if (m + n > window.radius()) throw margin_error("corridor_kappa requires m + n <= W");

    KappaEstimate out;
    out.upper_bound = policy.kind != CorridorPolicy::Kind::exhaustive;
    if (m == 0 || p >= 1.0) {
        out.estimate = wilson_estimate(n_samples, n_samples, seed);
        out.estimate.p_hat = out.estimate.ci_low = out.estimate.ci_high = 1.0;
        out.argmin_path = {0};
        if (m == 0) out.upper_bound = false;
        return out;
    }

    const auto family = kappa_path_family(window, m, n, policy, seed);

    std::uint64_t best_hits = 0;
    std::size_t best_index = 0;
    bool first = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (family[i].origin() == family[i].endpoint() && family[i].length() > 0) continue;
        const auto& path = family[i];
        const std::uint64_t hits =
            count_successes(n_samples, workers, [&](std::uint64_t r) {
                const LabelField labels(window, seed, r);
                const Config config(labels, p);
                return corridor_crossing(config, path, n);
            });
        if (first || hits < best_hits) {
            best_hits = hits;
            best_index = i;
            first = false;
        }
    }
    out.estimate = wilson_estimate(best_hits, n_samples, seed);
    out.argmin_path = family[best_index].vertices();
    return out;
}

int uniqueness_zone_scan(const GraphWindow& window, double p, int n, double threshold,
                         std::uint64_t seed, std::uint64_t n_samples, int workers) {
    if (n > window.radius()) throw margin_error("uniqueness_zone_scan requires n <= W");

    std::uint64_t probe = 0;
    auto piv_hat = [&](int s) {
        const std::uint64_t base = probe * n_samples;
        ++probe;  // fresh replicas per probe
        const std::uint64_t hits = count_successes(n_samples, workers, [&](std::uint64_t r) {
            const LabelField labels(window, seed, base + r);
            const Config config(labels, p);
            return piv(config, 0, s, n);
        });
        return static_cast<double>(hits) / static_cast<double>(n_samples);
    };

    // P[Piv(s, n)] is nondecreasing in s (a union over more pairs), so the
    // feasible set is an initial segment; binary search its left edge.
    int lo = 1;
    int hi = n;
    while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (piv_hat(mid) <= threshold)
            hi = mid;
        else
            lo = mid + 1;
    }
    if (piv_hat(lo) > threshold)
        throw config_error("uniqueness_zone_scan: threshold unreachable within [1, n]");
    return lo;
}

std::vector<Estimate> theta_hat(const GroupModel& group, double p, const std::vector<int>& ladder,
                                std::uint64_t seed, std::uint64_t n_samples, int workers) {
    for (std::size_t i = 1; i < ladder.size(); ++i)
        if (ladder[i] <= ladder[i - 1]) throw config_error("theta_hat ladder must increase");
    std::vector<Estimate> out;
    for (const int W : ladder) {
        const GraphWindow window(group, W);
        const std::uint64_t hits = count_successes(n_samples, workers, [&](std::uint64_t r) {
            const LabelField labels(window, seed, r);
            const Config config(labels, p);
            if (W == 0) return true;
            detail::Scratch& s = detail::thread_scratch();
            s.begin(window);
            s.stamp[0] = s.epoch;
            s.queue.push_back(0);
            for (std::size_t head = 0; head < s.queue.size(); ++head) {
                const std::uint32_t v = s.queue[head];
                for (const auto& arc : window.neighbors(v)) {
                    if (s.stamp[arc.to] == s.epoch || !config.open(arc.edge)) continue;
                    if (window.dist(arc.to) == W) return true;
                    s.stamp[arc.to] = s.epoch;
                    s.queue.push_back(arc.to);
                }
            }
            return false;
        });
        out.push_back(wilson_estimate(hits, n_samples, seed));
    }
    return out;
}

FitResult fit_decay(const std::vector<FitPoint>& table, const FitModel& model) {
    struct Pt {
        double x, y, w;
    };
    std::vector<Pt> pts;
    for (const auto& row : table) {
        if (row.estimate.p_hat <= 0.0) continue;  // rare-event floor: dropped
        const double x = model.kind == FitModel::Kind::exp_in_n
                             ? row.n
                             : std::pow(row.n, model.alpha);
        const double y = std::log(row.estimate.p_hat);
        const double lo = std::max(row.estimate.ci_low, 1e-300);
        const double hi = std::max(row.estimate.ci_high, 1e-300);
        double sigma = (std::log(hi) - std::log(lo)) / (2.0 * kZ95);
        if (!(sigma > 0)) sigma = 1.0;
        pts.push_back(Pt{x, y, 1.0 / (sigma * sigma)});
    }
    if (pts.size() < 4) throw config_error("fit_decay requires at least 4 positive points");

    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (const auto& q : pts) {
        sw += q.w;
        swx += q.w * q.x;
        swy += q.w * q.y;
        swxx += q.w * q.x * q.x;
        swxy += q.w * q.x * q.y;
    }
    const double den = sw * swxx - swx * swx;
    FitResult out;
    out.model = model;
    out.slope = (sw * swxy - swx * swy) / den;
    out.intercept = (swy - out.slope * swx) / sw;
    const double mean_y = swy / sw;
    double ss_res = 0, ss_tot = 0;
    for (const auto& q : pts) {
        const double f = out.slope * q.x + out.intercept;
        ss_res += q.w * (q.y - f) * (q.y - f);
        ss_tot += q.w * (q.y - mean_y) * (q.y - mean_y);
    }
    out.r2 = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 0.0;
    out.points_used = static_cast<int>(pts.size());
    return out;
}

}  // namespace perc
