#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/common.hpp"
#include "perc/events.hpp"
#include "perc/geometry.hpp"

namespace perc {

// Monte Carlo point estimate with a two-sided 95% Wilson score interval.
struct Estimate {
    double p_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t successes = 0;
    std::uint64_t seed = 0;
    std::string config_digest;
};

Estimate wilson_estimate(std::uint64_t successes, std::uint64_t n_samples, std::uint64_t seed = 0,
                         std::string digest = {});

// One grid cell of an experiment; names form the CLI event vocabulary.
struct EventSpec {
    std::string name;    // piv uniq sprinkled_uniq corridor trunc_radius
                         // trunc_volume prop1 two_seed coarse_cutset hybrid_count
    int n = 0;           // radius / volume threshold / thickness / cutset size
    int m_aux = 0;       // inner radius, path length, or hybrid core radius
    double delta = 0.0;  // sprinkle amount (sprinkled_uniq, hybrid_count)
    int k = 0;           // coarse-field locality radius
    double chi = 0.5;    // seed schedule exponent (two_seed)
    int dx = 1, dy = 1;  // seed centre distances (two_seed)
};

// Throws margin_error naming the violated rule.
void validate_event_margins(const EventSpec& spec, int W);

bool evaluate_event(const GraphWindow& window, const EventSpec& spec, double p,
                    std::uint64_t seed, std::uint64_t replica);

// Deterministic given (spec, p, seed, n_samples) for any worker count.
Estimate estimate_event(const GraphWindow& window, const EventSpec& spec, double p,
                        std::uint64_t seed, std::uint64_t n_samples, int workers = 1);

// Count successes of an arbitrary replica predicate, worker-count independent.
std::uint64_t count_successes(std::uint64_t n_samples, int workers,
                              const std::function<bool(std::uint64_t)>& replica_event);

struct CorridorPolicy {
    enum class Kind { exhaustive, geodesic_family, sampled_saw };
    Kind kind = Kind::geodesic_family;
    int saw_count = 64;        // sampled self-avoiding walks added to the family
    int exhaustive_cap = 6;    // refuse exhaustive enumeration beyond this length
    int family_cap = 128;      // geodesic endpoints kept per sphere
};

struct KappaEstimate {
    Estimate estimate;        // crossing probability of the minimising path
    bool upper_bound = true;  // false only for the exhaustive policy
    std::vector<std::uint32_t> argmin_path;
};

// Empirical minimum over a path family of the corridor-crossing probability.
KappaEstimate corridor_kappa(const GraphWindow& window, int m, int n, double p,
                             const CorridorPolicy& policy, std::uint64_t seed,
                             std::uint64_t n_samples, int workers = 1);

// Smallest s in [1, n] with estimated P[Piv(s, n)] <= threshold.
int uniqueness_zone_scan(const GraphWindow& window, double p, int n, double threshold,
                         std::uint64_t seed, std::uint64_t n_samples, int workers = 1);

// P[o <-> distance W] for each rung of the window ladder.
std::vector<Estimate> theta_hat(const GroupModel& group, double p, const std::vector<int>& ladder,
                                std::uint64_t seed, std::uint64_t n_samples, int workers = 1);

struct FitModel {
    enum class Kind { exp_in_n, stretched };
    Kind kind = Kind::exp_in_n;
    double alpha = 0.5;  // stretched only: regress log p against n^alpha

    static FitModel exponential() { return FitModel{Kind::exp_in_n, 1.0}; }
    static FitModel stretched(double a) { return FitModel{Kind::stretched, a}; }
};

struct FitResult {
    FitModel model;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    int points_used = 0;
};

struct FitPoint {
    double n;
    Estimate estimate;
};

// Weighted least squares on log p_hat; zero-success points are dropped.
FitResult fit_decay(const std::vector<FitPoint>& table, const FitModel& model);

}  // namespace perc
