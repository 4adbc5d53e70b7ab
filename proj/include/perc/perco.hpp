#pragma once

#include <cstdint>
#include <vector>

#include "perc/cayley.hpp"
#include "perc/common.hpp"

namespace perc {

// Deterministic per-edge uniform labels realising the monotone coupling:
// label(e) depends on (seed, replica, canonical edge key) only, so labels of
// edges shared between nested windows coincide.
class LabelField {
  public:
    LabelField(const GraphWindow& window, std::uint64_t seed, std::uint64_t replica)
        : window_(&window), seed_(seed), replica_(replica) {}

    const GraphWindow& window() const { return *window_; }
    std::uint64_t seed() const { return seed_; }
    std::uint64_t replica() const { return replica_; }

    double label(std::uint32_t edge) const {
        return rng::label_from_digest(window_->edge_digest(edge), seed_, replica_);
    }

  private:
    const GraphWindow* window_;
    std::uint64_t seed_;
    std::uint64_t replica_;
};

LabelField label_field(const GraphWindow& window, std::uint64_t seed, std::uint64_t replica);

// A configuration view: open(e) <=> label(e) <= p. Test fixtures may instead
// pin explicit edge states through a mask.
class Config {
  public:
    Config(const LabelField& field, double p)
        : window_(&field.window()), field_(&field), p_(p) {}

    static Config from_mask(const GraphWindow& window, std::vector<std::uint8_t> mask) {
        Config c(window);
        c.mask_ = std::move(mask);
        return c;
    }

    const GraphWindow& window() const { return *window_; }
    double p() const { return p_; }

    bool open(std::uint32_t edge) const {
        if (!mask_.empty()) return mask_[edge] != 0;
        return field_->label(edge) <= p_;
    }

  private:
    explicit Config(const GraphWindow& window) : window_(&window), field_(nullptr), p_(0.0) {}

    const GraphWindow* window_;
    const LabelField* field_;
    double p_;
    std::vector<std::uint8_t> mask_;
};

// Open clusters of a region; ids are canonical (minimal vertex index).
struct ClusterDecomposition {
    struct Info {
        std::uint32_t id;
        std::uint32_t volume;
        std::uint32_t farthest_vertex;  // max distance from the window origin
        int farthest_dist;
    };

    VertexSet region;
    std::vector<std::uint32_t> cluster_of;  // aligned with region.indices()
    std::vector<Info> clusters;             // ascending id

    std::uint32_t id_of(std::uint32_t vertex) const;
    const Info& info(std::uint32_t id) const;
    // Ids of clusters containing at least one vertex of s.
    std::vector<std::uint32_t> clusters_meeting(const VertexSet& s) const;
};

ClusterDecomposition clusters_in(const Config& config, const VertexSet& region);

bool connected_in(const Config& config, const VertexSet& region, const VertexSet& A,
                  const VertexSet& B);

int crossing_cluster_count(const Config& config, const VertexSet& region, const VertexSet& A,
                           const VertexSet& B);

}  // namespace perc
