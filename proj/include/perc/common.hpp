#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace perc {

// Error taxonomy; the CLI maps these onto distinct exit codes.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct margin_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sorted duplicate-free set of vertex indices of one window.
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(std::vector<std::uint32_t> v) : v_(std::move(v)) {
        std::sort(v_.begin(), v_.end());
        v_.erase(std::unique(v_.begin(), v_.end()), v_.end());
    }

    static VertexSet single(std::uint32_t v) { return VertexSet(std::vector<std::uint32_t>{v}); }

    bool contains(std::uint32_t u) const {
        return std::binary_search(v_.begin(), v_.end(), u);
    }
    bool empty() const { return v_.empty(); }
    std::size_t size() const { return v_.size(); }
    const std::vector<std::uint32_t>& indices() const { return v_; }

    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    bool intersects(const VertexSet& other) const {
        auto a = v_.begin();
        auto b = other.v_.begin();
        while (a != v_.end() && b != other.v_.end()) {
            if (*a == *b) return true;
            if (*a < *b)
                ++a;
            else
                ++b;
        }
        return false;
    }

    VertexSet unified(const VertexSet& other) const {
        std::vector<std::uint32_t> out;
        out.reserve(v_.size() + other.v_.size());
        std::set_union(v_.begin(), v_.end(), other.v_.begin(), other.v_.end(),
                       std::back_inserter(out));
        return VertexSet(std::move(out));
    }

    bool operator==(const VertexSet& other) const { return v_ == other.v_; }

  private:
    std::vector<std::uint32_t> v_;
};

}  // namespace perc
