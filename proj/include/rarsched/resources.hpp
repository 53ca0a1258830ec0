#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace rarsched {

/// Fixed, ordered registry of resource types shared by a whole cluster.
/// Index 0 is conventionally the GPU resource; a second "mem" entry is
/// present unless the run is configured gpu-only.
class ResourceRegistry {
public:
    ResourceRegistry() = default;
    explicit ResourceRegistry(std::vector<std::string> names) : names_(std::move(names)) {}

    static ResourceRegistry gpu_only() { return ResourceRegistry({"gpu"}); }
    static ResourceRegistry gpu_mem() { return ResourceRegistry({"gpu", "mem"}); }

    std::size_t size() const { return names_.size(); }
    const std::string& name(std::size_t r) const { return names_.at(r); }

    int index_of(const std::string& name) const {
        for (std::size_t r = 0; r < names_.size(); ++r)
            if (names_[r] == name) return static_cast<int>(r);
        return -1;
    }

    bool operator==(const ResourceRegistry& other) const { return names_ == other.names_; }

private:
    std::vector<std::string> names_;
};

/// Per-resource-type nonnegative amounts, indexed by a ResourceRegistry.
class ResourceVector {
public:
    ResourceVector() = default;
    explicit ResourceVector(std::size_t n, double fill = 0.0) : v_(n, fill) {}
    ResourceVector(std::initializer_list<double> init) : v_(init) {}

    std::size_t size() const { return v_.size(); }
    double operator[](std::size_t r) const { return v_[r]; }
    double& operator[](std::size_t r) { return v_[r]; }

    bool all_nonnegative() const {
        for (double x : v_)
            if (x < 0.0) return false;
        return true;
    }

    bool all_zero() const {
        for (double x : v_)
            if (x != 0.0) return false;
        return true;
    }

    bool any_positive() const {
        for (double x : v_)
            if (x > 0.0) return true;
        return false;
    }

    /// Componentwise a + s*b.
    ResourceVector& add_scaled(const ResourceVector& b, double s) {
        check_same_size(b);
        for (std::size_t r = 0; r < v_.size(); ++r) v_[r] += s * b[r];
        return *this;
    }

    /// True iff this[r] <= other[r] + tol for all r.
    bool fits_within(const ResourceVector& other, double tol = 0.0) const {
        check_same_size(other);
        for (std::size_t r = 0; r < v_.size(); ++r)
            if (v_[r] > other[r] + tol) return false;
        return true;
    }

    ResourceVector scaled(double s) const {
        ResourceVector out(*this);
        for (double& x : out.v_) x *= s;
        return out;
    }

    bool operator==(const ResourceVector& other) const { return v_ == other.v_; }

private:
    void check_same_size(const ResourceVector& b) const {
        if (b.size() != v_.size())
            throw std::invalid_argument("resource vector size mismatch");
    }

    std::vector<double> v_;
};

}  // namespace rarsched
