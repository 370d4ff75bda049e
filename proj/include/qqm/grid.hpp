#pragma once

#include <cstddef>
#include <stdexcept>

// Uniform periodic 1-D grid on [-L/2, L/2) with n nodes, x_m = -L/2 + m*dx.
// Kept free of any field/value-type dependency so that independent solver
// code can share the geometry without sharing arithmetic.

namespace qqm {

struct GridSpec {
    std::size_t n = 0;
    double length = 0.0;

    GridSpec() = default;
    GridSpec(std::size_t n_, double length_) : n(n_), length(length_) {
        if (n < 8) throw std::invalid_argument("GridSpec: need at least 8 nodes");
        if (!(length > 0.0)) throw std::invalid_argument("GridSpec: length must be positive");
    }

    double dx() const { return length / static_cast<double>(n); }
    double point(std::size_t m) const {
        return -0.5 * length + static_cast<double>(m) * dx();
    }

    std::size_t next(std::size_t m) const { return m + 1 == n ? 0 : m + 1; }
    std::size_t prev(std::size_t m) const { return m == 0 ? n - 1 : m - 1; }

    bool operator==(const GridSpec& o) const {
        return n == o.n && length == o.length;
    }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

}  // namespace qqm
