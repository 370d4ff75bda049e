#pragma once

#include <complex>
#include <vector>

#include "qqm/field.hpp"

// Potential data for both wave equations:
//   Q(x) = alpha(x) i + beta(x) j   (alpha real, beta complex -> Q pure imaginary)
//   V(x) = V0(x) + V1(x) j          (V0, V1 complex)
// Both multiply the state from the left wherever they appear.

namespace qqm {

struct PotentialSpec {
    GridSpec grid;
    std::vector<double> alpha;                // i component of Q
    std::vector<std::complex<double>> beta;   // j,(k) components of Q
    std::vector<std::complex<double>> v0;     // complex block of V
    std::vector<std::complex<double>> v1;     // j,(k) block of V

    PotentialSpec() = default;
    explicit PotentialSpec(const GridSpec& g)
        : grid(g), alpha(g.n, 0.0), beta(g.n), v0(g.n), v1(g.n) {}

    // Assembled quaternion coefficient fields.
    QField q_field() const;
    QField v_field() const;

    bool q_is_zero() const;
    bool v_is_real() const;   // Im V0 == 0 and V1 == 0 everywhere
    bool v0_imag_is_zero() const;
    bool v1_is_zero() const;
    bool beta_is_zero() const;

    void validate() const;  // sizes match the grid
};

}  // namespace qqm
