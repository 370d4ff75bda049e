#include "qqm/potential.hpp"

#include <stdexcept>

namespace qqm {

void PotentialSpec::validate() const {
    const std::size_t n = grid.n;
    if (alpha.size() != n || beta.size() != n || v0.size() != n || v1.size() != n) {
        throw std::invalid_argument("PotentialSpec: sample arrays must match the grid size");
    }
}

QField PotentialSpec::q_field() const {
    validate();
    QField out(grid);
    for (std::size_t m = 0; m < grid.n; ++m) {
        out.values[m] = Quaternion{0.0, alpha[m], beta[m].real(), beta[m].imag()};
    }
    return out;
}

QField PotentialSpec::v_field() const {
    validate();
    QField out(grid);
    for (std::size_t m = 0; m < grid.n; ++m) {
        out.values[m] = Quaternion{v0[m].real(), v0[m].imag(), v1[m].real(), v1[m].imag()};
    }
    return out;
}

bool PotentialSpec::q_is_zero() const {
    for (std::size_t m = 0; m < grid.n; ++m) {
        if (alpha[m] != 0.0 || beta[m] != std::complex<double>{}) return false;
    }
    return true;
}

bool PotentialSpec::v0_imag_is_zero() const {
    for (const auto& v : v0) {
        if (v.imag() != 0.0) return false;
    }
    return true;
}

bool PotentialSpec::v1_is_zero() const {
    for (const auto& v : v1) {
        if (v != std::complex<double>{}) return false;
    }
    return true;
}

bool PotentialSpec::beta_is_zero() const {
    for (const auto& b : beta) {
        if (b != std::complex<double>{}) return false;
    }
    return true;
}

bool PotentialSpec::v_is_real() const { return v0_imag_is_zero() && v1_is_zero(); }

}  // namespace qqm
