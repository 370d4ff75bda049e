#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "qqm/grid.hpp"

// Independent complex-valued reference implementation.  It shares the grid
// type and nothing else with the quaternion engine: fields are
// std::complex<double>, the Hamiltonian is written out directly, and the
// integrator is a self-contained RK4.  Used to pin down the complex limit
// (j and k parts of the potential switched off).
//
//   H psi = (hbar^2/2m) [ -lap psi + i d(alpha psi)/dx + i alpha dpsi/dx
//                         + alpha^2 psi ] + V0 psi
//   dpsi/dt = -(i/hbar) H psi
//
// with the same centered stencils as the main engine.

namespace qqm {

struct CField {
    GridSpec grid;
    std::vector<std::complex<double>> values;

    CField() = default;
    explicit CField(const GridSpec& g) : grid(g), values(g.n) {}
};

struct ComplexSetup {
    GridSpec grid;
    std::vector<double> alpha;                // real gauge-like coefficient
    std::vector<std::complex<double>> v0;     // complex potential
    double hbar = 1.0;
    double mass = 1.0;
};

CField apply_complex_hamiltonian(const ComplexSetup& setup, const CField& f);

struct CTrajectory {
    std::vector<double> times;
    std::vector<CField> states;
};

CTrajectory evolve_complex(const ComplexSetup& setup, const CField& initial, double dt,
                           std::size_t steps, std::size_t sample_every);

}  // namespace qqm
