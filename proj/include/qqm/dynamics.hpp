#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "qqm/field.hpp"
#include "qqm/potential.hpp"

// Time evolution for the two quaternionic wave equations on a periodic grid.
//
//   Lcwe:  i hbar dPsi/dt = H Psi,  H = (hbar^2/2m) i(grad - Q) i(grad - Q) + V
//   Rcwe:  hbar dPsi/dt i = H Psi,  H = -(hbar^2/2m) (grad - Q)^2 + V
//
// Expanding the kinetic factor pair and substituting the compact 3-point
// laplacian for the pure second-derivative term gives the discrete form used
// here (with P = i Q i taken pointwise):
//
//   Lcwe:  H f = (hbar^2/2m) [ -lap f + grad(Q f) - P grad f + P Q f ] + V f
//   Rcwe:  H f = (hbar^2/2m) [ -lap f + grad(Q f) + Q grad f - Q Q f ] + V f
//
// Both reduce to -(hbar^2/2m) lap + V when Q = 0, so plane waves on the grid
// see the discrete kinetic eigenvalue (hbar^2/2m) * 2(1 - cos(k dx))/dx^2.

namespace qqm {

enum class Variant { Lcwe, Rcwe };

const char* variant_name(Variant v);

struct SimulationConfig {
    double hbar = 1.0;
    double mass = 1.0;
    double dt = 1e-4;
    std::size_t steps = 0;
    std::size_t sample_every = 1;
    Variant variant = Variant::Lcwe;
    // advisory explicit-scheme threshold: warn when dt > safety * dx^2 * m/hbar
    double stability_safety = 0.2;
};

class NanAbortError : public std::runtime_error {
  public:
    NanAbortError(std::size_t step_index, double time);
    std::size_t step = 0;
    double time = 0.0;
};

class Hamiltonian {
  public:
    Hamiltonian(const PotentialSpec& pot, Variant variant, double hbar, double mass);

    QField apply(const QField& f) const;

    const GridSpec& grid() const { return grid_; }
    Variant variant() const { return variant_; }
    double hbar() const { return hbar_; }
    double mass() const { return mass_; }
    const QField& q() const { return q_; }
    const QField& v() const { return v_; }
    bool q_is_zero() const { return q_zero_; }

    // dPsi/dt induced by the wave equation: left multiplication by -i/hbar
    // for Lcwe, right multiplication by -i/hbar for Rcwe.
    QField time_derivative(const QField& f) const;

  private:
    GridSpec grid_;
    Variant variant_;
    double hbar_;
    double mass_;
    double kappa_;  // hbar^2 / (2 mass)
    QField q_;      // Q(x)
    QField v_;      // V(x)
    QField p_;      // i Q i, pointwise (Lcwe cross term)
    QField pq_;     // P Q, pointwise
    QField qq_;     // Q Q, pointwise
    bool q_zero_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<QField> states;

    std::size_t size() const { return times.size(); }
    double sample_dt() const;  // uniform spacing between samples
};

// Fourth-order Runge-Kutta step of size dt, in place.
void step_rk4(const Hamiltonian& h, QField& state, double dt);

// Evolve `initial` for config.steps steps, recording the state every
// config.sample_every steps (the initial state is always recorded; so is the
// final one when steps is a multiple of sample_every).  Aborts with
// NanAbortError as soon as a non-finite component appears.
Trajectory evolve(const Hamiltonian& h, const QField& initial, const SimulationConfig& config);

// <f, H g> - <H f, g>: identically zero quaternion for a hermitian H.
Quaternion hermiticity_defect(const Hamiltonian& h, const QField& f, const QField& g);

}  // namespace qqm
