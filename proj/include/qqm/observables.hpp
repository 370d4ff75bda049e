#pragma once

#include <string>
#include <vector>

#include "qqm/dynamics.hpp"
#include "qqm/operators.hpp"

// Densities, currents, sources and expectation values for both variants.
//
// Variant-specific formulas (Pi is the kinetic momentum density operator):
//   Lcwe: Pi f = -hbar i (grad f - Q f)        J = Sc(conj(f) Pi f) / m
//         g = conj(f) (conj(V) i - i V) f / hbar
//   Rcwe: Pi f = -hbar (grad f - Q f) i        J = Sc((Pi f) conj(f)) / m
//         g = (u conj(V) - V u) / hbar with u = f i conj(f)
//
// Expectation values symmetrize the matrix element, which is the same as
// taking the scalar part of the one-sided integral:
//   Lcwe: <O> = Sc( sum conj(f) (O f) dx )
//   Rcwe: <O> = Sc( sum (O f) conj(f) dx )

namespace qqm {

// A pointwise-real diagnostic field plus the largest imaginary residue left
// by the quaternion arithmetic that produced it (zero in exact arithmetic).
struct RealFieldResult {
    std::vector<double> value;
    double max_imag_residue = 0.0;
};

std::vector<double> density(const QField& f);
double total_norm(const QField& f);
double integrate(const std::vector<double>& samples, const GridSpec& grid);

QField pi_field(const Hamiltonian& h, const QField& f);
std::vector<double> probability_current(const Hamiltonian& h, const QField& f);
RealFieldResult source(const Hamiltonian& h, const QField& f);

// m * integral(J): the expectation of the kinetic momentum.
double kinetic_momentum(const Hamiltonian& h, const QField& f);

// One-sided integral sum as a quaternion (before taking the scalar part).
Quaternion expectation_full(Variant variant, const QField& f, const QField& of);
double expectation(Variant variant, const QField& f, const OperatorSpec& op);

// Largest |j| or |k| component anywhere on the grid.
double offcomplex_max(const QField& f);

struct ObservableSample {
    double time = 0.0;
    std::string name;
    double value = 0.0;
};

// CSV with header time,name,value at full double precision; atomic replace.
void write_observables_csv(const std::string& path, const std::vector<ObservableSample>& rows);

}  // namespace qqm
