#pragma once

#include <map>
#include <string>
#include <vector>

#include "qqm/observables.hpp"

// Verification harness: each check consumes a trajectory (or a state it
// evolves itself), measures how well an identity holds, and returns a
// ResidualReport.  Time derivatives of sampled series always use centered
// differences at interior samples; endpoints are excluded.
//
// Identities covered (time-independent operators throughout, so every
// <d(op)/dt> term is zero by construction):
//   continuity          d rho/dt + div J = g, plus the global balance
//                       dN/dt = integral(g)
//   ehrenfest_position  d<x>/dt = <Pi>/m - (2/hbar)<iVx>   (Lcwe)
//                                        - (2/hbar)<(Vx|i)> (Rcwe)
//                       plus the algebraic law 2<iVx> = <(iV - V*i)x>
//   ehrenfest_momentum  d<p>/dt against the integral form and against
//                       2<-dV/dx> + 2<-V d/dx>, with dV/dx realized as the
//                       commutator [d/dx, V] so both forms agree to rounding
//   hermitian_identities  the four commutator/anticommutator relations for
//                       hermitian H, e.g. <[H, O - iOi]> = 0, plus the
//                       <HO> = -<iOiH> form (and <[H,O]> = 0 for Rcwe)
//   evolution_identities  d/dt of the four expectation combinations
//                       <O - iOi>, <Oi + iO>, <O + iOi>, <Oi - iO> against
//                       their commutator/anticommutator sides (B-variant:
//                       d/dt<(O|i)> = (1/hbar)<[O, H]>)
//   stationarity        time-constancy of the four combinations (Lcwe) or of
//                       <O> (Rcwe)

namespace qqm {

struct ResidualReport {
    std::string identity;
    std::string variant;
    std::size_t grid_n = 0;
    double dt = 0.0;
    double max_residual = 0.0;
    double l2_residual = 0.0;
    bool pass = false;
    double tolerance = 0.0;
    // per-interior-sample residual maxima
    std::vector<double> details;
    // named auxiliary measurements and gates (not part of the JSON contract)
    std::map<std::string, double> extras;
};

struct CheckTolerances {
    // primary tolerances, multiplied by the CLI --tol-scale factor
    double continuity = 1e-1;
    double ehrenfest_position = 1e-6;
    double ehrenfest_momentum = 1e-6;
    double hermitian_identities = 1e-7;
    double evolution_identities = 1e-6;
    double stationarity = 1e-8;
    double oracle_compare = 1e-8;
    // fixed auxiliary gates (never scaled; they guard algebraic exactness)
    double continuity_global = 1e-6;
    double algebraic = 1e-12;
    double imag_residue = 1e-12;
    double breakdown_vanish = 1e-10;
    double forms_gap = 1e-8;
    double hermiticity_precondition = 1e-8;

    CheckTolerances scaled(double factor) const;
};

class HermiticityError : public std::runtime_error {
  public:
    explicit HermiticityError(double measured_defect);
    double defect = 0.0;
};

ResidualReport check_continuity(const Hamiltonian& h, const Trajectory& traj,
                                const SimulationConfig& cfg, const CheckTolerances& tol);

ResidualReport check_ehrenfest_position(const Hamiltonian& h, const Trajectory& traj,
                                        const SimulationConfig& cfg, const CheckTolerances& tol);

// Requires Q = 0 (canonical momentum form); rejects otherwise.
ResidualReport check_ehrenfest_momentum(const Hamiltonian& h, const Trajectory& traj,
                                        const SimulationConfig& cfg, const CheckTolerances& tol);

// Evolves psi over cfg.steps to supply states; rejects non-hermitian H with
// HermiticityError carrying the measured defect.
ResidualReport check_hermitian_identities(const Hamiltonian& h, const QField& psi,
                                          const SimulationConfig& cfg, const OperatorSpec& op,
                                          const CheckTolerances& tol);

ResidualReport check_evolution_identities(const Hamiltonian& h, const Trajectory& traj,
                                          const SimulationConfig& cfg, const OperatorSpec& op,
                                          const CheckTolerances& tol);

ResidualReport check_stationarity(const Hamiltonian& h, const Trajectory& traj,
                                  const SimulationConfig& cfg, const OperatorSpec& op,
                                  const CheckTolerances& tol);

// The four operator combinations O - iOi, Oi + iO, O + iOi, Oi - iO.
std::vector<OperatorSpec> build_i_combinations(const OperatorSpec& op);

// <[H, X]> (anticommute = false) or <{H, X}> (true) on a single state.
double bracket_expectation(const Hamiltonian& h, const QField& state, const OperatorSpec& x,
                           bool anticommute);

struct ConvergenceFit {
    enum class Parameter { Dx, Dt };
    Parameter parameter = Parameter::Dx;
    std::vector<std::pair<double, double>> samples;  // (parameter value, residual)
    double fitted_order = 0.0;
};

// Least-squares slope of log(residual) against log(parameter); reports must
// vary exactly one of grid_n / dt, strictly monotonically.
ConvergenceFit fit_convergence(const std::vector<ResidualReport>& reports,
                               ConvergenceFit::Parameter parameter);

}  // namespace qqm
