#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "qqm/dynamics.hpp"
#include "qqm/observables.hpp"
#include "qqm/potential.hpp"
#include "qqm/theorems.hpp"

// Scenario files: JSON descriptions of a run (grid, time stepping, potential
// profiles, initial state) plus the set of identity checks to apply and the
// observables to record.  Everything is validated eagerly at parse time so a
// bad file fails with a message naming the offending key, not deep inside the
// run.  Natural units hbar = m = 1 throughout.
//
// Potential entries (alpha, beta_re, beta_im, v0_re, v0_im, v1_re, v1_im) are
// each either an inline array of n samples or a named family:
//   {"family": "zero"}
//   {"family": "constant", "value": c}
//   {"family": "harmonic", "omega": w}            -> 0.5 w^2 x^2
//   {"family": "gaussian", "height": h, "center": c, "width": s}
//
// Initial states:
//   {"family": "gaussian_packet", "center": c, "width": s, "k0": k,
//    "quaternion_mix": [c0,c1,c2,c3]}   (mix optional, default [1,0,0,0];
//                                        the packet is premultiplied by it)
//   {"family": "plane_wave", "k_index": m}
//   {"family": "samples", "values": [[w,x,y,z], ...]}

namespace qqm {

class ScenarioError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct ScenarioOutputs {
    std::vector<std::string> observables;  // norm, position, momentum,
                                           // source_integral, source_max,
                                           // offcomplex_max
    bool dump_fields = false;
};

struct Scenario {
    std::string name;
    GridSpec grid;
    SimulationConfig config;       // variant, dt, steps, sample_every
    PotentialSpec potential;
    QField initial_state;
    std::vector<std::string> checks;
    std::string check_operator = "position";  // position | momentum | identity
    CheckTolerances tolerances;    // defaults with per-scenario overrides applied
    ScenarioOutputs outputs;
};

Scenario parse_scenario(const std::string& path);
Scenario parse_scenario_text(const std::string& text, const std::string& context);

struct ScenarioResult {
    std::vector<ResidualReport> reports;      // one per selected check, in order
    std::vector<ObservableSample> observables;
    Trajectory trajectory;
    bool all_passed = true;
};

// Evolves the scenario and applies its checks.  tol_scale multiplies the
// per-check tolerances (the fixed algebraic gates are not scaled).  Throws
// HermiticityError if a hermitian-identities check is requested on a
// non-hermitian Hamiltonian.
ScenarioResult run_scenario(const Scenario& s, double tol_scale = 1.0);

// Deterministic JSON for the report array; each entry carries exactly
// identity, variant, grid_n, dt, max_residual, l2_residual, pass, tolerance.
std::string reports_to_json(const std::vector<ResidualReport>& reports);
void write_reports_json(const std::string& path, const std::vector<ResidualReport>& reports);

// Built-in convergence studies used by `verify` and the acceptance suite.
//
// Spatial: pointwise continuity residual for a free complex packet at
// n = 128, 256, 512 with a fixed small dt; the residual is dominated by the
// O(dx^2) stencil truncation, so the fitted order should sit near 2.
//
// Temporal: free plane wave at fixed n compared against the closed-form
// discrete phase evolution exp(-i E_k t) at dt = 4e-4, 2e-4, 1e-4; the error
// is pure integrator truncation, so the fitted order should sit near 4.
struct StudyResult {
    std::vector<ResidualReport> rows;  // one per parameter value
    ConvergenceFit fit;
    ResidualReport verdict;  // max_residual = |fitted - expected|, tolerance = window
};

StudyResult run_dx_order_study();
StudyResult run_dt_order_study();

}  // namespace qqm
