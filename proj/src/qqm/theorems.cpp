#include "qqm/theorems.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qqm {

namespace {

const Quaternion kUnitI{0.0, 1.0, 0.0, 0.0};

void require_samples(const Trajectory& traj, const char* where) {
    if (traj.size() < 3) {
        throw std::invalid_argument(std::string(where) +
                                    ": need at least 3 samples for centered differences");
    }
}

std::vector<double> scalar_gradient(const std::vector<double>& v, const GridSpec& g) {
    std::vector<double> out(g.n);
    const double inv_2dx = 1.0 / (2.0 * g.dx());
    for (std::size_t m = 0; m < g.n; ++m) {
        out[m] = (v[g.next(m)] - v[g.prev(m)]) * inv_2dx;
    }
    return out;
}

double centered_rate(const std::vector<double>& series, std::size_t s, double dt_s) {
    return (series[s + 1] - series[s - 1]) / (2.0 * dt_s);
}

ResidualReport make_report(const char* identity, const Hamiltonian& h,
                           const SimulationConfig& cfg, double tolerance) {
    ResidualReport rep;
    rep.identity = identity;
    rep.variant = variant_name(h.variant());
    rep.grid_n = h.grid().n;
    rep.dt = cfg.dt;
    rep.tolerance = tolerance;
    return rep;
}

// RMS of the per-sample detail values.
double details_rms(const std::vector<double>& details) {
    if (details.empty()) return 0.0;
    double acc = 0.0;
    for (double d : details) acc += d * d;
    return std::sqrt(acc / static_cast<double>(details.size()));
}

bool v0_imag_is_zero(const QField& v) {
    for (const auto& q : v.values) {
        if (q.x != 0.0) return false;
    }
    return true;
}

bool v_is_real(const QField& v) {
    for (const auto& q : v.values) {
        if (q.x != 0.0 || q.y != 0.0 || q.z != 0.0) return false;
    }
    return true;
}

// <x O> with the breakdown structure of each variant: i V x (Lcwe) or
// (V x | i) (Rcwe), divided out from the caller's prefactors.
OperatorSpec breakdown_operator(const Hamiltonian& h) {
    OperatorSpec vx = op_compose({op_multiply(h.v(), "V"), op_position()});
    if (h.variant() == Variant::Lcwe) {
        return op_compose({op_left_i(), vx}, "iVx");
    }
    return op_compose({op_right_i(), vx}, "(Vx|i)");
}

// Deterministic smooth probe state for hermiticity sampling.
QField hermiticity_probe(const GridSpec& g) {
    QField f(g);
    for (std::size_t m = 0; m < g.n; ++m) {
        const double u = 2.0 * M_PI * static_cast<double>(m) / static_cast<double>(g.n);
        f.values[m] = Quaternion{std::sin(3.0 * u + 0.3), 0.5 * std::cos(5.0 * u),
                                 std::sin(2.0 * u + 1.0) / 3.0, 0.25 * std::cos(7.0 * u - 0.5)};
    }
    return f;
}

}  // namespace

CheckTolerances CheckTolerances::scaled(double factor) const {
    CheckTolerances t = *this;
    t.continuity *= factor;
    t.ehrenfest_position *= factor;
    t.ehrenfest_momentum *= factor;
    t.hermitian_identities *= factor;
    t.evolution_identities *= factor;
    t.stationarity *= factor;
    t.oracle_compare *= factor;
    return t;
}

HermiticityError::HermiticityError(double measured_defect)
    : std::runtime_error("Hamiltonian is not hermitian: sampled defect " +
                         std::to_string(measured_defect)),
      defect(measured_defect) {}

std::vector<OperatorSpec> build_i_combinations(const OperatorSpec& op) {
    OperatorSpec ioi = op_compose({op_left_i(), op, op_left_i()}, "iOi");
    OperatorSpec oi = op_compose({op, op_left_i()}, "Oi");
    OperatorSpec io = op_compose({op_left_i(), op}, "iO");
    std::vector<OperatorSpec> combos;
    combos.push_back(op_sum({op, op_scale(-1.0, ioi)}, "O-iOi"));
    combos.push_back(op_sum({oi, io}, "Oi+iO"));
    combos.push_back(op_sum({op, ioi}, "O+iOi"));
    combos.push_back(op_sum({oi, op_scale(-1.0, io)}, "Oi-iO"));
    return combos;
}

double bracket_expectation(const Hamiltonian& h, const QField& state, const OperatorSpec& x,
                           bool anticommute) {
    QField xs = apply_operator(x, state);
    QField hxs = h.apply(xs);
    QField hs = h.apply(state);
    QField xhs = apply_operator(x, hs);
    accumulate(hxs, anticommute ? 1.0 : -1.0, xhs);
    return expectation_full(h.variant(), state, hxs).w;
}

ResidualReport check_continuity(const Hamiltonian& h, const Trajectory& traj,
                                const SimulationConfig& cfg, const CheckTolerances& tol) {
    require_samples(traj, "check_continuity");
    ResidualReport rep = make_report("continuity", h, cfg, tol.continuity);
    const GridSpec& g = h.grid();
    const double dts = traj.sample_dt();
    const double dx = g.dx();

    double global_balance_max = 0.0;
    double imag_residue_max = 0.0;
    double l2_acc = 0.0;

    for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
        const std::vector<double> rho_prev = density(traj.states[s - 1]);
        const std::vector<double> rho_next = density(traj.states[s + 1]);
        const std::vector<double> j = probability_current(h, traj.states[s]);
        const std::vector<double> div_j = scalar_gradient(j, g);
        const RealFieldResult src = source(h, traj.states[s]);
        imag_residue_max = std::max(imag_residue_max, src.max_imag_residue);

        double sample_max = 0.0;
        double sample_l2_sq = 0.0;
        for (std::size_t m = 0; m < g.n; ++m) {
            const double drho = (rho_next[m] - rho_prev[m]) / (2.0 * dts);
            const double r = drho + div_j[m] - src.value[m];
            sample_max = std::max(sample_max, std::abs(r));
            sample_l2_sq += r * r * dx;
        }
        rep.details.push_back(sample_max);
        l2_acc += sample_l2_sq;

        const double n_rate =
            (total_norm(traj.states[s + 1]) - total_norm(traj.states[s - 1])) / (2.0 * dts);
        const double g_total = integrate(src.value, g);
        global_balance_max = std::max(global_balance_max, std::abs(n_rate - g_total));
    }

    rep.max_residual = rep.details.empty() ? 0.0
                                           : *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = std::sqrt(l2_acc / static_cast<double>(rep.details.size()));
    rep.extras["global_balance_max"] = global_balance_max;
    rep.extras["source_imag_residue_max"] = imag_residue_max;
    rep.pass = rep.max_residual <= rep.tolerance && global_balance_max <= tol.continuity_global &&
               imag_residue_max <= tol.imag_residue;
    return rep;
}

ResidualReport check_ehrenfest_position(const Hamiltonian& h, const Trajectory& traj,
                                        const SimulationConfig& cfg, const CheckTolerances& tol) {
    require_samples(traj, "check_ehrenfest_position");
    ResidualReport rep = make_report("ehrenfest_position", h, cfg, tol.ehrenfest_position);
    const double dts = traj.sample_dt();
    const std::size_t count = traj.size();
    const OperatorSpec pos = op_position();
    const OperatorSpec bd_op = breakdown_operator(h);

    std::vector<double> x_series(count), pi_series(count), bd_series(count);
    for (std::size_t s = 0; s < count; ++s) {
        x_series[s] = expectation(h.variant(), traj.states[s], pos);
        pi_series[s] = kinetic_momentum(h, traj.states[s]);
        bd_series[s] = expectation(h.variant(), traj.states[s], bd_op);
    }

    double a10_gap_max = 0.0;
    if (h.variant() == Variant::Lcwe) {
        // algebraic law 2<iVx> = <(iV - V*i)x>, independent of the dynamics
        QField w_field(h.grid());
        for (std::size_t m = 0; m < h.grid().n; ++m) {
            const Quaternion& v = h.v().values[m];
            w_field.values[m] = qmul(kUnitI, v) - qmul(conj(v), kUnitI);
        }
        const OperatorSpec wx = op_compose({op_multiply(w_field, "iV-V*i"), op_position()});
        for (std::size_t s = 0; s < count; ++s) {
            const double rhs = expectation(h.variant(), traj.states[s], wx);
            a10_gap_max = std::max(a10_gap_max, std::abs(2.0 * bd_series[s] - rhs));
        }
    }

    double breakdown_max = 0.0;
    const double two_over_hbar = 2.0 / h.hbar();
    for (std::size_t s = 1; s + 1 < count; ++s) {
        const double lhs = centered_rate(x_series, s, dts);
        const double breakdown = two_over_hbar * bd_series[s];
        const double r = lhs - pi_series[s] / h.mass() + breakdown;
        rep.details.push_back(std::abs(r));
        breakdown_max = std::max(breakdown_max, std::abs(breakdown));
    }

    rep.max_residual = *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = details_rms(rep.details);
    rep.extras["breakdown_max"] = breakdown_max;
    bool gates = true;
    if (h.variant() == Variant::Lcwe) {
        rep.extras["a10_gap_max"] = a10_gap_max;
        gates = gates && a10_gap_max <= tol.algebraic;
        // the breakdown term vanishes whenever Im V0 = 0, even with V1 != 0
        if (v0_imag_is_zero(h.v())) gates = gates && breakdown_max <= tol.breakdown_vanish;
    } else if (v_is_real(h.v())) {
        gates = gates && breakdown_max <= tol.breakdown_vanish;
    }
    rep.pass = rep.max_residual <= rep.tolerance && gates;
    return rep;
}

ResidualReport check_ehrenfest_momentum(const Hamiltonian& h, const Trajectory& traj,
                                        const SimulationConfig& cfg, const CheckTolerances& tol) {
    if (!h.q_is_zero()) {
        throw std::invalid_argument(
            "check_ehrenfest_momentum: requires Q = 0 for the canonical momentum form");
    }
    require_samples(traj, "check_ehrenfest_momentum");
    ResidualReport rep = make_report("ehrenfest_momentum", h, cfg, tol.ehrenfest_momentum);
    const GridSpec& g = h.grid();
    const double dts = traj.sample_dt();
    const std::size_t count = traj.size();
    const bool lcwe = h.variant() == Variant::Lcwe;

    const OperatorSpec p_op =
        lcwe ? op_momentum(h.hbar())
             : op_scale(-h.hbar(), op_compose({op_right_i(), op_derivative()}, "p"));
    // dV/dx realized as [d/dx, V]: makes the expectation form match the
    // integral form exactly on the grid
    const OperatorSpec dv = op_sum(
        {op_compose({op_derivative(), op_multiply(h.v(), "V")}),
         op_scale(-1.0, op_compose({op_multiply(h.v(), "V"), op_derivative()}))},
        "[d/dx,V]");
    const OperatorSpec v_dx = op_compose({op_multiply(h.v(), "V"), op_derivative()});

    std::vector<double> p_series(count), integral_form(count), expectation_form(count),
        classical_form(count);
    for (std::size_t s = 0; s < count; ++s) {
        const QField& psi = traj.states[s];
        p_series[s] = expectation(h.variant(), psi, p_op);

        QField grad = gradient(psi);
        double acc = 0.0;
        if (lcwe) {
            for (std::size_t m = 0; m < g.n; ++m) {
                acc += qmul(conj(grad.values[m]), qmul(h.v().values[m], psi.values[m])).w;
            }
        } else {
            for (std::size_t m = 0; m < g.n; ++m) {
                acc += qmul(h.v().values[m], qmul(psi.values[m], conj(grad.values[m]))).w;
            }
        }
        integral_form[s] = 2.0 * acc * g.dx();

        const double dv_exp = expectation(h.variant(), psi, dv);
        const double vdx_exp = expectation(h.variant(), psi, v_dx);
        expectation_form[s] = -2.0 * dv_exp - 2.0 * vdx_exp;
        classical_form[s] = -dv_exp;
    }

    double forms_gap_max = 0.0;
    double classical_residual_max = 0.0;
    for (std::size_t s = 1; s + 1 < count; ++s) {
        const double lhs = centered_rate(p_series, s, dts);
        const double r1 = std::abs(lhs - integral_form[s]);
        const double r2 = std::abs(lhs - expectation_form[s]);
        rep.details.push_back(std::max(r1, r2));
        forms_gap_max = std::max(forms_gap_max, std::abs(integral_form[s] - expectation_form[s]));
        classical_residual_max = std::max(classical_residual_max, std::abs(lhs - classical_form[s]));
    }

    rep.max_residual = *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = details_rms(rep.details);
    rep.extras["forms_gap_max"] = forms_gap_max;
    bool gates = forms_gap_max <= tol.forms_gap;
    if (v_is_real(h.v())) {
        // real V: the integral form collapses to -<dV/dx> on the grid
        rep.extras["classical_residual_max"] = classical_residual_max;
        gates = gates && classical_residual_max <= rep.tolerance;
    }
    rep.pass = rep.max_residual <= rep.tolerance && gates;
    return rep;
}

ResidualReport check_hermitian_identities(const Hamiltonian& h, const QField& psi,
                                          const SimulationConfig& cfg, const OperatorSpec& op,
                                          const CheckTolerances& tol) {
    // precondition: sampled hermiticity defect must be negligible
    const QField probe = hermiticity_probe(h.grid());
    const Quaternion defect_q = hermiticity_defect(h, psi, probe);
    const double scale = l2_norm(psi) * l2_norm(h.apply(probe)) +
                         l2_norm(h.apply(psi)) * l2_norm(probe);
    const double defect = norm(defect_q);
    if (defect > tol.hermiticity_precondition * std::max(scale, 1e-30)) {
        throw HermiticityError(defect);
    }

    ResidualReport rep = make_report("hermitian_identities", h, cfg, tol.hermitian_identities);
    rep.extras["hermiticity_defect"] = defect;

    Trajectory traj = evolve(h, psi, cfg);
    require_samples(traj, "check_hermitian_identities");
    const std::vector<OperatorSpec> combos = build_i_combinations(op);
    const OperatorSpec ioi = op_compose({op_left_i(), op, op_left_i()}, "iOi");

    const bool lcwe = h.variant() == Variant::Lcwe;
    std::vector<double> relation_max(lcwe ? 5 : 1, 0.0);
    std::vector<std::vector<double>> combo_series(4, std::vector<double>(traj.size()));

    for (std::size_t s = 0; s < traj.size(); ++s) {
        const QField& st = traj.states[s];
        double sample_max = 0.0;
        if (lcwe) {
            const double r[5] = {
                std::abs(bracket_expectation(h, st, combos[0], false)),
                std::abs(bracket_expectation(h, st, combos[1], false)),
                std::abs(bracket_expectation(h, st, combos[2], true)),
                std::abs(bracket_expectation(h, st, combos[3], true)),
                // <HO> + <iOiH> = 0 for time-independent O
                std::abs(expectation_full(h.variant(), st, h.apply(apply_operator(op, st))).w +
                         expectation_full(h.variant(), st, apply_operator(ioi, h.apply(st))).w)};
            for (int k = 0; k < 5; ++k) {
                relation_max[k] = std::max(relation_max[k], r[k]);
                sample_max = std::max(sample_max, r[k]);
            }
        } else {
            const double r = std::abs(bracket_expectation(h, st, op, false));
            relation_max[0] = std::max(relation_max[0], r);
            sample_max = r;
        }
        for (int k = 0; k < 4; ++k) {
            combo_series[k][s] = expectation(h.variant(), st, combos[k]);
        }
        rep.details.push_back(sample_max);
    }

    if (lcwe) {
        rep.extras["commutator_1_max"] = relation_max[0];
        rep.extras["commutator_2_max"] = relation_max[1];
        rep.extras["anticommutator_3_max"] = relation_max[2];
        rep.extras["anticommutator_4_max"] = relation_max[3];
        rep.extras["ho_ioih_max"] = relation_max[4];
    } else {
        rep.extras["commutator_max"] = relation_max[0];
    }
    // the measured time-derivative sides of the four combinations
    if (traj.size() >= 3) {
        const double dts = traj.sample_dt();
        for (int k = 0; k < 4; ++k) {
            double rate_max = 0.0;
            for (std::size_t s = 1; s + 1 < traj.size(); ++s) {
                rate_max = std::max(rate_max, std::abs(centered_rate(combo_series[k], s, dts)));
            }
            rep.extras["combo_" + std::to_string(k + 1) + "_rate_max"] = rate_max;
        }
    }

    rep.max_residual = *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = details_rms(rep.details);
    rep.pass = rep.max_residual <= rep.tolerance;
    return rep;
}

ResidualReport check_evolution_identities(const Hamiltonian& h, const Trajectory& traj,
                                          const SimulationConfig& cfg, const OperatorSpec& op,
                                          const CheckTolerances& tol) {
    require_samples(traj, "check_evolution_identities");
    ResidualReport rep = make_report("evolution_identities", h, cfg, tol.evolution_identities);
    const double dts = traj.sample_dt();
    const std::size_t count = traj.size();
    const double inv_hbar = 1.0 / h.hbar();

    if (h.variant() == Variant::Lcwe) {
        const std::vector<OperatorSpec> combos = build_i_combinations(op);
        std::vector<std::vector<double>> series(4, std::vector<double>(count));
        std::vector<std::vector<double>> sides(4, std::vector<double>(count));
        for (std::size_t s = 0; s < count; ++s) {
            const QField& st = traj.states[s];
            for (int k = 0; k < 4; ++k) series[k][s] = expectation(h.variant(), st, combos[k]);
            sides[0][s] = inv_hbar * bracket_expectation(h, st, combos[1], false);
            sides[1][s] = -inv_hbar * bracket_expectation(h, st, combos[0], false);
            sides[2][s] = -inv_hbar * bracket_expectation(h, st, combos[3], true);
            sides[3][s] = inv_hbar * bracket_expectation(h, st, combos[2], true);
        }
        std::vector<double> identity_max(4, 0.0);
        for (std::size_t s = 1; s + 1 < count; ++s) {
            double sample_max = 0.0;
            for (int k = 0; k < 4; ++k) {
                const double r = std::abs(centered_rate(series[k], s, dts) - sides[k][s]);
                identity_max[k] = std::max(identity_max[k], r);
                sample_max = std::max(sample_max, r);
            }
            rep.details.push_back(sample_max);
        }
        for (int k = 0; k < 4; ++k) {
            rep.extras["identity_" + std::to_string(k + 1) + "_max"] = identity_max[k];
        }
    } else {
        // d/dt<(O|i)> = (1/hbar)<[O, H]>
        const OperatorSpec oi = op_right_i_suffix(op);
        std::vector<double> series(count), sides(count);
        for (std::size_t s = 0; s < count; ++s) {
            const QField& st = traj.states[s];
            series[s] = expectation(h.variant(), st, oi);
            sides[s] = -inv_hbar * bracket_expectation(h, st, op, false);
        }
        for (std::size_t s = 1; s + 1 < count; ++s) {
            rep.details.push_back(std::abs(centered_rate(series, s, dts) - sides[s]));
        }
        rep.extras["identity_1_max"] =
            *std::max_element(rep.details.begin(), rep.details.end());
    }

    rep.max_residual = *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = details_rms(rep.details);
    rep.pass = rep.max_residual <= rep.tolerance;
    return rep;
}

ResidualReport check_stationarity(const Hamiltonian& h, const Trajectory& traj,
                                  const SimulationConfig& cfg, const OperatorSpec& op,
                                  const CheckTolerances& tol) {
    require_samples(traj, "check_stationarity");
    ResidualReport rep = make_report("stationarity", h, cfg, tol.stationarity);
    const double dts = traj.sample_dt();
    const std::size_t count = traj.size();

    std::vector<OperatorSpec> monitored;
    if (h.variant() == Variant::Lcwe) {
        monitored = build_i_combinations(op);
    } else {
        monitored.push_back(op);
    }

    std::vector<std::vector<double>> series(monitored.size(), std::vector<double>(count));
    for (std::size_t s = 0; s < count; ++s) {
        for (std::size_t k = 0; k < monitored.size(); ++k) {
            series[k][s] = expectation(h.variant(), traj.states[s], monitored[k]);
        }
    }

    std::vector<double> drift_max(monitored.size(), 0.0);
    for (std::size_t s = 1; s + 1 < count; ++s) {
        double sample_max = 0.0;
        for (std::size_t k = 0; k < monitored.size(); ++k) {
            const double r = std::abs(centered_rate(series[k], s, dts));
            drift_max[k] = std::max(drift_max[k], r);
            sample_max = std::max(sample_max, r);
        }
        rep.details.push_back(sample_max);
    }

    for (std::size_t k = 0; k < monitored.size(); ++k) {
        rep.extras["drift_" + std::to_string(k + 1) + "_max"] = drift_max[k];
    }
    rep.max_residual = *std::max_element(rep.details.begin(), rep.details.end());
    rep.l2_residual = details_rms(rep.details);
    rep.pass = rep.max_residual <= rep.tolerance;  // stationary iff ALL drifts small
    rep.extras["stationary"] = rep.pass ? 1.0 : 0.0;
    return rep;
}

ConvergenceFit fit_convergence(const std::vector<ResidualReport>& reports,
                               ConvergenceFit::Parameter parameter) {
    if (reports.size() < 3) {
        throw std::invalid_argument("fit_convergence: need at least 3 reports");
    }
    ConvergenceFit fit;
    fit.parameter = parameter;

    for (std::size_t r = 0; r < reports.size(); ++r) {
        double value = 0.0;
        if (parameter == ConvergenceFit::Parameter::Dx) {
            value = 1.0 / static_cast<double>(reports[r].grid_n);
            if (r > 0 && reports[r].dt != reports[r - 1].dt) {
                throw std::invalid_argument("fit_convergence: dt must stay fixed in a dx study");
            }
        } else {
            value = reports[r].dt;
            if (r > 0 && reports[r].grid_n != reports[r - 1].grid_n) {
                throw std::invalid_argument("fit_convergence: grid must stay fixed in a dt study");
            }
        }
        if (r > 0 && value >= fit.samples.back().first) {
            throw std::invalid_argument("fit_convergence: parameter must strictly decrease");
        }
        if (!(reports[r].max_residual > 0.0) || !std::isfinite(reports[r].max_residual)) {
            throw std::invalid_argument("fit_convergence: degenerate variation");
        }
        fit.samples.emplace_back(value, reports[r].max_residual);
    }

    const double first = fit.samples.front().second;
    bool all_equal = true;
    for (const auto& s : fit.samples) {
        if (s.second != first) all_equal = false;
    }
    if (all_equal) throw std::invalid_argument("fit_convergence: degenerate variation");

    // least squares on log-log
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(fit.samples.size());
    for (const auto& s : fit.samples) {
        const double lx = std::log(s.first);
        const double ly = std::log(s.second);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    fit.fitted_order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return fit;
}

}  // namespace qqm
