#include "qqm/dynamics.hpp"

#include <cstdio>

namespace qqm {

namespace {
const Quaternion kUnitI{0.0, 1.0, 0.0, 0.0};
}

const char* variant_name(Variant v) { return v == Variant::Lcwe ? "lcwe" : "rcwe"; }

NanAbortError::NanAbortError(std::size_t step_index, double t)
    : std::runtime_error("evolution aborted: non-finite state at step " +
                         std::to_string(step_index) + " (t = " + std::to_string(t) + ")"),
      step(step_index),
      time(t) {}

Hamiltonian::Hamiltonian(const PotentialSpec& pot, Variant variant, double hbar, double mass)
    : grid_(pot.grid),
      variant_(variant),
      hbar_(hbar),
      mass_(mass),
      kappa_(hbar * hbar / (2.0 * mass)),
      q_(pot.q_field()),
      v_(pot.v_field()),
      p_(pot.grid),
      pq_(pot.grid),
      qq_(pot.grid),
      q_zero_(pot.q_is_zero()) {
    if (hbar <= 0.0 || mass <= 0.0) {
        throw std::invalid_argument("Hamiltonian: hbar and mass must be positive");
    }
    for (std::size_t m = 0; m < grid_.n; ++m) {
        p_.values[m] = qmul(kUnitI, qmul(q_.values[m], kUnitI));
        pq_.values[m] = qmul(p_.values[m], q_.values[m]);
        qq_.values[m] = qmul(q_.values[m], q_.values[m]);
    }
}

QField Hamiltonian::apply(const QField& f) const {
    require_same_grid(grid_, f.grid, "Hamiltonian::apply");
    const std::size_t n = grid_.n;
    QField out(grid_);

    if (q_zero_) {
        QField lap = laplacian(f);
        for (std::size_t m = 0; m < n; ++m) {
            out.values[m] = (-kappa_) * lap.values[m] + qmul(v_.values[m], f.values[m]);
        }
        return out;
    }

    QField lap = laplacian(f);
    QField grad_f = gradient(f);
    QField qf = left_multiply(q_, f);
    QField grad_qf = gradient(qf);

    if (variant_ == Variant::Lcwe) {
        for (std::size_t m = 0; m < n; ++m) {
            Quaternion kin = -1.0 * lap.values[m] + grad_qf.values[m] -
                             qmul(p_.values[m], grad_f.values[m]) +
                             qmul(pq_.values[m], f.values[m]);
            out.values[m] = kappa_ * kin + qmul(v_.values[m], f.values[m]);
        }
    } else {
        for (std::size_t m = 0; m < n; ++m) {
            Quaternion kin = -1.0 * lap.values[m] + grad_qf.values[m] +
                             qmul(q_.values[m], grad_f.values[m]) -
                             qmul(qq_.values[m], f.values[m]);
            out.values[m] = kappa_ * kin + qmul(v_.values[m], f.values[m]);
        }
    }
    return out;
}

QField Hamiltonian::time_derivative(const QField& f) const {
    QField hf = apply(f);
    const Quaternion minus_i_over_hbar{0.0, -1.0 / hbar_, 0.0, 0.0};
    if (variant_ == Variant::Lcwe) {
        return left_multiply(minus_i_over_hbar, hf);
    }
    return right_multiply(hf, minus_i_over_hbar);
}

double Trajectory::sample_dt() const {
    if (times.size() < 2) {
        throw std::logic_error("Trajectory::sample_dt: need at least two samples");
    }
    return times[1] - times[0];
}

void step_rk4(const Hamiltonian& h, QField& state, double dt) {
    QField k1 = h.time_derivative(state);

    QField tmp = state;
    accumulate(tmp, 0.5 * dt, k1);
    QField k2 = h.time_derivative(tmp);

    tmp = state;
    accumulate(tmp, 0.5 * dt, k2);
    QField k3 = h.time_derivative(tmp);

    tmp = state;
    accumulate(tmp, dt, k3);
    QField k4 = h.time_derivative(tmp);

    const double w = dt / 6.0;
    accumulate(state, w, k1);
    accumulate(state, 2.0 * w, k2);
    accumulate(state, 2.0 * w, k3);
    accumulate(state, w, k4);
}

Trajectory evolve(const Hamiltonian& h, const QField& initial, const SimulationConfig& config) {
    require_same_grid(h.grid(), initial.grid, "evolve");
    if (config.dt <= 0.0) throw std::invalid_argument("evolve: dt must be positive");
    if (config.sample_every == 0) throw std::invalid_argument("evolve: sample_every must be >= 1");

    const double dx = h.grid().dx();
    const double dt_advisory = config.stability_safety * dx * dx * h.mass() / h.hbar();
    if (config.dt > dt_advisory) {
        std::fprintf(stderr,
                     "warning: dt = %g exceeds the explicit-scheme advisory %g "
                     "(safety %g, dx = %g); expect growth\n",
                     config.dt, dt_advisory, config.stability_safety, dx);
    }

    Trajectory traj;
    traj.times.reserve(config.steps / config.sample_every + 2);
    traj.states.reserve(config.steps / config.sample_every + 2);

    QField state = initial;
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    for (std::size_t s = 1; s <= config.steps; ++s) {
        step_rk4(h, state, config.dt);
        const double t = static_cast<double>(s) * config.dt;
        if (has_non_finite(state)) throw NanAbortError(s, t);
        if (s % config.sample_every == 0) {
            traj.times.push_back(t);
            traj.states.push_back(state);
        }
    }
    return traj;
}

Quaternion hermiticity_defect(const Hamiltonian& h, const QField& f, const QField& g) {
    QField hg = h.apply(g);
    QField hf = h.apply(f);
    return inner_product(f, hg) - inner_product(hf, g);
}

}  // namespace qqm
