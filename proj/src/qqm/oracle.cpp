#include "qqm/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "qqm/oracle_compare.hpp"

namespace qqm {

namespace {

using cd = std::complex<double>;

void check_setup(const ComplexSetup& setup) {
    if (setup.alpha.size() != setup.grid.n || setup.v0.size() != setup.grid.n) {
        throw std::invalid_argument("ComplexSetup: sample arrays must match the grid size");
    }
}

CField time_derivative(const ComplexSetup& setup, const CField& f) {
    CField hf = apply_complex_hamiltonian(setup, f);
    const cd scale = cd(0.0, -1.0 / setup.hbar);
    for (auto& v : hf.values) v *= scale;
    return hf;
}

}  // namespace

CField apply_complex_hamiltonian(const ComplexSetup& setup, const CField& f) {
    check_setup(setup);
    if (f.grid != setup.grid) {
        throw std::invalid_argument("apply_complex_hamiltonian: field grid mismatch");
    }
    const GridSpec& g = setup.grid;
    const std::size_t n = g.n;
    const double dx = g.dx();
    const double inv_2dx = 1.0 / (2.0 * dx);
    const double inv_dx2 = 1.0 / (dx * dx);
    const double kappa = setup.hbar * setup.hbar / (2.0 * setup.mass);
    const cd iu(0.0, 1.0);

    CField out(g);
    for (std::size_t m = 0; m < n; ++m) {
        const std::size_t mp = g.next(m);
        const std::size_t mm = g.prev(m);
        const cd lap = (f.values[mp] - 2.0 * f.values[m] + f.values[mm]) * inv_dx2;
        const cd grad = (f.values[mp] - f.values[mm]) * inv_2dx;
        const cd grad_alpha_f =
            (setup.alpha[mp] * f.values[mp] - setup.alpha[mm] * f.values[mm]) * inv_2dx;
        const cd kinetic = -lap + iu * grad_alpha_f + iu * setup.alpha[m] * grad +
                           setup.alpha[m] * setup.alpha[m] * f.values[m];
        out.values[m] = kappa * kinetic + setup.v0[m] * f.values[m];
    }
    return out;
}

CTrajectory evolve_complex(const ComplexSetup& setup, const CField& initial, double dt,
                           std::size_t steps, std::size_t sample_every) {
    check_setup(setup);
    if (dt <= 0.0) throw std::invalid_argument("evolve_complex: dt must be positive");
    if (sample_every == 0) throw std::invalid_argument("evolve_complex: sample_every must be >= 1");

    const std::size_t n = setup.grid.n;
    CTrajectory traj;
    CField state = initial;
    traj.times.push_back(0.0);
    traj.states.push_back(state);

    for (std::size_t s = 1; s <= steps; ++s) {
        CField k1 = time_derivative(setup, state);

        CField tmp = state;
        for (std::size_t m = 0; m < n; ++m) tmp.values[m] += 0.5 * dt * k1.values[m];
        CField k2 = time_derivative(setup, tmp);

        tmp = state;
        for (std::size_t m = 0; m < n; ++m) tmp.values[m] += 0.5 * dt * k2.values[m];
        CField k3 = time_derivative(setup, tmp);

        tmp = state;
        for (std::size_t m = 0; m < n; ++m) tmp.values[m] += dt * k3.values[m];
        CField k4 = time_derivative(setup, tmp);

        const double w = dt / 6.0;
        for (std::size_t m = 0; m < n; ++m) {
            state.values[m] +=
                w * (k1.values[m] + 2.0 * k2.values[m] + 2.0 * k3.values[m] + k4.values[m]);
        }
        if (s % sample_every == 0) {
            traj.times.push_back(static_cast<double>(s) * dt);
            traj.states.push_back(state);
        }
    }
    return traj;
}

double field_distance_l2(const QField& a, const CField& b) {
    if (a.grid != b.grid) {
        throw std::invalid_argument("field_distance_l2: grid mismatch");
    }
    double acc = 0.0;
    for (std::size_t m = 0; m < a.grid.n; ++m) {
        const double dw = a.values[m].w - b.values[m].real();
        const double dx_ = a.values[m].x - b.values[m].imag();
        acc += dw * dw + dx_ * dx_ + a.values[m].y * a.values[m].y +
               a.values[m].z * a.values[m].z;
    }
    return std::sqrt(acc * a.grid.dx());
}

double max_trajectory_distance(const Trajectory& a, const CTrajectory& b) {
    if (a.times.size() != b.times.size()) {
        throw std::invalid_argument("max_trajectory_distance: sample counts differ");
    }
    double worst = 0.0;
    for (std::size_t s = 0; s < a.times.size(); ++s) {
        if (a.times[s] != b.times[s]) {
            throw std::invalid_argument("max_trajectory_distance: sample times differ");
        }
        worst = std::max(worst, field_distance_l2(a.states[s], b.states[s]));
    }
    return worst;
}

CField complex_slice(const QField& f) {
    CField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m) {
        out.values[m] = {f.values[m].w, f.values[m].x};
    }
    return out;
}

QField embed_complex(const CField& f) {
    QField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m) {
        out.values[m] = {f.values[m].real(), f.values[m].imag(), 0.0, 0.0};
    }
    return out;
}

}  // namespace qqm
