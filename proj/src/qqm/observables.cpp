#include "qqm/observables.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace qqm {

namespace {
const Quaternion kUnitI{0.0, 1.0, 0.0, 0.0};
}

std::vector<double> density(const QField& f) {
    std::vector<double> rho(f.grid.n);
    for (std::size_t m = 0; m < f.grid.n; ++m) rho[m] = norm_sq(f.values[m]);
    return rho;
}

double total_norm(const QField& f) {
    double acc = 0.0;
    for (const auto& q : f.values) acc += norm_sq(q);
    return acc * f.grid.dx();
}

double integrate(const std::vector<double>& samples, const GridSpec& grid) {
    if (samples.size() != grid.n) {
        throw std::invalid_argument("integrate: sample count does not match grid");
    }
    double acc = 0.0;
    for (double v : samples) acc += v;
    return acc * grid.dx();
}

QField pi_field(const Hamiltonian& h, const QField& f) {
    require_same_grid(h.grid(), f.grid, "pi_field");
    QField e = gradient(f);
    if (!h.q_is_zero()) {
        QField qf = left_multiply(h.q(), f);
        accumulate(e, -1.0, qf);
    }
    const Quaternion minus_hbar_i{0.0, -h.hbar(), 0.0, 0.0};
    if (h.variant() == Variant::Lcwe) {
        return left_multiply(minus_hbar_i, e);
    }
    return right_multiply(e, minus_hbar_i);
}

std::vector<double> probability_current(const Hamiltonian& h, const QField& f) {
    QField pi = pi_field(h, f);
    std::vector<double> j(f.grid.n);
    const double inv_m = 1.0 / h.mass();
    if (h.variant() == Variant::Lcwe) {
        for (std::size_t m = 0; m < f.grid.n; ++m) {
            j[m] = qmul(conj(f.values[m]), pi.values[m]).w * inv_m;
        }
    } else {
        for (std::size_t m = 0; m < f.grid.n; ++m) {
            j[m] = qmul(pi.values[m], conj(f.values[m])).w * inv_m;
        }
    }
    return j;
}

RealFieldResult source(const Hamiltonian& h, const QField& f) {
    require_same_grid(h.grid(), f.grid, "source");
    RealFieldResult out;
    out.value.resize(f.grid.n);
    const double inv_hbar = 1.0 / h.hbar();
    for (std::size_t m = 0; m < f.grid.n; ++m) {
        const Quaternion& v = h.v().values[m];
        const Quaternion& psi = f.values[m];
        Quaternion g;
        if (h.variant() == Variant::Lcwe) {
            Quaternion mid = qmul(conj(v), kUnitI) - qmul(kUnitI, v);
            g = inv_hbar * qmul(conj(psi), qmul(mid, psi));
        } else {
            Quaternion u = qmul(psi, qmul(kUnitI, conj(psi)));
            g = inv_hbar * (qmul(u, conj(v)) - qmul(v, u));
        }
        out.value[m] = g.w;
        out.max_imag_residue = std::max(out.max_imag_residue, imag_norm(g));
    }
    return out;
}

double kinetic_momentum(const Hamiltonian& h, const QField& f) {
    return h.mass() * integrate(probability_current(h, f), f.grid);
}

Quaternion expectation_full(Variant variant, const QField& f, const QField& of) {
    require_same_grid(f.grid, of.grid, "expectation_full");
    Quaternion acc{};
    if (variant == Variant::Lcwe) {
        for (std::size_t m = 0; m < f.grid.n; ++m) {
            acc += qmul(conj(f.values[m]), of.values[m]);
        }
    } else {
        for (std::size_t m = 0; m < f.grid.n; ++m) {
            acc += qmul(of.values[m], conj(f.values[m]));
        }
    }
    return f.grid.dx() * acc;
}

double expectation(Variant variant, const QField& f, const OperatorSpec& op) {
    QField of = apply_operator(op, f);
    return expectation_full(variant, f, of).w;
}

double offcomplex_max(const QField& f) {
    double worst = 0.0;
    for (const auto& q : f.values) {
        worst = std::max(worst, std::max(std::abs(q.y), std::abs(q.z)));
    }
    return worst;
}

void write_observables_csv(const std::string& path, const std::vector<ObservableSample>& rows) {
    const std::string tmp = path + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "w");
    if (!fp) throw std::runtime_error("write_observables_csv: cannot open " + tmp);
    std::fprintf(fp, "time,name,value\n");
    for (const auto& r : rows) {
        std::fprintf(fp, "%.17g,%s,%.17g\n", r.time, r.name.c_str(), r.value);
    }
    if (std::fclose(fp) != 0) throw std::runtime_error("write_observables_csv: close failed");
    std::filesystem::rename(tmp, path);
}

}  // namespace qqm
