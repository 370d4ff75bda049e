#include "qqm/field.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>

namespace qqm {

QField::QField(const GridSpec& g, std::vector<Quaternion> v)
    : grid(g), values(std::move(v)) {
    if (values.size() != grid.n)
        throw std::invalid_argument("QField: sample count does not match grid");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (a != b)
        throw std::invalid_argument(std::string(where) + ": fields live on different grids");
}

QField gradient(const QField& f) {
    QField out(f.grid);
    const double inv = 1.0 / (2.0 * f.grid.dx());
    const std::size_t n = f.grid.n;
    for (std::size_t m = 0; m < n; ++m) {
        const Quaternion& fp = f.values[f.grid.next(m)];
        const Quaternion& fm = f.values[f.grid.prev(m)];
        out.values[m] = inv * (fp - fm);
    }
    return out;
}

QField laplacian(const QField& f) {
    QField out(f.grid);
    const double inv = 1.0 / (f.grid.dx() * f.grid.dx());
    const std::size_t n = f.grid.n;
    for (std::size_t m = 0; m < n; ++m) {
        const Quaternion& fp = f.values[f.grid.next(m)];
        const Quaternion& fm = f.values[f.grid.prev(m)];
        const Quaternion& f0 = f.values[m];
        out.values[m] = inv * (fp - 2.0 * f0 + fm);
    }
    return out;
}

Quaternion inner_product(const QField& f, const QField& g) {
    require_same_grid(f.grid, g.grid, "inner_product");
    Quaternion acc{};
    for (std::size_t m = 0; m < f.grid.n; ++m)
        acc += qmul(conj(f.values[m]), g.values[m]);
    return acc * f.grid.dx();
}

QField operator+(const QField& a, const QField& b) {
    require_same_grid(a.grid, b.grid, "QField operator+");
    QField out(a.grid);
    for (std::size_t m = 0; m < a.grid.n; ++m) out.values[m] = a.values[m] + b.values[m];
    return out;
}

QField operator-(const QField& a, const QField& b) {
    require_same_grid(a.grid, b.grid, "QField operator-");
    QField out(a.grid);
    for (std::size_t m = 0; m < a.grid.n; ++m) out.values[m] = a.values[m] - b.values[m];
    return out;
}

QField operator*(double s, const QField& f) {
    QField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m) out.values[m] = s * f.values[m];
    return out;
}

QField left_multiply(const QField& coeff, const QField& f) {
    require_same_grid(coeff.grid, f.grid, "left_multiply");
    QField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m)
        out.values[m] = qmul(coeff.values[m], f.values[m]);
    return out;
}

QField left_multiply(const Quaternion& q, const QField& f) {
    QField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m) out.values[m] = qmul(q, f.values[m]);
    return out;
}

QField right_multiply(const QField& f, const Quaternion& q) {
    QField out(f.grid);
    for (std::size_t m = 0; m < f.grid.n; ++m) out.values[m] = qmul(f.values[m], q);
    return out;
}

void accumulate(QField& dst, double s, const QField& src) {
    require_same_grid(dst.grid, src.grid, "accumulate");
    for (std::size_t m = 0; m < dst.grid.n; ++m) dst.values[m] += s * src.values[m];
}

double max_component(const QField& f) {
    double mx = 0.0;
    for (const Quaternion& q : f.values) {
        mx = std::max(mx, std::abs(q.w));
        mx = std::max(mx, std::abs(q.x));
        mx = std::max(mx, std::abs(q.y));
        mx = std::max(mx, std::abs(q.z));
    }
    return mx;
}

bool has_non_finite(const QField& f) {
    for (const Quaternion& q : f.values)
        if (!std::isfinite(q.w) || !std::isfinite(q.x) || !std::isfinite(q.y) ||
            !std::isfinite(q.z))
            return true;
    return false;
}

double l2_norm(const QField& f) {
    double acc = 0.0;
    for (const Quaternion& q : f.values) acc += norm_sq(q);
    return std::sqrt(acc * f.grid.dx());
}

void write_field_csv(const QField& f, const std::string& path) {
    const std::string tmp = path + ".tmp";
    std::FILE* fp = std::fopen(tmp.c_str(), "wb");
    if (!fp) throw std::runtime_error("write_field_csv: cannot open " + tmp);
    std::fprintf(fp, "x,x0,x1,x2,x3\n");
    for (std::size_t m = 0; m < f.grid.n; ++m) {
        const Quaternion& q = f.values[m];
        std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g\n", f.grid.point(m), q.w,
                     q.x, q.y, q.z);
    }
    if (std::fclose(fp) != 0) throw std::runtime_error("write_field_csv: close failed");
    std::filesystem::rename(tmp, path);
}

}  // namespace qqm
