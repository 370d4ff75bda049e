#pragma once

#include <string>
#include <vector>

#include "qqm/grid.hpp"
#include "qqm/quaternion.hpp"

// Quaternion-valued grid field plus the discrete calculus used everywhere:
// second-order central first derivative and compact three-point Laplacian on
// the periodic grid, and the quaternion-valued inner product
//   <f, g> = sum_m conj(f_m) g_m dx.

namespace qqm {

struct QField {
    GridSpec grid;
    std::vector<Quaternion> values;

    QField() = default;
    explicit QField(const GridSpec& g) : grid(g), values(g.n) {}
    QField(const GridSpec& g, std::vector<Quaternion> v);

    std::size_t size() const { return values.size(); }
    Quaternion& operator[](std::size_t m) { return values[m]; }
    const Quaternion& operator[](std::size_t m) const { return values[m]; }
};

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

// f'(x_m) ~ (f_{m+1} - f_{m-1}) / (2 dx), periodic wrap.
QField gradient(const QField& f);

// f''(x_m) ~ (f_{m+1} - 2 f_m + f_{m-1}) / dx^2, periodic wrap.
QField laplacian(const QField& f);

Quaternion inner_product(const QField& f, const QField& g);

// Linear-algebra conveniences (elementwise).
QField operator+(const QField& a, const QField& b);
QField operator-(const QField& a, const QField& b);
QField operator*(double s, const QField& f);

// Pointwise products against a coefficient field.
QField left_multiply(const QField& coeff, const QField& f);

// Left/right multiplication by a constant quaternion.
QField left_multiply(const Quaternion& q, const QField& f);
QField right_multiply(const QField& f, const Quaternion& q);

// axpy-style accumulation: dst += s * src.
void accumulate(QField& dst, double s, const QField& src);

double max_component(const QField& f);
bool has_non_finite(const QField& f);

// L2 norm sqrt(sum |f_m|^2 dx) and the plain density integral.
double l2_norm(const QField& f);

// CSV with header x,x0,x1,x2,x3, one row per grid node, written atomically
// (temp file + rename).  Values use %.17g so rewriting is bit-stable.
void write_field_csv(const QField& f, const std::string& path);

}  // namespace qqm
