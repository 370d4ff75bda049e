#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "qqm/operators.hpp"

using qqm::GridSpec;
using qqm::OperatorSpec;
using qqm::QField;
using qqm::Quaternion;

namespace {

constexpr double kPi = 3.14159265358979323846;

QField random_field(const GridSpec& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    QField f(g);
    for (std::size_t m = 0; m < g.n; ++m) f[m] = {u(rng), u(rng), u(rng), u(rng)};
    return f;
}

QField complex_plane_wave(const GridSpec& g, double k) {
    QField f(g);
    for (std::size_t m = 0; m < g.n; ++m)
        f[m] = {std::cos(k * g.point(m)), std::sin(k * g.point(m)), 0.0, 0.0};
    return f;
}

double max_abs_diff(const QField& a, const QField& b) {
    double worst = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m)
        worst = std::max(worst, qqm::norm(a[m] - b[m]));
    return worst;
}

bool exactly_equal(const QField& a, const QField& b) {
    for (std::size_t m = 0; m < a.size(); ++m) {
        const Quaternion &p = a[m], &q = b[m];
        if (p.w != q.w || p.x != q.x || p.y != q.y || p.z != q.z) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("position operator on a point mass scales by the node coordinate") {
    GridSpec g(8, 4.0);  // node 5 sits exactly at x = 0.5
    QField f(g);
    f[5] = {1.0, -2.0, 0.5, 3.0};
    QField out = apply_operator(qqm::op_position(), f);
    for (std::size_t m = 0; m < g.n; ++m) {
        if (m == 5) {
            CHECK(qqm::norm(out[m] - 0.5 * f[m]) == 0.0);
        } else {
            CHECK(qqm::norm(out[m]) == 0.0);
        }
    }
}

TEST_CASE("LeftI after a coefficient equals multiplying by the rotated coefficient") {
    GridSpec g(64, 2.0 * kPi);
    QField v = random_field(g, 0x09e40001);
    QField f = random_field(g, 0x09e40002);
    QField iv(g);
    for (std::size_t m = 0; m < g.n; ++m) iv[m] = qmul(qqm::basis_i(), v[m]);
    OperatorSpec lhs = qqm::op_compose({qqm::op_left_i(), qqm::op_multiply(v)});
    OperatorSpec rhs = qqm::op_multiply(iv);
    // i(v f) vs (i v) f: associativity rounding only
    CHECK(max_abs_diff(apply_operator(lhs, f), apply_operator(rhs, f)) <= 1e-13);
}

TEST_CASE("RightI equals LeftI on complex fields and flips sign on j-fields") {
    GridSpec g(64, 2.0 * kPi);
    QField c(g), jg(g);
    std::mt19937_64 rng(0x09e40003);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t m = 0; m < g.n; ++m) {
        c[m] = {u(rng), u(rng), 0.0, 0.0};
        jg[m] = {0.0, 0.0, u(rng), u(rng)};
    }
    QField left_c = apply_operator(qqm::op_left_i(), c);
    QField right_c = apply_operator(qqm::op_right_i(), c);
    CHECK(max_abs_diff(left_c, right_c) == 0.0);
    QField left_j = apply_operator(qqm::op_left_i(), jg);
    QField right_j = apply_operator(qqm::op_right_i(), jg);
    // i anti-commutes with j and k: f*i = -i*f on the j,k block, exactly
    CHECK(exactly_equal(right_j, -1.0 * left_j));
    // and i * (i * f) = -f without rounding (components only move and flip sign)
    QField f = random_field(g, 0x09e40004);
    QField ii = apply_operator(qqm::op_left_i(), apply_operator(qqm::op_left_i(), f));
    CHECK(exactly_equal(ii, -1.0 * f));
}

TEST_CASE("Compose applies the rightmost factor first") {
    GridSpec g(64, 2.0 * kPi);
    QField f = random_field(g, 0x09e40005);
    OperatorSpec x_then_d = qqm::op_compose({qqm::op_derivative(), qqm::op_position()});
    OperatorSpec d_then_x = qqm::op_compose({qqm::op_position(), qqm::op_derivative()});
    QField xf(g);
    for (std::size_t m = 0; m < g.n; ++m) xf[m] = g.point(m) * f[m];
    CHECK(exactly_equal(apply_operator(x_then_d, f), gradient(xf)));
    QField df = gradient(f);
    QField xdf(g);
    for (std::size_t m = 0; m < g.n; ++m) xdf[m] = g.point(m) * df[m];
    CHECK(exactly_equal(apply_operator(d_then_x, f), xdf));
    // the two orders genuinely differ
    CHECK(max_abs_diff(apply_operator(x_then_d, f), apply_operator(d_then_x, f)) > 1e-3);
}

TEST_CASE("Sum and Scale evaluate elementwise") {
    GridSpec g(64, 2.0 * kPi);
    QField f = random_field(g, 0x09e40006);
    OperatorSpec op = qqm::op_scale(2.5, qqm::op_sum({qqm::op_position(), qqm::op_identity()}));
    QField out = apply_operator(op, f);
    for (std::size_t m = 0; m < g.n; ++m) {
        Quaternion expect = 2.5 * (g.point(m) * f[m] + f[m]);
        CHECK(qqm::norm(out[m] - expect) == 0.0);
    }
}

TEST_CASE("canonical momentum has the discrete plane-wave eigenvalue") {
    GridSpec g(128, 2.0 * kPi);
    const double hbar = 0.7;
    const double k = 4.0;
    const double k_eff = std::sin(k * g.dx()) / g.dx();
    OperatorSpec p = qqm::op_momentum(hbar);
    QField psi = complex_plane_wave(g, k);
    CHECK(max_abs_diff(apply_operator(p, psi), (hbar * k_eff) * psi) <= 1e-12 * hbar * k);
    // same eigenvalue on e^{ikx} j: the right j factor rides along
    QField psij(g);
    for (std::size_t m = 0; m < g.n; ++m) psij[m] = qmul(psi[m], qqm::basis_j());
    CHECK(max_abs_diff(apply_operator(p, psij), (hbar * k_eff) * psij) <= 1e-12 * hbar * k);
}

TEST_CASE("right-linearity classifier spots RightI anywhere in the tree") {
    CHECK(qqm::operator_is_right_linear(qqm::op_position()));
    CHECK(qqm::operator_is_right_linear(qqm::op_momentum(1.0)));
    CHECK(qqm::operator_is_right_linear(
        qqm::op_compose({qqm::op_left_i(), qqm::op_derivative()})));
    CHECK(!qqm::operator_is_right_linear(qqm::op_right_i()));
    CHECK(!qqm::operator_is_right_linear(qqm::op_right_i_suffix(qqm::op_position())));
    CHECK(!qqm::operator_is_right_linear(
        qqm::op_sum({qqm::op_identity(), qqm::op_scale(2.0, qqm::op_right_i())})));
}

TEST_CASE("right-linear operators commute with right constant factors") {
    GridSpec g(64, 2.0 * kPi);
    QField f = random_field(g, 0x09e40007);
    const Quaternion c{0.3, -0.8, 0.5, 0.1};
    QField fc(g);
    for (std::size_t m = 0; m < g.n; ++m) fc[m] = qmul(f[m], c);
    for (const OperatorSpec& op :
         {qqm::op_position(), qqm::op_momentum(1.0),
          qqm::op_compose({qqm::op_left_i(), qqm::op_position(), qqm::op_left_i()})}) {
        QField lhs = apply_operator(op, fc);
        QField rhs = apply_operator(op, f);
        for (std::size_t m = 0; m < g.n; ++m) rhs[m] = qmul(rhs[m], c);
        CHECK(max_abs_diff(lhs, rhs) <= 1e-13 * (1.0 + max_component(f) / g.dx()));
    }
    // RightI does not: (f i) c != (f c) i for c off the complex axis
    QField lhs = apply_operator(qqm::op_right_i(), fc);
    QField rhs = apply_operator(qqm::op_right_i(), f);
    for (std::size_t m = 0; m < g.n; ++m) rhs[m] = qmul(rhs[m], c);
    CHECK(max_abs_diff(lhs, rhs) > 1e-2);
}

TEST_CASE("the |i suffix multiplies by i on the right after the inner operator") {
    GridSpec g(64, 2.0 * kPi);
    QField f = random_field(g, 0x09e40008);
    QField out = apply_operator(qqm::op_right_i_suffix(qqm::op_position()), f);
    for (std::size_t m = 0; m < g.n; ++m) {
        Quaternion expect = qmul(g.point(m) * f[m], qqm::basis_i());
        CHECK(qqm::norm(out[m] - expect) == 0.0);
    }
}

TEST_CASE("malformed trees are rejected") {
    GridSpec g(16, 2.0);
    QField f = random_field(g, 0x09e40009);
    OperatorSpec no_coeff;
    no_coeff.kind = qqm::OperatorKind::MultiplyField;
    CHECK_THROWS_AS(apply_operator(no_coeff, f), std::invalid_argument);
    OperatorSpec empty_compose;
    empty_compose.kind = qqm::OperatorKind::Compose;
    CHECK_THROWS_AS(apply_operator(empty_compose, f), std::invalid_argument);
    OperatorSpec empty_sum;
    empty_sum.kind = qqm::OperatorKind::Sum;
    CHECK_THROWS_AS(apply_operator(empty_sum, f), std::invalid_argument);
    OperatorSpec bad_scale;
    bad_scale.kind = qqm::OperatorKind::Scale;
    CHECK_THROWS_AS(apply_operator(bad_scale, f), std::invalid_argument);
    // coefficient on a different grid
    OperatorSpec wrong_grid = qqm::op_multiply(QField(GridSpec(32, 2.0)));
    CHECK_THROWS_AS(apply_operator(wrong_grid, f), std::invalid_argument);
}
