#include <catch2/catch_amalgamated.hpp>
#include <random>

#include "renormlab/series2.hpp"

using namespace renormlab;

namespace {

Series2<cplx> random_series2(std::mt19937& rng, int nx, int ny, double decay, double scale) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Series2<cplx> f(nx, ny, 1.0, 1.0);
    for (int j = 0; j <= nx; ++j)
        for (int k = 0; k <= ny; ++k)
            f.at(j, k) = scale * cplx(u(rng), u(rng)) * std::pow(decay, j + k);
    return f;
}

}  // namespace

TEST_CASE("partial_y on monomials") {
    Series2<cplx> xy(4, 4, 1.0, 1.0);
    xy.at(1, 1) = 1.0;
    Series2<cplx> d = s2_partial_y(xy);
    CHECK(std::abs(d.at(1, 0) - 1.0) < 1e-15);
    CHECK(s2_majorant(s2_sub(d, [] {
              Series2<cplx> x(4, 3, 1.0, 1.0);
              x.at(1, 0) = 1.0;
              return x;
          }())) < 1e-15);

    Series2<cplx> x2(4, 4, 1.0, 1.0);
    x2.at(2, 0) = 1.0;
    CHECK(s2_majorant(s2_partial_y(x2)) == 0.0);
}

TEST_CASE("partial_y of y^2 alpha(x) against a central finite-difference oracle") {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    // F = y^2 alpha(x)
    Series2<cplx> F(8, 4, 1.0, 1.0);
    for (int j = 0; j <= 8; ++j) F.at(j, 2) = cplx(u(rng), u(rng));
    Series2<cplx> dF = s2_partial_y(F);
    const double h = 1e-5;
    for (int i = 0; i < 5; ++i) {
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        const cplx fd = (s2_eval(F, x, y + h) - s2_eval(F, x, y - h)) / (2 * h);
        const cplx an = s2_eval(dF, x, y);
        CHECK(std::abs(fd - an) / std::max(1e-30, std::abs(an)) < 1e-8);
    }
}

TEST_CASE("mul and eval are consistent at points") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    Series2<cplx> f = random_series2(rng, 6, 5, 0.5, 1.0);
    Series2<cplx> g = random_series2(rng, 6, 5, 0.5, 1.0);
    Series2<cplx> p = s2_mul(f, g, 12, 10);
    for (int i = 0; i < 10; ++i) {
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        CHECK(std::abs(s2_eval(p, x, y) - s2_eval(f, x, y) * s2_eval(g, x, y)) < 1e-9);
    }
}

TEST_CASE("compose_x and compose_xy match pointwise composition") {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    // output degrees high enough that composite truncation sits below 1e-8
    Series2<cplx> f = random_series2(rng, 8, 6, 0.5, 1.0);
    Series2<cplx> g1 = random_series2(rng, 16, 12, 0.5, 0.25);
    Series2<cplx> g2 = random_series2(rng, 16, 12, 0.5, 0.25);
    Series2<cplx> cx = s2_compose_x(f, g1, 1e9);
    Series2<cplx> cxy = s2_compose_xy(f, g1, g2, 1e9);
    Series2<cplx> cys = s2_compose_x_ysubst(f, g1, 1e9);
    for (int i = 0; i < 10; ++i) {
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        CHECK(std::abs(s2_eval(cx, x, y) - s2_eval(f, s2_eval(g1, x, y), y)) < 1e-8);
        CHECK(std::abs(s2_eval(cxy, x, y) - s2_eval(f, s2_eval(g1, x, y), s2_eval(g2, x, y))) < 1e-8);
        CHECK(std::abs(s2_eval(cys, x, y) - s2_eval(f, s2_eval(g1, x, y), x)) < 1e-8);
    }
}

TEST_CASE("compose_to_1d slices agree with pointwise evaluation") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    Series2<cplx> f = random_series2(rng, 8, 6, 0.5, 1.0);
    Series1<cplx> g1(10, 1.0), g2(10, 1.0);
    for (int k = 0; k <= 10; ++k) {
        g1[k] = 0.3 * cplx(u(rng), u(rng)) * std::pow(0.5, k);
        g2[k] = 0.3 * cplx(u(rng), u(rng)) * std::pow(0.5, k);
    }
    Series1<cplx> s = s2_compose_to_1d(f, g1, g2);
    for (int i = 0; i < 10; ++i) {
        const cplx x(u(rng), u(rng));
        CHECK(std::abs(s1_eval(s, x) - s2_eval(f, s1_eval(g1, x), s1_eval(g2, x))) < 1e-9);
    }
}

TEST_CASE("revert_x inverts the first slot of a family") {
    // a(x, y) = x + 0.3 x^2 + 0.1 y x, anchored through x = 0.2. The branch
    // point sits at the critical value (modulus ~0.84), so evaluation is
    // checked well inside the disk of convergence.
    Series2<cplx> a(24, 10, 1.0, 1.0);
    a.at(1, 0) = 1.0;
    a.at(2, 0) = 0.3;
    a.at(1, 1) = 0.1;
    Series2<cplx> q = s2_revert_x(a, cplx(0.2));
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    for (int i = 0; i < 10; ++i) {
        const cplx x(u(rng), u(rng)), y(u(rng), u(rng));
        // a(q(x, y), y) = x
        CHECK(std::abs(s2_eval(a, s2_eval(q, x, y), y) - x) < 1e-9);
    }
    // anchor branch: q(a(0.2, 0), 0) = 0.2
    CHECK(std::abs(s2_eval(q, s2_eval(a, cplx(0.2), cplx(0.0)), cplx(0.0)) - 0.2) < 1e-9);
}
