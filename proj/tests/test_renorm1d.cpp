#include <catch2/catch_amalgamated.hpp>

#include "testutil.hpp"

using namespace renormlab;
using testutil::c_star;
using testutil::cfg;
using testutil::z0;

TEST_CASE("siegel_c formula") {
    const cplx cs = siegel_c(mu_star(), 0.0);
    CHECK(std::abs(cs - cplx(-0.390541, -0.586788)) < 1e-6);
    CHECK(std::abs(siegel_c(0.0, 0.0)) == 0.0);
    CHECK(std::abs(siegel_c(1.0, 0.0) - 0.25) < 1e-15);
}

TEST_CASE("quad_pair structure") {
    const RunConfig& c = cfg();
    Pair1D<cplx> z = quad_pair<cplx>(c_star(), c.degree_1d, c.r_z, c.r_w, z0());
    CHECK(std::abs(z.xi[0] - 1.0) == 0.0);
    auto [d0, d2] = commutator_defects(z);
    CHECK(std::abs(d0) < 1e-12);
    CHECK(std::abs(d2) < 1e-12);
    // critical values: xi(0) = 1 and eta(0) = 1 + c
    CHECK(std::abs(z.eta_at(cplx(0.0)) - (c_star() + 1.0)) < 1e-13);
    // criticality at the absolute origin
    CHECK(std::abs(z.eta_deriv_at(cplx(0.0))) < 1e-13);
    CHECK(std::abs(z.xi_deriv_at(cplx(0.0))) == 0.0);
    CHECK_THROWS_AS(quad_pair<cplx>(cplx(0.0), 8, 1.0, 1.0, cplx(0.0)), Error);
    validate_pair(z, cfg().defect_tol);
}

TEST_CASE("a map commutes with itself") {
    // pair with eta and xi the same function (xi lifted into the Z-chart)
    const RunConfig& c = cfg();
    Pair1D<cplx> q = quad_pair<cplx>(c_star(), c.degree_1d, c.r_z, c.r_w, z0());
    Pair1D<cplx> same;
    same.z0 = z0();
    same.xi = q.xi;
    same.eta = s1_compose(q.xi, s1_affine<cplx>(z0(), 1.0, c.degree_1d, c.r_z), 1e9);
    same.eta.radius = c.r_z;
    auto [d0, d2] = commutator_defects(same);
    CHECK(std::abs(d0) < 1e-13);
    CHECK(std::abs(d2) < 1e-13);
}

TEST_CASE("deep quadratic orbit approaches the fixed point geometrically") {
    const RunConfig& c = cfg();
    const NewtonResult& fp = testutil::fixed_point();
    double prev = -1;
    for (int n = 5; n <= 9; ++n) {
        Pair1D<cplx> zn = quad_renorm_orbit<cplx>(c_star(), n, c.degree_1d, c.r_z, c.r_w, z0());
        const double d = pair_distance(zn, fp.zstar);
        if (prev > 0) CHECK(d / prev < 0.9);
        prev = d;
        auto [d0, d2] = commutator_defects(zn);
        CHECK(std::abs(d0) < 1e-8);  // commuting up to orbit roundoff
        CHECK(std::abs(d2) < 1e-7);
    }
}

TEST_CASE("renormalization defects stay zero on commuting input") {
    const RunConfig& c = cfg();
    Pair1D<cplx> z = quad_renorm_orbit<cplx>(c_star(), 6, c.degree_1d, c.r_z, c.r_w, z0());
    Pair1D<cplx> rz = renormalize1d(z, c.domain_slack * 4);
    auto [d0, d2] = commutator_defects(rz);
    CHECK(std::abs(d0) < 1e-11);
    CHECK(std::abs(d2) < 1e-10);
}

TEST_CASE("Newton fixed point: residual, lambda, defects") {
    const NewtonResult& fp = testutil::fixed_point();
    CHECK(fp.residual < cfg().newton_tol);

    // fixed-point equation componentwise (eta part of the residual)
    Pair1D<cplx> rz = renormalize1d(fp.zstar, 1e9);
    CHECK(s1_majorant(s1_sub(rz.eta, fp.zstar.eta)) < 1e-10);
    CHECK(s1_majorant(s1_sub(rz.xi, fp.zstar.xi)) < 1e-10);
    CHECK(std::abs(rz.lambda() - fp.lambda_star) < 1e-9);

    auto [d0, d2] = commutator_defects(fp.zstar);
    CHECK(std::abs(d0) < 1e-10);
    CHECK(std::abs(d2) < 1e-10);

    // direct-iteration oracle at the deepest level the critical-orbit point
    // arithmetic supports (n = 12; see the closest-return roundoff analysis)
    cplx w = 0.0;
    std::int64_t m = 0;
    cplx r25, r27;
    for (int j = 0; j <= 27; ++j) {
        const std::int64_t q = fibonacci_q(j);
        while (m < q) {
            w = w * w + c_star();
            ++m;
        }
        if (j == 25) r25 = w;
        if (j == 27) r27 = w;
    }
    const cplx lambda_oracle = r27 / r25;  // lambda_12
    CHECK(std::abs(lambda_oracle - fp.lambda_star) < 1e-6);

    // g*'(1) = lambda*^2, i.e. eta*'(1) = 1/lambda*
    const cplx gp1 = fp.lambda_star / fp.zstar.eta_deriv_at(cplx(1.0));
    CHECK(std::abs(gp1 - fp.lambda_star * fp.lambda_star) < 1e-8);
}

TEST_CASE("lambda* is stable under degree and radius changes") {
    const RunConfig& c = cfg();
    const NewtonResult& fp = testutil::fixed_point();
    {
        Pair1D<cplx> seed =
            quad_renorm_orbit<cplx>(c_star(), c.warmup_1d, c.degree_1d + 16, c.r_z, c.r_w, z0());
        NewtonResult up = newton_fixed_point(seed);
        CHECK(std::abs(up.lambda_star - fp.lambda_star) < 1e-6);
    }
    {
        Pair1D<cplx> seed = quad_renorm_orbit<cplx>(c_star(), c.warmup_1d, c.degree_1d,
                                                    c.r_z * 0.9, c.r_w * 1.1, z0());
        NewtonResult up = newton_fixed_point(seed);
        CHECK(std::abs(up.lambda_star - fp.lambda_star) < 1e-6);
    }
}

TEST_CASE("differential spectrum: single expanding eigenvalue with a gap") {
    const NewtonResult& fp = testutil::fixed_point();
    SpectrumReport r31 = differential_spectrum(fp.zstar, 31);
    CHECK(r31.expanding_count == 1);
    CHECK(std::abs(r31.eigenvalues[1]) < 0.95);

    SpectrumReport r91 = differential_spectrum(fp.zstar, 91);
    SpectrumReport r111 = differential_spectrum(fp.zstar, 111);
    CHECK(r91.expanding_count == 1);
    CHECK(r111.expanding_count == 1);
    CHECK(std::abs(r111.eigenvalues[1]) < 0.95);
    CHECK(std::abs(std::abs(r111.eigenvalues[0]) - std::abs(r91.eigenvalues[0])) < 1e-4);
}

TEST_CASE("linearizer of g*") {
    const NewtonResult& fp = testutil::fixed_point();
    Series1<cplx> u = linearize_gstar(fp.zstar);
    CHECK(std::abs(u[0]) == 0.0);
    CHECK(std::abs(u[1] - 1.0) < 1e-14);

    // functional equation u(g(x)) = lambda^2 u(x) on |x| < 0.2
    const cplx lam = fp.lambda_star;
    const int deg = fp.zstar.eta.degree();
    Series1<cplx> shift = s1_affine<cplx>(cplx(1.0) - fp.zstar.z0, 1.0, deg, 0.25);
    Series1<cplx> f = s1_compose(fp.zstar.eta, shift, 1e12);
    f[0] -= lam;
    Series1<cplx> w_of_v = s1_revert_about(f, cplx(0.0));
    Series1<cplx> g = s1_compose(w_of_v, s1_affine<cplx>(0.0, lam, deg, 0.25), 1e12);
    g[0] = 0.0;
    for (int i = 0; i < 16; ++i) {
        const cplx x = 0.19 * std::polar(1.0, 2 * M_PI * i / 16.0);
        CHECK(std::abs(s1_eval(u, s1_eval(g, x)) - lam * lam * s1_eval(u, x)) < 1e-9);
    }

    // Cauchy differences of lambda^{-2n} g^n decay roughly like |lambda^2|
    Series1<cplx> it = s1_identity<cplx>(deg, 0.25);
    const cplx lam2_inv = 1.0 / (lam * lam);
    std::vector<double> diffs;
    Series1<cplx> prev = it;
    for (int n = 0; n < 12; ++n) {
        Series1<cplx> next = s1_scale(s1_compose(prev, g, 1e12), lam2_inv);
        diffs.push_back(s1_majorant(s1_sub(next, prev), 0.2));
        prev = next;
    }
    for (size_t i = 6; i + 1 < diffs.size(); ++i) {
        const double ratio = diffs[i + 1] / diffs[i];
        CHECK(ratio < 0.6);  // |lambda*^2| ~ 0.303
        CHECK(ratio > 0.1);
    }
}
