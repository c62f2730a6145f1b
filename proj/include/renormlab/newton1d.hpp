#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <vector>

#include "renormlab/pair1d.hpp"

namespace renormlab {

// Coefficient-space coordinates on the normalized slice. xi(0) = 1 and
// xi'(0) = 0 pin two xi coefficients; the criticality eta'(0) = 0 is a dense
// linear gauge in the Z-chart (eta is stored about z0), eliminated by solving
// it for the chart coefficient eta_1:
//   eta_1 = -sum_{k>=2} k eta_k (-z0)^{k-1}.
// Unknowns, interleaved by order: [eta_0, eta_2, xi_2, eta_3, xi_3, ...].
inline int slice_dim(int degree) { return 2 * degree - 1; }

inline cplx eta1_from_gauge(const Series1<cplx>& eta, const cplx& z0) {
    cplx acc = 0;
    cplx p = -z0;  // (-z0)^{k-1} for k = 2
    for (int k = 2; k <= eta.degree(); ++k) {
        acc += double(k) * eta[k] * p;
        p *= -z0;
    }
    return -acc;
}

struct NewtonResult {
    Pair1D<cplx> zstar;
    cplx lambda_star;
    double residual = 0;
    int iterations = 0;
};

struct NewtonOptions {
    double tol = 1e-11;
    int max_iters = 50;
    double fd_step = 1e-6;
    double slack = 20.0;
    // Newton acts on coefficient orders <= head_order; higher orders are
    // refreshed by Picard sweeps. The operator contracts high orders strongly
    // (each output order k carries a lambda^{k-1} rescale factor), while a
    // full-slice Newton solve lets finite-difference noise feed unbounded
    // junk into them.
    int head_order = 48;
    int tail_sweeps = 3;
};

namespace detail {

// almost-commuting defects as a 2-vector in the head coordinates
inline Eigen::Vector2cd defect_vec(const Pair1D<cplx>& z) {
    const auto [d0, d2] = commutator_defects(z);
    return {d0, d2};
}

inline Eigen::VectorXcd pack_head(const Pair1D<cplx>& z, int head) {
    Eigen::VectorXcd v(2 * head - 1);
    v(0) = z.eta[0];
    int at = 1;
    for (int k = 2; k <= head; ++k) {
        v(at++) = z.eta[k];
        v(at++) = z.xi[k];
    }
    return v;
}

inline void unpack_head(const Eigen::VectorXcd& v, int head, Pair1D<cplx>& z) {
    z.eta[0] = v(0);
    int at = 1;
    for (int k = 2; k <= head; ++k) {
        z.eta[k] = v(at++);
        z.xi[k] = v(at++);
    }
    z.xi[0] = 1.0;
    z.xi[1] = 0.0;
    z.eta[1] = eta1_from_gauge(z.eta, z.z0);
}

inline void refresh_tail(Pair1D<cplx>& z, int head, int sweeps, double slack) {
    for (int s = 0; s < sweeps; ++s) {
        const Pair1D<cplx> r = renormalize1d(z, slack);
        for (int k = head + 1; k <= z.eta.degree(); ++k) {
            z.eta[k] = r.eta[k];
            z.xi[k] = r.xi[k];
        }
        z.eta[1] = eta1_from_gauge(z.eta, z.z0);
    }
}

}  // namespace detail

// Gauss-Newton for R(zeta) = zeta restricted to the almost-commuting
// subvariety: the head system is augmented with the two defect equations
// d0(zeta) = d2(zeta) = 0. Without them, the critical slice carries strongly
// expanding transverse modes (the a.c. manifold has complex codimension 2
// there) and the truncated fixed point drifts off the manifold. Newton acts
// on the leading coefficient block; the strongly contracted tail is refreshed
// by Picard sweeps.
inline NewtonResult newton_fixed_point(const Pair1D<cplx>& seed, const NewtonOptions& opt = {}) {
    const int degree = seed.eta.degree();
    const int head = std::min(opt.head_order, degree);
    const int dim = 2 * head - 1;

    Pair1D<cplx> z = seed;
    auto full_residual = [&](const Pair1D<cplx>& p) {
        const auto d = detail::defect_vec(p);
        return pair_distance(renormalize1d(p, opt.slack), p) + d.norm();
    };

    double res = full_residual(z);
    NewtonResult out;
    for (int it = 0; it < opt.max_iters; ++it) {
        detail::refresh_tail(z, head, opt.tail_sweeps, opt.slack);
        res = full_residual(z);
        if (res < opt.tol) {
            out.zstar = z;
            out.lambda_star = z.lambda();
            out.residual = pair_distance(renormalize1d(z, opt.slack), z);
            out.iterations = it;
            return out;
        }

        const Eigen::VectorXcd v = detail::pack_head(z, head);
        auto head_G = [&](const Eigen::VectorXcd& u) {
            Pair1D<cplx> p = z;
            detail::unpack_head(u, head, p);
            Eigen::VectorXcd g(dim + 2);
            g.head(dim) = detail::pack_head(renormalize1d(p, opt.slack), head) - u;
            g.tail(2) = detail::defect_vec(p);
            return g;
        };
        const Eigen::VectorXcd G0 = head_G(v);
        Eigen::MatrixXcd J(dim + 2, dim);
        for (int j = 0; j < dim; ++j) {
            Eigen::VectorXcd vp = v;
            vp(j) += opt.fd_step;
            J.col(j) = (head_G(vp) - G0) / opt.fd_step;
        }
        const Eigen::VectorXcd step = J.colPivHouseholderQr().solve(G0);
        if (!step.allFinite())
            fail(ErrorKind::SingularJacobian, "Newton linear solve produced non-finite step");

        double scale = 1.0;
        bool accepted = false;
        for (int h = 0; h < 8; ++h) {
            Pair1D<cplx> trial = z;
            detail::unpack_head(v - scale * step, head, trial);
            const double tres = full_residual(trial);
            if (tres < res) {
                z = trial;
                res = tres;
                accepted = true;
                break;
            }
            scale *= 0.5;
        }
        if (!accepted)
            fail(ErrorKind::NoConvergence, "Newton stalled; residual " + std::to_string(res));
    }
    if (res < opt.tol) {
        out.zstar = z;
        out.lambda_star = z.lambda();
        out.residual = pair_distance(renormalize1d(z, opt.slack), z);
        out.iterations = opt.max_iters;
        return out;
    }
    fail(ErrorKind::NoConvergence, "Newton did not reach tolerance; residual " + std::to_string(res));
}

struct SpectrumReport {
    std::vector<cplx> eigenvalues;  // sorted by modulus, descending
    int expanding_count = 0;
    int matrix_dim = 0;
    double matrix_norm = 0;
};

// Dense finite-difference differential of R at zstar on the tangent space of
// the almost-commuting submanifold (the defect functionals d0, d2 cut two
// complex directions out of the leading dim slice coordinates; the paper's
// D R acts on that tangent). Coordinates are ordered
// [eta_0, eta_2, xi_2, eta_3, xi_3, ...]; the reported spectrum lives on the
// (dim - 2)-dimensional constrained tangent, matrix_dim records dim.
inline SpectrumReport differential_spectrum(const Pair1D<cplx>& zstar, int dim,
                                            double fd_step = 1e-6, double slack = 20.0) {
    const int degree = zstar.eta.degree();
    if (dim > slice_dim(degree)) fail(ErrorKind::Validation, "spectrum dimension exceeds slice");
    const int head = (dim + 2) / 2;  // orders covered by dim coordinates

    const Eigen::VectorXcd v = detail::pack_head(zstar, head);
    auto R_head = [&](const Eigen::VectorXcd& u) {
        Pair1D<cplx> p = zstar;
        detail::unpack_head(u, head, p);
        return detail::pack_head(renormalize1d(p, slack), head);
    };
    auto defects_at = [&](const Eigen::VectorXcd& u) {
        Pair1D<cplx> p = zstar;
        detail::unpack_head(u, head, p);
        return detail::defect_vec(p);
    };
    const Eigen::VectorXcd R0 = R_head(v);
    const Eigen::Vector2cd D0 = defects_at(v);
    Eigen::MatrixXcd M(dim, dim);
    Eigen::MatrixXcd D(2, dim);
    for (int j = 0; j < dim; ++j) {
        Eigen::VectorXcd vp = v;
        vp(j) += fd_step;
        M.col(j) = ((R_head(vp) - R0) / fd_step).head(dim);
        D.col(j) = (defects_at(vp) - D0) / fd_step;
    }

    // basis of ker(D): the last dim-2 columns of Q in the QR of D^H
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(D.adjoint());
    Eigen::MatrixXcd Q = qr.householderQ();
    const Eigen::MatrixXcd K = Q.rightCols(dim - 2);
    const Eigen::MatrixXcd Mac = K.adjoint() * M * K;

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(Mac, false);
    SpectrumReport rep;
    rep.matrix_dim = dim;
    rep.matrix_norm = Mac.norm();
    rep.eigenvalues.assign(es.eigenvalues().data(), es.eigenvalues().data() + (dim - 2));
    std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
              [](const cplx& a, const cplx& b) { return std::abs(a) > std::abs(b); });
    for (const cplx& ev : rep.eigenvalues)
        if (std::abs(ev) > 1.0) ++rep.expanding_count;
    return rep;
}

// Linearizer u_* of g_* conjugated to the origin: the limit of
// lambda_*^{-2n} g_*^n with g_*(1 + w) = eta_*^{-1}(lambda_*(1 + w)),
// normalized to u(0) = 0, u'(0) = 1. Lives on |w| < u_radius.
inline Series1<cplx> linearize_gstar(const Pair1D<cplx>& zstar, double tol = 1e-11,
                                     double u_radius = 0.25) {
    const cplx lam = zstar.lambda();
    const int deg = zstar.eta.degree();
    // eta(1 + w) - lambda as a series in w: shift the chart by 1 - z0
    Series1<cplx> shift = s1_affine<cplx>(cplx(1.0) - zstar.z0, 1.0, deg, u_radius);
    Series1<cplx> f = s1_compose(zstar.eta, shift, 1e12);
    f[0] -= lam;  // vanishes at w = 0
    Series1<cplx> w_of_v = s1_revert_about(f, cplx(0));
    Series1<cplx> g = s1_compose(w_of_v, s1_affine<cplx>(0.0, lam, deg, u_radius), 1e12);
    g[0] = 0.0;  // fixed point of the shifted map, exactly

    const cplx lam2_inv = 1.0 / (lam * lam);
    Series1<cplx> u = s1_identity<cplx>(deg, u_radius);
    double prev = 1e300;
    for (int n = 0; n < 400; ++n) {
        Series1<cplx> next = s1_scale(s1_compose(u, g, 1e12), lam2_inv);
        const double diff = s1_majorant(s1_sub(next, u), u_radius);
        u = next;
        if (diff < tol) {
            u[0] = 0.0;
            u = s1_scale(u, cplx(1.0) / u[1]);
            u.radius = u_radius;
            return u;
        }
        if (n > 40 && diff > 4 * prev)
            fail(ErrorKind::NoConvergence, "linearizer Cauchy differences diverging");
        prev = diff;
    }
    fail(ErrorKind::NoConvergence, "linearizer did not converge");
}

}  // namespace renormlab
