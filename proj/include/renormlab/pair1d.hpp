#pragma once

#include <utility>

#include "renormlab/config.hpp"
#include "renormlab/goldenrot.hpp"
#include "renormlab/series1.hpp"

namespace renormlab {

// Almost-commuting critical pair zeta = (eta, xi) with xi(0) = 1 and simple
// critical points at 0.
//
// The domains are Z = D(z0, eta.radius) and W = D(0, xi.radius): eta's series
// lives in the chart variable u = x - z0, xi's in x itself. The off-center
// Z-chart matters: the fixed point eta* has singularities at ~1.003 e^{+-0.528i}
// (the continuation of the boundary arc past the critical value), so a disk
// centered between 0 and 1 on the interior side is the only placement from
// which both eta(0) and eta(1) are recoverable at full accuracy.
template <class C>
struct Pair1D {
    Series1<C> eta;
    Series1<C> xi;
    C z0 = C(0);

    C eta_at(const C& x) const { return s1_eval(eta, x - z0); }
    C eta_deriv_at(const C& x) const { return s1_eval_deriv(eta, x - z0); }
    C xi_at(const C& x) const { return s1_eval(xi, x); }
    C xi_deriv_at(const C& x) const { return s1_eval_deriv(xi, x); }
    // lambda_zeta = eta(xi(0)) = eta(1)
    C lambda() const { return s1_eval(eta, C(1) - z0); }
};

// c = (1 + mu nu)(mu/2 + nu/2) - (mu/2 + nu/2)^2.
inline cplx siegel_c(const cplx& mu, const cplx& nu) {
    const cplx m = mu / 2.0 + nu / 2.0;
    return (1.0 + mu * nu) * m - m * m;
}

namespace detail {
// (z0 + u)^2 and (z0 + u)^4 coefficient helpers for the quadratic pair
template <class C>
void add_shifted_pow2(Series1<C>& f, const C& z0, const C& coef) {
    f[0] += coef * z0 * z0;
    if (f.degree() >= 1) f[1] += C(2) * coef * z0;
    if (f.degree() >= 2) f[2] += coef;
}
template <class C>
void add_shifted_pow4(Series1<C>& f, const C& z0, const C& coef) {
    const C z2 = z0 * z0;
    f[0] += coef * z2 * z2;
    if (f.degree() >= 1) f[1] += C(4) * coef * z2 * z0;
    if (f.degree() >= 2) f[2] += C(6) * coef * z2;
    if (f.degree() >= 3) f[3] += C(4) * coef * z0;
    if (f.degree() >= 4) f[4] += coef;
}
}  // namespace detail

// The quadratic polynomial f_c as the rescaled pair
// (c^{-1} f_c^2(cx), c^{-1} f_c(cx)), in the Z-chart about z0.
template <class C>
Pair1D<C> quad_pair(const C& c, int degree, double r_z, double r_w, const C& z0 = C(0)) {
    if (abs_d(c) < 1e-12) fail(ErrorKind::ZeroScaling, "quad_pair at c = 0");
    Pair1D<C> z;
    z.z0 = z0;
    z.xi = Series1<C>(degree, r_w);
    z.xi[0] = C(1);
    if (degree >= 2) z.xi[2] = c;

    // eta(x) = c^3 x^4 + 2 c^2 x^2 + (c + 1), expanded about z0
    z.eta = Series1<C>(degree, r_z);
    z.eta[0] = c + C(1);
    detail::add_shifted_pow2(z.eta, z0, C(2) * c * c);
    detail::add_shifted_pow4(z.eta, z0, c * c * c);
    return z;
}

// R^n(zeta_{f_c}) computed through the dynamics of f_c itself: in the chart
// x -> s x with s = f_c^{q_{2n+1}}(0), iterates obey W <- W^2 + c, whose
// truncated coefficients are exact because the outer map is polynomial. This
// reaches deep renormalization levels without operator-iteration noise and
// serves as the Newton warmup.
template <class C>
Pair1D<C> quad_renorm_orbit(const C& c, int n, int degree, double r_z, double r_w,
                            const C& z0 = C(0)) {
    if (abs_d(c) < 1e-12) fail(ErrorKind::ZeroScaling, "quad_renorm_orbit at c = 0");
    const std::int64_t q_lo = fibonacci_q(2 * n + 1), q_hi = fibonacci_q(2 * n + 2);
    C s = C(0);
    for (std::int64_t m = 0; m < q_lo; ++m) s = s * s + c;
    if (abs_d(s) < 1e-12) fail(ErrorKind::ZeroScaling, "closest-return scale vanishes");
    const C inv = C(1) / s;

    Pair1D<C> z;
    z.z0 = z0;
    {
        Series1<C> w(degree, r_z);  // f^m(s(z0 + u)) / s
        w[0] = s * z0;
        w[1] = s;
        for (std::int64_t m = 1; m <= q_hi; ++m) {
            w = s1_mul(w, w, degree);
            w[0] += c;
        }
        z.eta = s1_scale(w, inv);
        z.eta.radius = r_z;
    }
    {
        Series1<C> w(degree, r_w);  // f^m(s u) / s
        w[1] = s;
        for (std::int64_t m = 1; m <= q_lo; ++m) {
            w = s1_mul(w, w, degree);
            w[0] += c;
        }
        z.xi = s1_scale(w, inv);
        z.xi.radius = r_w;
        z.xi[0] = C(1);
    }
    return z;
}

// 0th and 2nd derivatives of eta xi - xi eta at 0, via the chain rule at the
// normalized points (xi(0) = 1 exactly, xi'(0) = 0 exactly):
//   d0 = eta(1) - xi(eta(0))
//   d2 = eta'(1) xi''(0) - xi''(eta(0)) eta'(0)^2 - xi'(eta(0)) eta''(0)
template <class C>
std::pair<C, C> commutator_defects(const Pair1D<C>& z) {
    const C eta0 = z.eta_at(C(0));
    const C d0 = z.lambda() - z.xi_at(eta0);

    const C xi_pp0 = z.xi.degree() >= 2 ? C(2) * z.xi[2] : C(0);
    const C eta_p0 = z.eta_deriv_at(C(0));
    const C eta_pp0 = s1_eval(s1_derivative(s1_derivative(z.eta)), -z.z0);
    const C xi_pp_at = s1_eval(s1_derivative(s1_derivative(z.xi)), eta0);
    const C d2 = z.eta_deriv_at(C(1)) * xi_pp0 - xi_pp_at * eta_p0 * eta_p0 -
                 z.xi_deriv_at(eta0) * eta_pp0;
    return {d0, d2};
}

// R(zeta) = Lambda((eta xi eta, eta xi)), computed chart-aware:
//   p2 = eta(xi(u) - z0) on W, lambda = p2(0),
//   p1 = eta(xi(eta(.)) - z0) on the contracted chart lambda Z,
//   outputs rescaled back onto the standard charts.
template <class C>
Pair1D<C> renormalize1d(const Pair1D<C>& z, double slack = 4.0) {
    const int deg = z.eta.degree();
    const double r_z = z.eta.radius, r_w = z.xi.radius;

    Series1<C> xi_shift = z.xi;
    xi_shift[0] -= z.z0;
    Series1<C> p2 = s1_compose(z.eta, xi_shift, slack);  // (eta xi)(u) on W
    const C lam = p2[0];
    if (abs_d(lam) < 1e-12) fail(ErrorKind::ZeroScaling, "renormalize1d: lambda vanishes");

    // inner eta in the output chart: eta(lambda (z0 + u)) as a series in u
    Series1<C> eta_inner = s1_compose(z.eta, s1_affine<C>((lam - C(1)) * z.z0, lam, deg, r_z), slack);
    Series1<C> q = s1_compose(z.xi, eta_inner, slack);  // xi(eta(lambda(z0 + u)))
    q[0] -= z.z0;
    Series1<C> p1 = s1_compose(z.eta, q, slack);  // eta(xi(eta(lambda(z0 + u))))

    const C inv = C(1) / lam;
    Pair1D<C> out;
    out.z0 = z.z0;
    out.eta = s1_scale(p1, inv);
    out.eta.radius = r_z;
    out.xi = s1_scale(s1_rescale_arg(p2, lam), inv);
    out.xi.radius = r_w;
    out.xi[0] = C(1);  // equals lam/lam; pin exactly
    return out;
}

// Pair distance in the majorant norm, (maj(d eta) + maj(d xi)) / 2.
template <class C>
double pair_distance(const Pair1D<C>& a, const Pair1D<C>& b) {
    return 0.5 * (s1_majorant(s1_sub(a.eta, b.eta)) + s1_majorant(s1_sub(a.xi, b.xi)));
}

template <class C>
double pair_norm(const Pair1D<C>& z) {
    return 0.5 * (s1_majorant(z.eta) + s1_majorant(z.xi));
}

// Critical-pair and almost-commuting invariants, as a validation gate for
// constructed or deserialized pairs.
template <class C>
void validate_pair(const Pair1D<C>& z, double defect_tol, double tol = 1e-10) {
    if (!s1_finite(z.eta) || !s1_finite(z.xi))
        fail(ErrorKind::Validation, "pair has non-finite coefficients");
    if (abs_d(z.xi[0] - C(1)) > tol) fail(ErrorKind::Validation, "xi(0) != 1");
    if (abs_d(z.eta_deriv_at(C(0))) > tol) fail(ErrorKind::Validation, "eta'(0) != 0");
    if (z.xi.degree() >= 1 && abs_d(z.xi[1]) > tol) fail(ErrorKind::Validation, "xi'(0) != 0");
    if (abs_d(s1_eval(s1_derivative(s1_derivative(z.eta)), -z.z0)) < tol)
        fail(ErrorKind::Validation, "eta''(0) vanishes");
    if (z.xi.degree() >= 2 && abs_d(z.xi[2]) < tol) fail(ErrorKind::Validation, "xi''(0) vanishes");
    const auto [d0, d2] = commutator_defects(z);
    if (abs_d(d0) > defect_tol || abs_d(d2) > defect_tol)
        fail(ErrorKind::Validation, "almost-commuting defects exceed tolerance");
}

}  // namespace renormlab
