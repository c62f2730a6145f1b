#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "renormlab/errors.hpp"
#include "renormlab/scalar.hpp"

namespace renormlab {

// Truncated Taylor series about 0, coefficient of x^k at index k, with the
// radius of the disk the series is meant to represent the map on. The
// majorant norm sum |c_k| r^k is the computable stand-in for the sup norm.
template <class C>
struct Series1 {
    std::vector<C> c;
    double radius = 1.0;

    Series1() = default;
    Series1(int degree, double r) : c(static_cast<size_t>(degree) + 1, C(0)), radius(r) {}
    Series1(std::vector<C> coeffs, double r) : c(std::move(coeffs)), radius(r) {}

    int degree() const { return static_cast<int>(c.size()) - 1; }
    const C& operator[](int k) const { return c[static_cast<size_t>(k)]; }
    C& operator[](int k) { return c[static_cast<size_t>(k)]; }
};

template <class C>
Series1<C> s1_identity(int degree, double r) {
    Series1<C> f(degree, r);
    if (degree >= 1) f[1] = C(1);
    return f;
}

template <class C>
Series1<C> s1_affine(const C& a0, const C& a1, int degree, double r) {
    Series1<C> f(degree, r);
    f[0] = a0;
    if (degree >= 1) f[1] = a1;
    return f;
}

template <class C>
bool s1_finite(const Series1<C>& f) {
    for (const auto& z : f.c)
        if (!scalar_traits<C>::finite(z)) return false;
    return true;
}

template <class C>
C s1_eval(const Series1<C>& f, const C& x) {
    C acc(0);
    for (int k = f.degree(); k >= 0; --k) acc = acc * x + f[k];
    return acc;
}

template <class C>
C s1_eval_deriv(const Series1<C>& f, const C& x) {
    C acc(0);
    for (int k = f.degree(); k >= 1; --k) acc = acc * x + C(double(k)) * f[k];
    return acc;
}

// Majorant sum |c_k| r^k at evaluation radius r (defaults to the series' own).
template <class C>
double s1_majorant(const Series1<C>& f, double r = -1.0) {
    if (r < 0) r = f.radius;
    using R = typename scalar_traits<C>::real;
    R acc(0), p(1);
    for (int k = 0; k <= f.degree(); ++k) {
        acc += scalar_traits<C>::abs(f[k]) * p;
        p *= R(r);
    }
    return scalar_traits<C>::to_double(acc);
}

template <class C>
Series1<C> s1_truncate(const Series1<C>& f, int degree) {
    Series1<C> g(degree, f.radius);
    for (int k = 0; k <= std::min(degree, f.degree()); ++k) g[k] = f[k];
    return g;
}

template <class C>
Series1<C> s1_add(const Series1<C>& f, const Series1<C>& g) {
    Series1<C> h(std::max(f.degree(), g.degree()), std::min(f.radius, g.radius));
    for (int k = 0; k <= f.degree(); ++k) h[k] += f[k];
    for (int k = 0; k <= g.degree(); ++k) h[k] += g[k];
    return h;
}

template <class C>
Series1<C> s1_sub(const Series1<C>& f, const Series1<C>& g) {
    Series1<C> h(std::max(f.degree(), g.degree()), std::min(f.radius, g.radius));
    for (int k = 0; k <= f.degree(); ++k) h[k] += f[k];
    for (int k = 0; k <= g.degree(); ++k) h[k] -= g[k];
    return h;
}

template <class C>
Series1<C> s1_scale(const Series1<C>& f, const C& s) {
    Series1<C> h = f;
    for (auto& z : h.c) z *= s;
    return h;
}

// Truncated product; output degree caps at `degree` (default: max of inputs).
template <class C>
Series1<C> s1_mul(const Series1<C>& f, const Series1<C>& g, int degree = -1) {
    if (degree < 0) degree = std::max(f.degree(), g.degree());
    Series1<C> h(degree, std::min(f.radius, g.radius));
    const int nf = f.degree(), ng = g.degree();
    for (int i = 0; i <= std::min(nf, degree); ++i) {
        if (f[i] == C(0)) continue;
        const int top = std::min(ng, degree - i);
        for (int j = 0; j <= top; ++j) h[i + j] += f[i] * g[j];
    }
    return h;
}

// d/dx; lowers the degree by one.
template <class C>
Series1<C> s1_derivative(const Series1<C>& f) {
    const int n = std::max(0, f.degree() - 1);
    Series1<C> h(n, f.radius);
    for (int k = 1; k <= f.degree(); ++k) h[k - 1] = C(double(k)) * f[k];
    return h;
}

// f(lambda * x); exact coefficient scaling.
template <class C>
Series1<C> s1_rescale_arg(const Series1<C>& f, const C& lambda) {
    Series1<C> h = f;
    C p(1);
    for (int k = 0; k <= f.degree(); ++k) {
        h[k] = f[k] * p;
        p *= lambda;
    }
    return h;
}

// Composition f(g(x)) by Horner in the truncated polynomial ring. The result
// is truncated to f's degree and lives on g's domain. The precondition that
// g's values stay inside f's disk is enforced through the majorant of g.
template <class C>
Series1<C> s1_compose(const Series1<C>& f, const Series1<C>& g, double slack = 4.0) {
    const double mg = s1_majorant(g);
    if (mg > f.radius * (1.0 + slack))
        fail(ErrorKind::DomainEscape,
             "inner majorant " + std::to_string(mg) + " exceeds outer radius " +
                 std::to_string(f.radius) + " beyond slack");
    const int deg = f.degree();
    Series1<C> h(deg, g.radius);
    for (int k = deg; k >= 0; --k) {
        h = s1_mul(h, g, deg);
        h[0] += f[k];
    }
    return h;
}

// 1 / f, requires f(0) != 0. Newton iteration r <- r(2 - f r).
template <class C>
Series1<C> s1_recip(const Series1<C>& f) {
    if (abs_d(f[0]) < 1e-300) fail(ErrorKind::ZeroScaling, "reciprocal of series vanishing at 0");
    const int deg = f.degree();
    Series1<C> r(deg, f.radius);
    r[0] = C(1) / f[0];
    for (int m = 1; m < 2 * deg + 2; m *= 2) {
        Series1<C> fr = s1_mul(f, r, deg);
        Series1<C> two_minus(deg, f.radius);
        two_minus[0] = C(2);
        r = s1_mul(r, s1_sub(two_minus, fr), deg);
    }
    return r;
}

namespace detail {

// Walk the value path f(x) = v from v = f(start) to v = target by Newton
// continuation, staying on the inverse branch through `start`.
template <class C>
C branch_preimage(const Series1<C>& f, const C& start, const C& target, double deriv_tol) {
    C x = start;
    const C v0 = s1_eval(f, x);
    const int steps = 16;
    for (int s = 1; s <= steps; ++s) {
        const C v = v0 + (target - v0) * C(double(s) / steps);
        for (int it = 0; it < 60; ++it) {
            const C fx = s1_eval(f, x) - v;
            const C dfx = s1_eval_deriv(f, x);
            if (abs_d(dfx) <= deriv_tol)
                fail(ErrorKind::CriticalCenter, "inverse branch ran into the critical point");
            const C dx = fx / dfx;
            x -= dx;
            if (abs_d(dx) < scalar_traits<C>::eps() * 16 * (1 + abs_d(x))) break;
        }
    }
    return x;
}

}  // namespace detail

// Inverse series of f on the branch through `center`: returns g with
// g(f(center)) = center and f(g(x)) = x to truncation order. Newton on series
// composition seeded with the linear inverse at the branch's 0-preimage.
template <class C>
Series1<C> s1_revert_about(const Series1<C>& f, const C& center, double deriv_tol = 1e-10) {
    if (abs_d(s1_eval_deriv(f, center)) <= deriv_tol)
        fail(ErrorKind::CriticalCenter, "derivative at expansion center below deriv_tol");
    const C c0 = detail::branch_preimage(f, center, C(0), deriv_tol);
    const C d0 = s1_eval_deriv(f, c0);
    if (abs_d(d0) <= deriv_tol)
        fail(ErrorKind::CriticalCenter, "derivative at 0-preimage below deriv_tol");

    const int deg = f.degree();
    const Series1<C> id = s1_identity<C>(deg, f.radius);
    Series1<C> g(deg, f.radius);
    g[0] = c0;
    g[1] = C(1) / d0;
    const Series1<C> df = s1_derivative(f);
    int max_iters = 10;
    while ((1 << (max_iters - 8)) < deg + 1) ++max_iters;
    for (int it = 0; it < max_iters; ++it) {
        Series1<C> res = s1_sub(s1_compose(f, g, 1e9), id);
        Series1<C> corr = s1_mul(res, s1_recip(s1_truncate(s1_compose(df, g, 1e9), deg)), deg);
        g = s1_sub(g, corr);
        double sz = 0, gs = 0;
        for (const auto& z : corr.c) sz = std::max(sz, abs_d(z));
        for (const auto& z : g.c) gs = std::max(gs, abs_d(z));
        if (sz < scalar_traits<C>::eps() * 64 * (1 + gs)) break;
    }
    return g;
}

}  // namespace renormlab
