#pragma once

#include <algorithm>
#include <cassert>
#include <vector>

#include "renormlab/series1.hpp"

namespace renormlab {

// Truncated Taylor series about (0,0): coeff(j,k) multiplies x^j y^k.
// Intended domain is the polydisk |x| < rx, |y| < ry.
template <class C>
struct Series2 {
    std::vector<C> c;
    int nx = 0, ny = 0;
    double rx = 1.0, ry = 1.0;

    Series2() = default;
    Series2(int degx, int degy, double radx, double rady)
        : c(static_cast<size_t>(degx + 1) * (degy + 1), C(0)), nx(degx), ny(degy), rx(radx), ry(rady) {}

    const C& at(int j, int k) const { return c[static_cast<size_t>(j) * (ny + 1) + k]; }
    C& at(int j, int k) { return c[static_cast<size_t>(j) * (ny + 1) + k]; }
};

template <class C>
Series2<C> s2_const(const C& v, int nx, int ny, double rx, double ry) {
    Series2<C> f(nx, ny, rx, ry);
    f.at(0, 0) = v;
    return f;
}

template <class C>
Series2<C> s2_coord_x(int nx, int ny, double rx, double ry) {
    Series2<C> f(nx, ny, rx, ry);
    f.at(1, 0) = C(1);
    return f;
}

template <class C>
Series2<C> s2_coord_y(int nx, int ny, double rx, double ry) {
    Series2<C> f(nx, ny, rx, ry);
    f.at(0, 1) = C(1);
    return f;
}

template <class C>
bool s2_finite(const Series2<C>& f) {
    for (const auto& z : f.c)
        if (!scalar_traits<C>::finite(z)) return false;
    return true;
}

template <class C>
C s2_eval(const Series2<C>& f, const C& x, const C& y) {
    C acc(0);
    for (int j = f.nx; j >= 0; --j) {
        C row(0);
        for (int k = f.ny; k >= 0; --k) row = row * y + f.at(j, k);
        acc = acc * x + row;
    }
    return acc;
}

template <class C>
double s2_majorant(const Series2<C>& f, double rx = -1.0, double ry = -1.0) {
    if (rx < 0) rx = f.rx;
    if (ry < 0) ry = f.ry;
    using R = typename scalar_traits<C>::real;
    R acc(0), px(1);
    for (int j = 0; j <= f.nx; ++j) {
        R py(1);
        for (int k = 0; k <= f.ny; ++k) {
            acc += scalar_traits<C>::abs(f.at(j, k)) * px * py;
            py *= R(ry);
        }
        px *= R(rx);
    }
    return scalar_traits<C>::to_double(acc);
}

template <class C>
Series2<C> s2_add(const Series2<C>& f, const Series2<C>& g) {
    Series2<C> h(std::max(f.nx, g.nx), std::max(f.ny, g.ny), std::min(f.rx, g.rx), std::min(f.ry, g.ry));
    for (int j = 0; j <= f.nx; ++j)
        for (int k = 0; k <= f.ny; ++k) h.at(j, k) += f.at(j, k);
    for (int j = 0; j <= g.nx; ++j)
        for (int k = 0; k <= g.ny; ++k) h.at(j, k) += g.at(j, k);
    return h;
}

template <class C>
Series2<C> s2_sub(const Series2<C>& f, const Series2<C>& g) {
    Series2<C> h(std::max(f.nx, g.nx), std::max(f.ny, g.ny), std::min(f.rx, g.rx), std::min(f.ry, g.ry));
    for (int j = 0; j <= f.nx; ++j)
        for (int k = 0; k <= f.ny; ++k) h.at(j, k) += f.at(j, k);
    for (int j = 0; j <= g.nx; ++j)
        for (int k = 0; k <= g.ny; ++k) h.at(j, k) -= g.at(j, k);
    return h;
}

template <class C>
Series2<C> s2_scale(const Series2<C>& f, const C& s) {
    Series2<C> h = f;
    for (auto& z : h.c) z *= s;
    return h;
}

template <class C>
Series2<C> s2_mul(const Series2<C>& f, const Series2<C>& g, int nx = -1, int ny = -1) {
    if (nx < 0) nx = std::max(f.nx, g.nx);
    if (ny < 0) ny = std::max(f.ny, g.ny);
    Series2<C> h(nx, ny, std::min(f.rx, g.rx), std::min(f.ry, g.ry));
    for (int j1 = 0; j1 <= std::min(f.nx, nx); ++j1)
        for (int k1 = 0; k1 <= std::min(f.ny, ny); ++k1) {
            const C& a = f.at(j1, k1);
            if (a == C(0)) continue;
            const int jt = std::min(g.nx, nx - j1), kt = std::min(g.ny, ny - k1);
            for (int j2 = 0; j2 <= jt; ++j2) {
                const C* grow = &g.at(j2, 0);
                C* hrow = &h.at(j1 + j2, k1);
                for (int k2 = 0; k2 <= kt; ++k2) hrow[k2] += a * grow[k2];
            }
        }
    return h;
}

template <class C>
Series2<C> s2_partial_x(const Series2<C>& f) {
    Series2<C> h(std::max(0, f.nx - 1), f.ny, f.rx, f.ry);
    for (int j = 1; j <= f.nx; ++j)
        for (int k = 0; k <= f.ny; ++k) h.at(j - 1, k) = C(double(j)) * f.at(j, k);
    return h;
}

template <class C>
Series2<C> s2_partial_y(const Series2<C>& f) {
    Series2<C> h(f.nx, std::max(0, f.ny - 1), f.rx, f.ry);
    for (int j = 0; j <= f.nx; ++j)
        for (int k = 1; k <= f.ny; ++k) h.at(j, k - 1) = C(double(k)) * f.at(j, k);
    return h;
}

// f(x, 0) as a one-variable series.
template <class C>
Series1<C> s2_slice_y0(const Series2<C>& f) {
    Series1<C> h(f.nx, f.rx);
    for (int j = 0; j <= f.nx; ++j) h[j] = f.at(j, 0);
    return h;
}

// Lift of a one-variable series: no y-dependence.
template <class C>
Series2<C> s2_lift(const Series1<C>& f, int ny, double ry) {
    Series2<C> h(f.degree(), ny, f.radius, ry);
    for (int j = 0; j <= f.degree(); ++j) h.at(j, 0) = f[j];
    return h;
}

// f(lambda x, lambda y) and f(x, lambda y); exact coefficient scalings.
template <class C>
Series2<C> s2_rescale_both(const Series2<C>& f, const C& lambda) {
    Series2<C> h = f;
    C pj(1);
    for (int j = 0; j <= f.nx; ++j) {
        C p = pj;
        for (int k = 0; k <= f.ny; ++k) {
            h.at(j, k) = f.at(j, k) * p;
            p *= lambda;
        }
        pj *= lambda;
    }
    return h;
}

template <class C>
Series2<C> s2_rescale_y(const Series2<C>& f, const C& lambda) {
    Series2<C> h = f;
    for (int j = 0; j <= f.nx; ++j) {
        C p(1);
        for (int k = 0; k <= f.ny; ++k) {
            h.at(j, k) = f.at(j, k) * p;
            p *= lambda;
        }
    }
    return h;
}

namespace detail {
// h <- h * (c + lambda x), truncated to h's degrees.
template <class C>
void s2_mul_affine_x_inplace(Series2<C>& h, const C& c, const C& lambda) {
    for (int j = h.nx; j >= 0; --j)
        for (int k = 0; k <= h.ny; ++k) {
            C v = h.at(j, k) * c;
            if (j > 0) v += h.at(j - 1, k) * lambda;
            h.at(j, k) = v;
        }
}
}  // namespace detail

// f(c + lambda x, lambda y): the T-then-s argument change used by rescaled
// recenterings. Exact in the y-direction, Horner in the x-direction.
template <class C>
Series2<C> s2_affine_arg(const Series2<C>& f, const C& c, const C& lambda) {
    Series2<C> fy = s2_rescale_y(f, lambda);
    Series2<C> h(f.nx, f.ny, f.rx, f.ry);
    for (int j = f.nx; j >= 0; --j) {
        detail::s2_mul_affine_x_inplace(h, c, lambda);
        for (int k = 0; k <= f.ny; ++k) h.at(0, k) += fy.at(j, k);
    }
    return h;
}

// Composition f(g(x,y), y): Horner in the first slot.
template <class C>
Series2<C> s2_compose_x(const Series2<C>& f, const Series2<C>& g, double slack = 4.0) {
    const double mg = s2_majorant(g);
    if (mg > f.rx * (1.0 + slack))
        fail(ErrorKind::DomainEscape, "compose_x: inner majorant " + std::to_string(mg) +
                                          " exceeds outer x-radius " + std::to_string(f.rx));
    Series2<C> h(g.nx, g.ny, g.rx, g.ry);
    for (int j = f.nx; j >= 0; --j) {
        h = s2_mul(h, g, g.nx, g.ny);
        for (int k = 0; k <= f.ny && k <= h.ny; ++k) h.at(0, k) += f.at(j, k);
    }
    return h;
}

// Composition f(x, g(x,y)): Horner in the second slot.
template <class C>
Series2<C> s2_compose_y(const Series2<C>& f, const Series2<C>& g, double slack = 4.0) {
    const double mg = s2_majorant(g);
    if (mg > f.ry * (1.0 + slack))
        fail(ErrorKind::DomainEscape, "compose_y: inner majorant " + std::to_string(mg) +
                                          " exceeds outer y-radius " + std::to_string(f.ry));
    Series2<C> h(g.nx, g.ny, g.rx, g.ry);
    for (int k = f.ny; k >= 0; --k) {
        h = s2_mul(h, g, g.nx, g.ny);
        for (int j = 0; j <= f.nx && j <= h.nx; ++j) h.at(j, 0) += f.at(j, k);
    }
    return h;
}

// General composition f(g1(x,y), g2(x,y)). Powers of g2 are cached so the
// cost is (ny + nx) series products.
template <class C>
Series2<C> s2_compose_xy(const Series2<C>& f, const Series2<C>& g1, const Series2<C>& g2,
                         double slack = 4.0) {
    const double m1 = s2_majorant(g1), m2 = s2_majorant(g2);
    if (m1 > f.rx * (1.0 + slack) || m2 > f.ry * (1.0 + slack))
        fail(ErrorKind::DomainEscape, "compose_xy: inner majorants (" + std::to_string(m1) + ", " +
                                          std::to_string(m2) + ") exceed outer radii (" +
                                          std::to_string(f.rx) + ", " + std::to_string(f.ry) + ")");
    const int nx = g1.nx, ny = g1.ny;
    std::vector<Series2<C>> pow2;
    pow2.reserve(f.ny + 1);
    pow2.push_back(s2_const(C(1), nx, ny, g1.rx, g1.ry));
    for (int k = 1; k <= f.ny; ++k) pow2.push_back(s2_mul(pow2.back(), g2, nx, ny));

    Series2<C> h(nx, ny, g1.rx, g1.ry);
    for (int j = f.nx; j >= 0; --j) {
        h = s2_mul(h, g1, nx, ny);
        for (int k = 0; k <= f.ny; ++k) {
            const C& a = f.at(j, k);
            if (a == C(0)) continue;
            const auto& p = pow2[static_cast<size_t>(k)];
            for (size_t i = 0; i < h.c.size(); ++i) h.c[i] += a * p.c[i];
        }
    }
    return h;
}

// f(g1(x,y), s x): the second slot receives the (scaled) x coordinate.
template <class C>
Series2<C> s2_compose_x_ysubst(const Series2<C>& f, const Series2<C>& g1, const C& s = C(1),
                               double slack = 4.0) {
    const double m1 = s2_majorant(g1);
    if (m1 > f.rx * (1.0 + slack))
        fail(ErrorKind::DomainEscape, "compose: inner majorant exceeds outer x-radius");
    const int nx = g1.nx, ny = g1.ny;
    Series2<C> h(nx, ny, g1.rx, g1.ry);
    for (int j = f.nx; j >= 0; --j) {
        h = s2_mul(h, g1, nx, ny);
        // row j of f contributes sum_k f_{jk} (s x)^k
        C p(1);
        for (int k = 0; k <= std::min(f.ny, nx); ++k) {
            h.at(k, 0) += f.at(j, k) * p;
            p *= s;
        }
    }
    return h;
}

// f(c + s x, y): affine substitution in the x slot only.
template <class C>
Series2<C> s2_affine_x(const Series2<C>& f, const C& c, const C& s) {
    Series2<C> h(f.nx, f.ny, f.rx, f.ry);
    for (int j = f.nx; j >= 0; --j) {
        detail::s2_mul_affine_x_inplace(h, c, s);
        for (int k = 0; k <= f.ny; ++k) h.at(0, k) += f.at(j, k);
    }
    return h;
}

// f(x, c + s y): affine substitution in the y slot only.
template <class C>
Series2<C> s2_affine_y(const Series2<C>& f, const C& c, const C& s) {
    Series2<C> h(f.nx, f.ny, f.rx, f.ry);
    for (int k = f.ny; k >= 0; --k) {
        // h <- h * (c + s y) + column k of f
        for (int j = 0; j <= h.nx; ++j)
            for (int kk = h.ny; kk >= 0; --kk) {
                C v = h.at(j, kk) * c;
                if (kk > 0) v += h.at(j, kk - 1) * s;
                h.at(j, kk) = v;
            }
        for (int j = 0; j <= f.nx; ++j) h.at(j, 0) += f.at(j, k);
    }
    return h;
}

// f(lambda x, y): exact coefficient scaling in the x direction.
template <class C>
Series2<C> s2_rescale_x(const Series2<C>& f, const C& lambda) {
    Series2<C> h = f;
    C p(1);
    for (int j = 0; j <= f.nx; ++j) {
        for (int k = 0; k <= f.ny; ++k) h.at(j, k) = f.at(j, k) * p;
        p *= lambda;
    }
    return h;
}

// f(g1(x), g2(x)) restricted to one variable (the y = 0 slice machinery).
template <class C>
Series1<C> s2_compose_to_1d(const Series2<C>& f, const Series1<C>& g1, const Series1<C>& g2) {
    const int deg = g1.degree();
    std::vector<Series1<C>> pow2;
    pow2.reserve(f.ny + 1);
    Series1<C> one(deg, g1.radius);
    one[0] = C(1);
    pow2.push_back(one);
    for (int k = 1; k <= f.ny; ++k) pow2.push_back(s1_mul(pow2.back(), g2, deg));

    Series1<C> h(deg, g1.radius);
    for (int j = f.nx; j >= 0; --j) {
        h = s1_mul(h, g1, deg);
        for (int k = 0; k <= f.ny; ++k) {
            const C& a = f.at(j, k);
            if (a == C(0)) continue;
            for (int i = 0; i <= deg; ++i) h[i] += a * pow2[static_cast<size_t>(k)][i];
        }
    }
    return h;
}

template <class C>
Series2<C> s2_recip(const Series2<C>& f) {
    if (abs_d(f.at(0, 0)) < 1e-300)
        fail(ErrorKind::ZeroScaling, "reciprocal of series vanishing at origin");
    Series2<C> r(f.nx, f.ny, f.rx, f.ry);
    r.at(0, 0) = C(1) / f.at(0, 0);
    const int n = std::max(f.nx, f.ny);
    for (int m = 1; m < 2 * n + 2; m *= 2) {
        Series2<C> fr = s2_mul(f, r, f.nx, f.ny);
        Series2<C> two = s2_const(C(2), f.nx, f.ny, f.rx, f.ry);
        r = s2_mul(r, s2_sub(two, fr), f.nx, f.ny);
    }
    return r;
}

// Inverse of the family x -> a(x, y) in its first slot: returns q with
// a(q(X, y), y) = X to truncation order, on the branch through the real
// anchor point p0 (i.e. q(a(p0, 0), 0) = p0).
template <class C>
Series2<C> s2_revert_x(const Series2<C>& a, const C& p0, double deriv_tol = 1e-10) {
    const Series1<C> a0 = s2_slice_y0(a);
    if (abs_d(s1_eval_deriv(a0, p0)) <= deriv_tol)
        fail(ErrorKind::CriticalCenter, "x-derivative at branch anchor below deriv_tol");
    Series1<C> q0 = s1_revert_about(a0, p0, deriv_tol);
    Series2<C> q = s2_lift(q0, a.ny, a.ry);
    q.rx = a.rx;

    const Series2<C> ax = s2_partial_x(a);
    const Series2<C> X = s2_coord_x<C>(a.nx, a.ny, a.rx, a.ry);
    int max_iters = 6;
    while ((1 << (max_iters - 4)) < a.ny + 1) ++max_iters;
    for (int it = 0; it < max_iters + 2; ++it) {
        Series2<C> res = s2_sub(s2_compose_x(a, q, 1e9), X);
        Series2<C> corr = s2_mul(res, s2_recip(s2_compose_x(ax, q, 1e9)), a.nx, a.ny);
        q = s2_sub(q, corr);
        double sz = 0, qs = 0;
        for (const auto& z : corr.c) sz = std::max(sz, abs_d(z));
        for (const auto& z : q.c) qs = std::max(qs, abs_d(z));
        if (sz < scalar_traits<C>::eps() * 64 * (1 + qs)) break;
    }
    return q;
}

}  // namespace renormlab
