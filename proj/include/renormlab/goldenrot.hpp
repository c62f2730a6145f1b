#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "renormlab/errors.hpp"
#include "renormlab/scalar.hpp"

namespace renormlab {

// q_0 = 1, q_1 = 1, q_{n+1} = q_n + q_{n-1}.
inline std::int64_t fibonacci_q(int n) {
    if (n < 0) fail(ErrorKind::Validation, "fibonacci_q: negative index");
    if (n > 90) fail(ErrorKind::Validation, "fibonacci_q: index above overflow guard (90)");
    std::int64_t a = 1, b = 1;
    for (int i = 1; i <= n; ++i) {
        std::int64_t c = a + b;
        a = b;
        b = c;
    }
    return n == 0 ? 1 : a;
}

// Short/long interval lengths (s_n, t_n) of the rigid golden rotation.
struct RotationState {
    double s = 0;
    double t = 0;
    int level = 0;
};

inline RotationState initial_rotation_state() { return {theta_star<double>(), 1.0, 0}; }

// (s, t) -> (2s - t, t - s); the golden ratio s/t is preserved.
inline RotationState prerenorm_rotation(const RotationState& r) {
    const double s = 2 * r.s - r.t;
    const double t = r.t - r.s;
    if (s <= 0 || t <= 0)
        fail(ErrorKind::NonPositiveLength, "rotation lengths left the golden cone at level " +
                                               std::to_string(r.level + 1));
    return {s, t, r.level + 1};
}

enum class WordKind { J, I };

// Admissible tuple (alpha_{n-1}, ..., alpha_0); digits stored in that order.
struct Word {
    std::vector<int> digits;
    WordKind kind = WordKind::J;

    int level() const { return static_cast<int>(digits.size()); }
    // digit alpha_k acting at renormalization level k
    int alpha(int k) const { return digits[digits.size() - 1 - static_cast<size_t>(k)]; }

    std::string str() const {
        std::string s;
        for (int d : digits) s += static_cast<char>('0' + d);
        return s;
    }

    bool operator==(const Word& o) const { return kind == o.kind && digits == o.digits; }
    bool operator<(const Word& o) const { return digits < o.digits; }
};

// All admissible words of level n, lexicographically ordered. A digit is
// restricted to {0,1} after a 2, and after a restricted 1.
inline std::vector<Word> words(int n, WordKind kind) {
    if (n < 0) fail(ErrorKind::Validation, "words: negative level");
    std::vector<Word> out;
    if (n == 0) {
        out.push_back(Word{{0}, kind});
        return out;
    }
    std::vector<int> digits(static_cast<size_t>(n), 0);
    std::function<void(int, bool)> rec = [&](int i, bool restricted) {
        const int top = restricted ? 1 : 2;
        for (int d = 0; d <= top; ++d) {
            digits[static_cast<size_t>(i)] = d;
            const bool next_restricted = (d == 2) || (restricted && d == 1);
            if (i + 1 == n)
                out.push_back(Word{digits, kind});
            else
                rec(i + 1, next_restricted);
        }
    };
    rec(0, kind == WordKind::I);
    return out;
}

enum class IntervalKind { P, Q };

struct Interval {
    double left = 0;
    double right = 0;
    IntervalKind kind = IntervalKind::P;
    Word word;
};

struct Partition {
    int level = 0;
    std::vector<Interval> intervals;  // ordered by left endpoint
};

namespace detail {
inline std::vector<double> s_lengths(int n) {
    // s_k = theta_*^{2k+1}
    const double th = theta_star<double>();
    std::vector<double> s(static_cast<size_t>(n) + 1);
    double v = th;
    for (int k = 0; k <= n; ++k) {
        s[static_cast<size_t>(k)] = v;
        v *= th * th;
    }
    return s;
}
}  // namespace detail

// Translation amount of the rigid composite S_0^{a_0} ... S_{n-1}^{a_{n-1}}.
inline double rigid_translation(const Word& w) {
    const auto s = detail::s_lengths(std::max(1, w.level()));
    double tr = 0;
    for (int k = 0; k < w.level(); ++k) tr -= w.alpha(k) * s[static_cast<size_t>(k)];
    return tr;
}

// The n-th dynamical partition of [-theta_*, 1]: affine images of J_n / I_n
// under the rigid words, P-intervals of length t_n and Q-intervals of s_n.
inline Partition partition(int n) {
    if (n < 0) fail(ErrorKind::Validation, "partition: negative level");
    const double th = theta_star<double>();
    // t_n = theta_*^{2n}, s_n = theta_*^{2n+1}
    double tn = 1.0;
    for (int k = 0; k < n; ++k) tn *= th * th;
    const double sn = tn * th;

    Partition part;
    part.level = n;
    if (n == 0) {
        part.intervals.push_back({-th, 0.0, IntervalKind::Q, Word{{0}, WordKind::I}});
        part.intervals.push_back({0.0, 1.0, IntervalKind::P, Word{{0}, WordKind::J}});
        return part;
    }
    for (const Word& w : words(n, WordKind::J)) {
        const double tr = rigid_translation(w);
        part.intervals.push_back({1.0 - tn + tr, 1.0 + tr, IntervalKind::P, w});
    }
    for (const Word& w : words(n, WordKind::I)) {
        const double tr = rigid_translation(w);
        part.intervals.push_back({1.0 - tn - sn + tr, 1.0 - tn + tr, IntervalKind::Q, w});
    }
    std::sort(part.intervals.begin(), part.intervals.end(),
              [](const Interval& a, const Interval& b) { return a.left < b.left; });
    return part;
}

// True iff level-n intervals split into [P,Q,P] (for P) and [P,Q] (for Q)
// at level n+1, up to endpoint tolerance.
inline bool refine_check(int n, double tol = 1e-12) {
    const Partition coarse = partition(n);
    const Partition fine = partition(n + 1);
    size_t i = 0;
    for (const Interval& u : coarse.intervals) {
        std::vector<IntervalKind> kinds;
        if (i >= fine.intervals.size() || std::abs(fine.intervals[i].left - u.left) > tol) return false;
        double cursor = u.left;
        while (i < fine.intervals.size() && fine.intervals[i].right <= u.right + tol) {
            if (std::abs(fine.intervals[i].left - cursor) > tol) return false;
            cursor = fine.intervals[i].right;
            kinds.push_back(fine.intervals[i].kind);
            ++i;
        }
        if (std::abs(cursor - u.right) > tol) return false;
        const std::vector<IntervalKind> p_pattern{IntervalKind::P, IntervalKind::Q, IntervalKind::P};
        const std::vector<IntervalKind> q_pattern{IntervalKind::P, IntervalKind::Q};
        if (u.kind == IntervalKind::P && kinds != p_pattern) return false;
        if (u.kind == IntervalKind::Q && kinds != q_pattern) return false;
    }
    return i == fine.intervals.size();
}

struct EquidistResult {
    cplx qavg;
    cplx favg;
    double bound = 0;
};

namespace detail {

// 8- and 16-point Gauss-Legendre nodes/weights on [-1, 1] (positive half).
inline const double gl8_x[4] = {0.1834346424956498, 0.5255324099163290, 0.7966664774136267,
                                0.9602898564975363};
inline const double gl8_w[4] = {0.3626837833783620, 0.3137066458778873, 0.2223810344533745,
                                0.1012285362903763};
inline const double gl16_x[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                                 0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
inline const double gl16_w[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

inline cplx gl8(const std::function<cplx(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx acc(0);
    for (int i = 0; i < 4; ++i)
        acc += gl8_w[i] * (f(c + h * gl8_x[i]) + f(c - h * gl8_x[i]));
    return acc * h;
}

inline cplx gl16(const std::function<cplx(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    cplx acc(0);
    for (int i = 0; i < 8; ++i)
        acc += gl16_w[i] * (f(c + h * gl16_x[i]) + f(c - h * gl16_x[i]));
    return acc * h;
}

inline cplx adaptive_gl(const std::function<cplx(double)>& f, double a, double b, double tol,
                        int depth) {
    const cplx coarse = gl8(f, a, b);
    const cplx fine = gl16(f, a, b);
    if (std::abs(fine - coarse) <= tol || b - a < 1e-14) {
        if (depth > 40) fail(ErrorKind::QuadratureFailure, "adaptive quadrature depth exhausted");
        return fine;
    }
    if (depth > 40) fail(ErrorKind::QuadratureFailure, "adaptive quadrature tolerance unreachable");
    const double m = 0.5 * (a + b);
    return adaptive_gl(f, a, m, tol / 2, depth + 1) + adaptive_gl(f, m, b, tol / 2, depth + 1);
}

}  // namespace detail

// Prop-int-prop laboratory: Q_n-average of f vs its full average, with the
// certified displacement bound 2 theta_*^{-1} s_n M.
inline EquidistResult equidist_average(const std::function<cplx(double)>& f, double M, int n,
                                       double tol = 1e-10) {
    if (n < 1) fail(ErrorKind::Validation, "equidist_average: level must be >= 1");
    const double th = theta_star<double>();
    const Partition part = partition(n);
    const double total = 1.0 + th;

    double sn = th;
    for (int k = 0; k < n; ++k) sn *= th * th;

    cplx full(0), over_q(0);
    for (const Interval& iv : part.intervals) {
        const double len = iv.right - iv.left;
        const cplx piece = detail::adaptive_gl(f, iv.left, iv.right, tol * len / total, 0);
        full += piece;
        if (iv.kind == IntervalKind::Q) over_q += piece;
    }
    EquidistResult out;
    out.qavg = over_q / (static_cast<double>(fibonacci_q(2 * n)) * sn);
    out.favg = full / total;
    out.bound = 2.0 / th * sn * M;
    return out;
}

}  // namespace renormlab
