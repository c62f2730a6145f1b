#include <catch2/catch_amalgamated.hpp>
#include <set>

#include "renormlab/goldenrot.hpp"

using namespace renormlab;

namespace {

// Independent brute-force enumeration of admissible words by filtering all
// 3^n digit tuples against a direct transcription of the selection rules.
std::set<std::string> brute_force_words(int n, WordKind kind) {
    std::set<std::string> out;
    const int total = static_cast<int>(std::pow(3, n));
    for (int code = 0; code < total; ++code) {
        std::vector<int> d(static_cast<size_t>(n));
        int c = code;
        for (int i = 0; i < n; ++i) {
            d[static_cast<size_t>(i)] = c % 3;
            c /= 3;
        }
        // d[n-1] = alpha_{n-1} ... d[0] = alpha_0; choose from i = n-1 down
        bool ok = true;
        bool restricted = (kind == WordKind::I);
        for (int i = n - 1; i >= 0; --i) {
            const int a = d[static_cast<size_t>(i)];
            if (restricted && a > 1) {
                ok = false;
                break;
            }
            restricted = (a == 2) || (restricted && a == 1);
        }
        if (!ok) continue;
        std::string s;
        for (int i = n - 1; i >= 0; --i) s += static_cast<char>('0' + d[static_cast<size_t>(i)]);
        out.insert(s);
    }
    return out;
}

}  // namespace

TEST_CASE("fibonacci_q basics and guard") {
    CHECK(fibonacci_q(0) == 1);
    CHECK(fibonacci_q(1) == 1);
    CHECK(fibonacci_q(5) == 8);
    CHECK(fibonacci_q(10) == 89);
    CHECK_THROWS_AS(fibonacci_q(91), Error);
}

TEST_CASE("word counts match the Fibonacci closest returns") {
    for (int n = 0; n <= 10; ++n) {
        CHECK(static_cast<std::int64_t>(words(n, WordKind::J).size()) == fibonacci_q(2 * n + 1));
        CHECK(static_cast<std::int64_t>(words(n, WordKind::I).size()) == fibonacci_q(2 * n));
    }
}

TEST_CASE("words agree with the brute-force oracle") {
    CHECK(words(0, WordKind::J).size() == 1);
    CHECK(words(0, WordKind::J)[0].str() == "0");
    for (int n = 1; n <= 6; ++n) {
        for (WordKind kind : {WordKind::J, WordKind::I}) {
            const auto oracle = brute_force_words(n, kind);
            const auto got = words(n, kind);
            REQUIRE(got.size() == oracle.size());
            std::string prev;
            for (size_t i = 0; i < got.size(); ++i) {
                CHECK(oracle.count(got[i].str()) == 1);
                if (i > 0) CHECK(prev < got[i].str());  // lexicographic order
                prev = got[i].str();
            }
        }
    }
    CHECK(words(2, WordKind::J).size() == 8);
    CHECK(words(2, WordKind::I).size() == 5);
}

TEST_CASE("prerenorm_rotation preserves the golden ratio") {
    const double th = theta_star<double>();
    RotationState r = initial_rotation_state();
    RotationState r1 = prerenorm_rotation(r);
    CHECK(std::abs(r1.s - th * th * th) < 1e-14);
    CHECK(std::abs(r1.t - th * th) < 1e-14);
    RotationState r2 = prerenorm_rotation(r1);
    CHECK(std::abs(r2.s - std::pow(th, 5)) < 1e-14);
    CHECK(std::abs(r2.t - std::pow(th, 4)) < 1e-14);

    // The recursion (s,t) -> (2s-t, t-s) amplifies absolute errors by
    // 1/theta*^2 per level while s,t shrink by theta*^2, so the ratio drift
    // grows like theta*^{-4n} eps ~ 6.854^n eps.
    // Past level ~17 the accumulated absolute error exceeds s_n itself and
    // the recursion legitimately reports NonPositiveLength.
    RotationState cur = initial_rotation_state();
    for (int n = 0; n < 16; ++n) {
        const double drift = std::abs(cur.s / cur.t - th);
        if (n <= 5) CHECK(drift < 1e-12);
        CHECK(drift < 2e-16 * std::pow(1.0 / (th * th * th * th), n) + 1e-13);
        cur = prerenorm_rotation(cur);
    }

    RotationState bad{0.4, 1.0, 0};
    CHECK_THROWS_AS(prerenorm_rotation(bad), Error);
}

TEST_CASE("partition geometry") {
    const double th = theta_star<double>();
    {
        Partition p0 = partition(0);
        REQUIRE(p0.intervals.size() == 2);
        CHECK(p0.intervals[0].kind == IntervalKind::Q);
        CHECK(std::abs(p0.intervals[0].left + th) < 1e-15);
        CHECK(std::abs(p0.intervals[0].right) < 1e-15);
        CHECK(p0.intervals[1].kind == IntervalKind::P);
        CHECK(std::abs(p0.intervals[1].left) < 1e-15);
        CHECK(std::abs(p0.intervals[1].right - 1.0) < 1e-15);
    }
    {
        Partition p1 = partition(1);
        int np = 0, nq = 0;
        double total = 0;
        for (const auto& iv : p1.intervals) {
            const double len = iv.right - iv.left;
            total += len;
            if (iv.kind == IntervalKind::P) {
                ++np;
                CHECK(std::abs(len - th * th) < 1e-13);
            } else {
                ++nq;
                CHECK(std::abs(len - th * th * th) < 1e-13);
            }
        }
        CHECK(np == 3);
        CHECK(nq == 2);
        CHECK(std::abs(total - (1 + th)) < 1e-13);
    }
    {
        Partition p = partition(12);
        CHECK(static_cast<std::int64_t>(p.intervals.size()) == fibonacci_q(25) + fibonacci_q(24));
        // cover [-theta*, 1] with no gaps
        double cursor = -th;
        std::set<std::string> seen;
        for (const auto& iv : p.intervals) {
            CHECK(std::abs(iv.left - cursor) < 1e-11);
            cursor = iv.right;
            seen.insert((iv.kind == IntervalKind::P ? "J" : "I") + iv.word.str());
        }
        CHECK(std::abs(cursor - 1.0) < 1e-11);
        CHECK(seen.size() == p.intervals.size());  // word <-> interval bijection
    }
}

TEST_CASE("refinement structure [P,Q,P] and [P,Q]") {
    for (int n = 0; n <= 10; ++n) CHECK(refine_check(n));
}

TEST_CASE("rigid renormalization spread identity") {
    // T0 composed with the rigid word (2,1,...,1) acts on J_n as S_n:
    // 1 - (2 s_{n-1} + s_{n-2} + ... + s_0) = -s_n, and S_n(J_n) stays in
    // I_n cup J_n.
    const double th = theta_star<double>();
    for (int n = 1; n <= 20; ++n) {
        std::vector<int> digits(static_cast<size_t>(n), 1);
        digits[0] = 2;  // alpha_{n-1} = 2
        Word w{digits, WordKind::J};
        const double translate = 1.0 + rigid_translation(w);
        double sn = th;
        for (int k = 0; k < n; ++k) sn *= th * th;
        CHECK(std::abs(translate + sn) < 1e-12);
        // J_n = [1 - t_n, 1] maps into [1 - t_n - s_n, 1]
        const double tn = sn / th;
        CHECK(1.0 - tn + translate >= 1.0 - tn - sn - 1e-12);
        CHECK(1.0 + translate <= 1.0 + 1e-12);
    }
}

TEST_CASE("equidistribution of Q_n averages") {
    const double th = theta_star<double>();

    // constants are exact
    {
        EquidistResult r = equidist_average([](double) { return cplx(1.0); }, 0.0, 3);
        CHECK(std::abs(r.qavg - 1.0) < 1e-12);
        CHECK(std::abs(r.favg - 1.0) < 1e-12);
    }

    // f(x) = x at n = 6: compare against the exact endpoint oracle
    // integral over an interval [l, r] of x dx = (r^2 - l^2)/2
    {
        const int n = 6;
        Partition p = partition(n);
        cplx oracle_q = 0;
        double q_len = 0;
        cplx oracle_full = 0;
        for (const auto& iv : p.intervals) {
            const double piece = 0.5 * (iv.right * iv.right - iv.left * iv.left);
            oracle_full += piece;
            if (iv.kind == IntervalKind::Q) {
                oracle_q += piece;
                q_len += iv.right - iv.left;
            }
        }
        EquidistResult r = equidist_average([](double x) { return cplx(x); }, 1.0, n);
        CHECK(std::abs(r.qavg - oracle_q / q_len) < 1e-10);
        CHECK(std::abs(r.favg - oracle_full / (1 + th)) < 1e-10);
        CHECK(std::abs(r.qavg - r.favg) <= r.bound);
    }

    // sin(5x): error shrinks by ~ theta*^8 between n = 4 and n = 8
    {
        auto f = [](double x) { return cplx(std::sin(5 * x)); };
        EquidistResult r4 = equidist_average(f, 5.0, 4);
        EquidistResult r8 = equidist_average(f, 5.0, 8);
        const double e4 = std::abs(r4.qavg - r4.favg);
        const double e8 = std::abs(r8.qavg - r8.favg);
        const double factor = std::pow(th, 8);
        CHECK(e8 < e4);
        CHECK(e8 / e4 < 20 * factor);  // same order as theta*^8
        CHECK(e8 / e4 > 0.05 * factor);
    }
}
