#pragma once

#include <cmath>
#include <complex>
#include <limits>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

namespace renormlab {

// Extended scalar: 40 decimal digits ~ 133 mantissa bits.
using ext_real = boost::multiprecision::number<
    boost::multiprecision::backends::cpp_bin_float<40>,
    boost::multiprecision::et_off>;
using ext_complex = boost::multiprecision::complex_adaptor<
    boost::multiprecision::backends::cpp_bin_float<40>>;
using ext_cplx = boost::multiprecision::number<ext_complex, boost::multiprecision::et_off>;

using cplx = std::complex<double>;

template <class C>
struct scalar_traits;

template <>
struct scalar_traits<cplx> {
    using real = double;
    static constexpr bool is_double = true;
    static double re(const cplx& z) { return z.real(); }
    static double im(const cplx& z) { return z.imag(); }
    static double abs(const cplx& z) { return std::abs(z); }
    static cplx make(double r, double i) { return {r, i}; }
    static double to_double(double r) { return r; }
    static bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }
    static constexpr double eps() { return std::numeric_limits<double>::epsilon(); }
};

template <>
struct scalar_traits<ext_cplx> {
    using real = ext_real;
    static constexpr bool is_double = false;
    static double re(const ext_cplx& z) { return z.real().convert_to<double>(); }
    static double im(const ext_cplx& z) { return z.imag().convert_to<double>(); }
    static ext_real abs(const ext_cplx& z) { return boost::multiprecision::abs(z); }
    static ext_cplx make(double r, double i) { return {ext_real(r), ext_real(i)}; }
    static double to_double(const ext_real& r) { return r.convert_to<double>(); }
    static bool finite(const ext_cplx& z) {
        return boost::math::isfinite(z.real()) && boost::math::isfinite(z.imag());
    }
    static double eps() { return std::pow(10.0, -38); }
};

template <class C>
double abs_d(const C& z) {
    return scalar_traits<C>::to_double(scalar_traits<C>::abs(z));
}

template <class C>
cplx to_cplx(const C& z) {
    return {scalar_traits<C>::re(z), scalar_traits<C>::im(z)};
}

template <class C>
C from_cplx(const cplx& z) {
    return scalar_traits<C>::make(z.real(), z.imag());
}

// Inverse golden mean, (sqrt(5)-1)/2, computed once at full precision.
template <class R = double>
R theta_star() {
    using std::sqrt;
    using boost::multiprecision::sqrt;
    return (sqrt(R(5)) - R(1)) / R(2);
}

inline cplx mu_star() {
    const double two_pi_theta = 2.0 * 3.14159265358979323846264338327950288 * theta_star<double>();
    return {std::cos(two_pi_theta), std::sin(two_pi_theta)};
}

}  // namespace renormlab
