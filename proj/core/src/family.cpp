#include "tanpq/family.hpp"

#include <cmath>
#include <numbers>

namespace tanpq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;

// Magnitude below which exp(log_mag) underflows to zero anyway.
constexpr double kLogUnderflow = -745.0;

Complex tan_from_exponential(Complex w)
{
    // For Im w >= 0 use u = e^{2iw} (|u| <= 1), tan w = -i(u-1)/(u+1).
    // For Im w < 0 the mirrored u = e^{-2iw} gives tan w = -i(1-u)/(1+u).
    if (w.imag() >= 0.0) {
        const Complex u = std::exp(Complex(-2.0 * w.imag(), 2.0 * w.real()));
        const Complex r = (u - 1.0) / (u + 1.0);
        return Complex(r.imag(), -r.real()); // -i * r
    }
    const Complex u = std::exp(Complex(2.0 * w.imag(), -2.0 * w.real()));
    const Complex r = (1.0 - u) / (1.0 + u);
    return Complex(r.imag(), -r.real());
}

} // namespace

Complex unit_ipow(int p)
{
    int r = p % 4;
    if (r < 0) r += 4;
    switch (r) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
    }
}

Complex int_pow(Complex z, int n)
{
    Complex r{1.0, 0.0};
    for (int i = 0; i < n; ++i) r *= z;
    return r;
}

PoleProximity pole_lattice_distance(Complex w)
{
    const long long m = static_cast<long long>(std::llround(w.real() / kPi - 0.5));
    const double dx = w.real() - (kHalfPi + static_cast<double>(m) * kPi);
    return {std::hypot(dx, w.imag()), m};
}

TanValue stable_tan(Complex w)
{
    if (pole_lattice_distance(w).dist < kPoleProximity) {
        return {Complex(1e300, 0.0), true};
    }
    if (w.imag() == 0.0) {
        // std::tan argument reduction is exact at all magnitudes; keeping the
        // result exactly real keeps real orbits on the real line.
        return {Complex(std::tan(w.real()), 0.0), false};
    }
    if (w.real() == 0.0) {
        return {Complex(0.0, std::tanh(w.imag())), false};
    }
    return {tan_from_exponential(w), false};
}

Complex detail::step_from_power(const FamilyParams& fam, Complex lambda, Complex w)
{
    return lambda * int_pow(stable_tan(w).value, fam.p);
}

EvalResult eval(const FamilyParams& fam, Complex lambda, Complex z)
{
    if (std::abs(z) > kMagnitudeOverflow) return {Complex{}, KernelStatus::Overflow};
    const Complex w = int_pow(z, fam.q);
    const TanValue t = stable_tan(w);
    if (t.at_pole) return {Complex{}, KernelStatus::PoleHit};
    return {lambda * int_pow(t.value, fam.p), KernelStatus::Ok};
}

EvalResult eval_derivative(const FamilyParams& fam, Complex lambda, Complex z)
{
    if (std::abs(z) > kMagnitudeOverflow) return {Complex{}, KernelStatus::Overflow};
    const Complex w = int_pow(z, fam.q);
    if (pole_lattice_distance(w).dist < kPoleProximity)
        return {Complex{}, KernelStatus::PoleHit};

    const Complex u = (w.imag() >= 0.0)
        ? std::exp(Complex(-2.0 * w.imag(), 2.0 * w.real()))
        : std::exp(Complex(2.0 * w.imag(), -2.0 * w.real()));
    const Complex one_plus_u = u + 1.0;
    const Complex sec2 = 4.0 * u / (one_plus_u * one_plus_u);

    Complex tp1{1.0, 0.0};
    if (fam.p > 1) tp1 = int_pow(stable_tan(w).value, fam.p - 1);
    const Complex zq1 = (fam.q > 1) ? int_pow(z, fam.q - 1) : Complex(1.0, 0.0);

    const double pq = static_cast<double>(fam.p) * static_cast<double>(fam.q);
    return {lambda * pq * zq1 * tp1 * sec2, KernelStatus::Ok};
}

Complex free_asymptotic_value(const FamilyParams& fam, Complex lambda)
{
    return unit_ipow(fam.p) * lambda;
}

Complex second_asymptotic_value(const FamilyParams& fam, Complex lambda)
{
    return -free_asymptotic_value(fam, lambda);
}

Pole pole_location(const FamilyParams& fam, int m, int j)
{
    const double base = kHalfPi + static_cast<double>(m) * kPi;
    // Principal q-th root (argument in (-pi/q, pi/q]), then rotate by j.
    Complex root;
    if (base >= 0.0) {
        root = Complex(std::pow(base, 1.0 / fam.q), 0.0);
    } else {
        root = std::polar(std::pow(-base, 1.0 / fam.q), kPi / fam.q);
    }
    if (j != 0) root *= std::polar(1.0, 2.0 * kPi * j / fam.q);
    return {m, j, root};
}

EvalResult lambda_of_fixed_point(const FamilyParams& fam, Complex z)
{
    if (z == Complex{}) return {Complex{}, KernelStatus::Degenerate};
    const Complex w = int_pow(z, fam.q);
    const TanValue t = stable_tan(w);
    if (t.at_pole) return {Complex{}, KernelStatus::PoleHit};
    const Complex tp = int_pow(t.value, fam.p);
    if (tp == Complex{}) return {Complex{}, KernelStatus::Degenerate};
    return {z / tp, KernelStatus::Ok};
}

detail::LogPolar detail::sin_log_polar(Complex s)
{
    const double y = s.imag();
    if (std::abs(y) <= 30.0) {
        const Complex v = std::sin(s);
        return {std::log(std::abs(v)), std::arg(v)};
    }
    // sin(x+iy) ~ (e^{|y|}/2) * i * e^{-ix} for y > 30 (mirrored below),
    // with relative error e^{-2|y|} < 1e-26.
    if (y > 0.0) return {y - std::numbers::ln2, kHalfPi - s.real()};
    return {-y - std::numbers::ln2, s.real() - kHalfPi};
}

EvalResult fixed_point_multiplier(const FamilyParams& fam, Complex z)
{
    const Complex w = int_pow(z, fam.q);
    const Complex s2 = 2.0 * w;
    if (std::abs(s2.imag()) <= 30.0 && std::sin(s2) == Complex{})
        return {Complex{}, KernelStatus::Singular};

    const detail::LogPolar sl = detail::sin_log_polar(s2);
    const double pq = static_cast<double>(fam.p) * static_cast<double>(fam.q);
    const double log_mag = std::log(2.0 * pq) + std::log(std::abs(w)) - sl.log_mag;
    if (log_mag < kLogUnderflow) return {Complex{}, KernelStatus::Ok};
    const double phase = std::arg(w) - sl.phase;
    return {std::polar(std::exp(log_mag), phase), KernelStatus::Ok};
}

} // namespace tanpq
