#pragma once

#include <complex>
#include <cstdint>

namespace tanpq {

using Complex = std::complex<double>;

/// The integer pair (p, q) defining the family f_lambda(z) = lambda * tan^p(z^q).
struct FamilyParams {
    int p = 1;
    int q = 1;

    int pq() const { return p * q; }
    bool pq_even() const { return (p * q) % 2 == 0; }
    bool pq_odd() const { return (p * q) % 2 != 0; }
    bool valid() const { return p >= 1 && q >= 1; }
};

enum class KernelStatus : std::uint8_t {
    Ok,
    PoleHit,    // argument of tan within pole tolerance of pi/2 + m*pi
    Overflow,   // |z| beyond the magnitude threshold, value meaningless
    Degenerate, // z = 0 or tan(z^q) = 0 where a division is required
    Singular,   // sin(2 z^q) = 0 in a multiplier formula
};

struct EvalResult {
    Complex value{};
    KernelStatus status = KernelStatus::Ok;
    bool ok() const { return status == KernelStatus::Ok; }
};

// |z| above this aborts evaluation: z^q would lose the lattice structure of
// the poles entirely and such orbits are indistinguishable from Julia-set
// points near prepoles.
inline constexpr double kMagnitudeOverflow = 1e8;

// "at a pole" means closer than this to pi/2 + m*pi in the w = z^q plane.
inline constexpr double kPoleProximity = 1e-12;

/// Exact value of i^p (or i^{-p} for negative p). Unit multiplications by
/// these are exact in IEEE arithmetic, which downstream code relies on.
Complex unit_ipow(int p);

/// z^n for small non-negative integer n by repeated multiplication.
Complex int_pow(Complex z, int n);

/// Distance from w to the nearest pole of tan (pi/2 + m*pi on the real axis),
/// together with that m.
struct PoleProximity {
    double dist;
    long long m;
};
PoleProximity pole_lattice_distance(Complex w);

struct TanValue {
    Complex value{};
    bool at_pole = false; // within kPoleProximity of a real pole; value is a sentinel
};

/// tan(w) with no overflow for any |Im w|. Branches on the sign of Im w so the
/// exponential magnitude never exceeds 1; orbits live in asymptotic tracts
/// where |Im w| can exceed 1e3. Exactly real for real w and exactly imaginary
/// for imaginary w, so orbits on invariant lines stay on them.
TanValue stable_tan(Complex w);

/// f_lambda(z) = lambda * tan^p(z^q).
EvalResult eval(const FamilyParams& fam, Complex lambda, Complex z);

/// d/dz f_lambda(z) = lambda*p*q*z^{q-1}*tan^{p-1}(z^q)*sec^2(z^q), with
/// sec^2 evaluated as 4u/(1+u)^2, u = e^{±2i z^q}, to avoid both overflow and
/// the catastrophic cancellation of 1 + tan^2 inside asymptotic tracts.
EvalResult eval_derivative(const FamilyParams& fam, Complex lambda, Complex z);

/// The free asymptotic value v_lambda = i^p * lambda.
Complex free_asymptotic_value(const FamilyParams& fam, Complex lambda);

/// The companion asymptotic value -v_lambda (distinct only when pq is odd).
Complex second_asymptotic_value(const FamilyParams& fam, Complex lambda);

/// A pole of f: the j-th q-th root of pi/2 + m*pi. Principal root has
/// argument in (-pi/q, pi/q]; branches ordered counterclockwise by j.
struct Pole {
    int m = 0;
    int j = 0;
    Complex location{};
};
Pole pole_location(const FamilyParams& fam, int m, int j);

/// The unique lambda for which z is a fixed point: lambda = z / tan^p(z^q).
EvalResult lambda_of_fixed_point(const FamilyParams& fam, Complex z);

/// Multiplier of the fixed point z of f_{lambda(z)}: 2pq * z^q / sin(2 z^q),
/// computed in log space for large |Im z^q| (sinh overflows doubles near 710),
/// underflowing smoothly to 0.
EvalResult fixed_point_multiplier(const FamilyParams& fam, Complex z);

namespace detail {

// log|sin(s)| and arg(sin(s)); for |Im s| > 30 the hyperbolic-dominant
// expansion is exact to machine precision.
struct LogPolar {
    double log_mag;
    double phase;
};
LogPolar sin_log_polar(Complex s);

// One orbit step sharing the w = z^q power with the caller's pole check.
// Precondition: w not within pole_tol of the pole lattice.
Complex step_from_power(const FamilyParams& fam, Complex lambda, Complex w);

} // namespace detail

} // namespace tanpq
