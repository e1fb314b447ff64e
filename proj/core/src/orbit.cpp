#include "tanpq/orbit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace tanpq {

namespace {

constexpr double kLogUnderflow = -745.0;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool zero_is_attracting(const FamilyParams& fam, Complex lambda)
{
    // f(z) ~ lambda * z^{pq} near 0: superattracting for pq >= 2, otherwise
    // f'(0) = lambda.
    return fam.pq() >= 2 || std::abs(lambda) < 1.0;
}

// Forward orbit of length n from z, accumulating the chain-rule derivative.
// Returns false on pole/overflow along the way.
bool orbit_with_derivative(const FamilyParams& fam, Complex lambda, Complex z, int n,
                           const OrbitBudget& budget, std::vector<Complex>& pts,
                           Complex& end, Complex& deriv)
{
    pts.clear();
    deriv = Complex(1.0, 0.0);
    Complex cur = z;
    for (int i = 0; i < n; ++i) {
        if (std::abs(cur) > kMagnitudeOverflow) return false;
        const Complex w = int_pow(cur, fam.q);
        if (pole_lattice_distance(w).dist < budget.pole_tol) return false;
        const EvalResult d = eval_derivative(fam, lambda, cur);
        if (!d.ok()) return false;
        deriv *= d.value;
        pts.push_back(cur);
        cur = detail::step_from_power(fam, lambda, w);
        if (!std::isfinite(cur.real()) || !std::isfinite(cur.imag())) return false;
    }
    end = cur;
    return true;
}

bool points_self_symmetric(const std::vector<Complex>& pts)
{
    double scale = 1.0;
    for (const Complex& z : pts) scale = std::max(scale, std::abs(z));
    const double tol = 1e-6 * scale;
    for (const Complex& a : pts) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& b : pts) best = std::min(best, std::abs(a + b));
        if (best > tol) return false;
    }
    return true;
}

} // namespace

EvalResult cycle_multiplier(const FamilyParams& fam, std::span<const Complex> points)
{
    const double pq = static_cast<double>(fam.p) * static_cast<double>(fam.q);
    double log_mag = static_cast<double>(points.size()) * std::log(2.0 * pq);
    double phase = 0.0;
    for (const Complex& z : points) {
        const Complex w = int_pow(z, fam.q);
        const Complex s2 = 2.0 * w;
        if (std::abs(s2.imag()) <= 30.0 && std::sin(s2) == Complex{})
            return {Complex{}, KernelStatus::Singular};
        const detail::LogPolar sl = detail::sin_log_polar(s2);
        log_mag += std::log(std::abs(w)) - sl.log_mag;
        phase = std::remainder(phase + std::arg(w) - sl.phase, kTwoPi);
    }
    if (log_mag < kLogUnderflow) return {Complex{}, KernelStatus::Ok};
    return {std::polar(std::exp(log_mag), phase), KernelStatus::Ok};
}

RefineResult refine_cycle(const FamilyParams& fam, Complex lambda, Complex seed, int period,
                          const OrbitBudget& budget)
{
    std::vector<Complex> pts;
    Complex z = seed;
    int n = period;

    bool converged = false;
    for (int it = 0; it < 50; ++it) {
        Complex end, deriv;
        if (!orbit_with_derivative(fam, lambda, z, n, budget, pts, end, deriv))
            return {RefineStatus::NoConvergence, {}};
        const Complex g = end - z;
        if (std::abs(g) < budget.attract_tol) {
            converged = true;
            break;
        }
        const Complex gp = deriv - 1.0;
        if (gp == Complex{}) return {RefineStatus::NoConvergence, {}};
        z -= g / gp;
    }
    if (!converged) return {RefineStatus::NoConvergence, {}};

    // Minimal period: a proper divisor that already closes wins.
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        Complex end, deriv;
        std::vector<Complex> sub;
        if (!orbit_with_derivative(fam, lambda, z, d, budget, sub, end, deriv)) continue;
        if (std::abs(end - z) < 10.0 * budget.attract_tol) {
            n = d;
            pts = std::move(sub);
            break;
        }
    }

    // Distinctness guard against half-collapsed cycles near bifurcations.
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            if (std::abs(pts[i] - pts[j]) <= 10.0 * budget.cycle_tol)
                return {RefineStatus::DegenerateCycle, {}};

    const EvalResult mu = cycle_multiplier(fam, pts);
    if (!mu.ok()) return {RefineStatus::DegenerateCycle, {}};
    if (std::abs(mu.value) >= 1.0) return {RefineStatus::NotAttracting, {}};

    CycleInfo info;
    info.period = n;
    info.points = std::move(pts);
    info.multiplier = mu.value;
    info.self_symmetric = fam.pq_odd() && points_self_symmetric(info.points);
    return {RefineStatus::Ok, std::move(info)};
}

OrbitOutcome iterate_orbit(const FamilyParams& fam, Complex lambda, Complex z0,
                           const OrbitBudget& budget)
{
    const bool zero_attr = zero_is_attracting(fam, lambda);
    const int max_period = std::min(budget.max_period, 256);
    const double cyc2 = budget.cycle_tol * budget.cycle_tol;

    // Ring buffer of the last max_period+1 iterates plus a consecutive-hit
    // counter per candidate period.
    std::vector<Complex> ring(static_cast<size_t>(max_period) + 1);
    std::vector<int> streak(static_cast<size_t>(max_period) + 1, 0);
    const int ring_n = max_period + 1;

    Complex z = z0;
    for (int t = 0; t < budget.max_iter; ++t) {
        if (std::abs(z) > kMagnitudeOverflow) return {OrbitTag::Undecided, {}, 0};
        const Complex w = int_pow(z, fam.q);
        if (pole_lattice_distance(w).dist < budget.pole_tol) {
            OrbitOutcome out;
            out.tag = OrbitTag::PrepoleHit;
            out.prepole_order = t + 1; // f^{t+1}(z0) = infinity
            return out;
        }
        if (zero_attr && std::abs(z) < budget.zero_tol)
            return {OrbitTag::CapturedByZero, {}, 0};

        ring[static_cast<size_t>(t % ring_n)] = z;
        if (t >= budget.warmup) {
            const int nmax = std::min(max_period, t);
            for (int n = 1; n <= nmax; ++n) {
                const Complex prev = ring[static_cast<size_t>((t - n) % ring_n)];
                const double dr = z.real() - prev.real();
                const double di = z.imag() - prev.imag();
                if (dr * dr + di * di < cyc2) {
                    if (++streak[static_cast<size_t>(n)] >= 3) {
                        RefineResult ref = refine_cycle(fam, lambda, z, n, budget);
                        if (ref.ok()) {
                            OrbitOutcome out;
                            out.tag = OrbitTag::Attracted;
                            out.cycle = std::move(ref.cycle);
                            return out;
                        }
                        // Failed candidate: suppress this period, keep iterating.
                        streak[static_cast<size_t>(n)] = std::numeric_limits<int>::min() / 2;
                    }
                } else {
                    streak[static_cast<size_t>(n)] = 0;
                }
            }
        }
        z = detail::step_from_power(fam, lambda, w);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return {OrbitTag::Undecided, {}, 0};
    }
    return {OrbitTag::Undecided, {}, 0};
}

Classification classify_parameter_full(const FamilyParams& fam, Complex lambda,
                                       const OrbitBudget& budget)
{
    Classification r;
    if (lambda == Complex{}) return r; // parameter-plane puncture

    const Complex v = free_asymptotic_value(fam, lambda);
    r.outcome = iterate_orbit(fam, lambda, v, budget);

    switch (r.outcome.tag) {
    case OrbitTag::PrepoleHit:
        r.cls.tag = ParamTag::VirtualCycle;
        r.cls.prepole_order = r.outcome.prepole_order;
        break;
    case OrbitTag::CapturedByZero:
        r.cls.tag = ParamTag::Capture;
        break;
    case OrbitTag::Attracted: {
        const CycleInfo& c = r.outcome.cycle;
        bool all_zero = true;
        for (const Complex& p : c.points)
            if (std::abs(p) >= budget.zero_tol) { all_zero = false; break; }
        if (all_zero) {
            r.cls.tag = ParamTag::Capture;
            break;
        }
        r.cls.tag = ParamTag::Shell;
        r.cls.raw_period = c.period;
        r.cls.multiplier = c.multiplier;
        if (fam.pq_odd()) {
            if (c.self_symmetric) {
                r.cls.mode = ShellMode::DoubledCycle;
                r.cls.s_index = c.period / 2;
            } else {
                r.cls.mode = ShellMode::TwoCycles;
                r.cls.s_index = c.period;
            }
        } else {
            r.cls.s_index = c.period;
        }
        break;
    }
    case OrbitTag::Undecided:
        break;
    }
    return r;
}

ParamClass classify_parameter(const FamilyParams& fam, Complex lambda,
                              const OrbitBudget& budget)
{
    return classify_parameter_full(fam, lambda, budget).cls;
}

} // namespace tanpq
