#include "tanpq/centers.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "tanpq/render.hpp"

namespace tanpq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCenterResidualTol = 1e-10;
constexpr double kDedupeTol = 1e-8;

// f^{steps}(v_lambda); fails on pole/overflow along the way.
bool asymptotic_orbit(const FamilyParams& fam, Complex lambda, int steps, Complex& out)
{
    Complex z = free_asymptotic_value(fam, lambda);
    for (int i = 0; i < steps; ++i) {
        const EvalResult r = eval(fam, lambda, z);
        if (!r.ok()) return false;
        z = r.value;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    out = z;
    return true;
}

// Does the orbit of v reach the pole lattice strictly before `steps` maps?
bool hits_pole_early(const FamilyParams& fam, Complex lambda, int steps, double tol)
{
    Complex z = free_asymptotic_value(fam, lambda);
    for (int i = 0; i < steps; ++i) {
        const Complex w = int_pow(z, fam.q);
        if (pole_lattice_distance(w).dist < tol) return true;
        z = detail::step_from_power(fam, lambda, w);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return true;
    }
    return false;
}

// Tract parity of a shell sample: the sign of Im z^q at the cycle point
// deepest in a tract. Adjacent components at a virtual center alternate it.
int tract_parity(const FamilyParams& fam, const CycleInfo& cycle)
{
    double best = -1.0;
    double im = 0.0;
    for (const Complex& z : cycle.points) {
        const double v = std::abs(int_pow(z, fam.q).imag());
        if (v > best) {
            best = v;
            im = int_pow(z, fam.q).imag();
        }
    }
    return im >= 0.0 ? 1 : -1;
}

struct SampleLabel {
    bool matches = false; // Shell with the requested s-index
    ShellMode mode = ShellMode::None;
    int parity = 0;
    bool undecided = false;

    bool operator==(const SampleLabel&) const = default;
};

std::vector<SampleLabel> circle_labels(const FamilyParams& fam, Complex center_lambda,
                                       double radius, int samples, int s_index,
                                       const OrbitBudget& budget, int threads)
{
    std::vector<SampleLabel> labels(static_cast<size_t>(samples));
    std::atomic<int> next{0};
    auto work = [&] {
        for (;;) {
            const int k = next.fetch_add(1, std::memory_order_relaxed);
            if (k >= samples) return;
            const Complex lambda = center_lambda + std::polar(radius, kTwoPi * k / samples);
            const Classification c = classify_parameter_full(fam, lambda, budget);
            SampleLabel& lab = labels[static_cast<size_t>(k)];
            lab.undecided = c.cls.tag == ParamTag::Undecided;
            if (c.cls.is_shell(s_index)) {
                lab.matches = true;
                lab.mode = c.cls.mode;
                if (fam.pq_even()) lab.parity = tract_parity(fam, c.outcome.cycle);
            }
        }
    };
    const int nthreads = resolve_thread_count(threads);
    std::vector<std::thread> pool;
    for (int t = 1; t < nthreads; ++t) pool.emplace_back(work);
    work();
    for (std::thread& th : pool) th.join();
    return labels;
}

} // namespace

std::vector<VirtualCenter> period2_centers(const FamilyParams& fam, int m_lo, int m_hi)
{
    std::vector<VirtualCenter> out;
    const Complex ip_inv = unit_ipow(-fam.p);
    for (int m = m_lo; m <= m_hi; ++m) {
        for (int j = 0; j < fam.q; ++j) {
            const Pole pole = pole_location(fam, m, j);
            VirtualCenter c;
            c.order = 2;
            c.m = m;
            c.branch = j;
            c.lambda = ip_inv * pole.location;
            c.pole = pole.location;
            c.residual = std::abs(free_asymptotic_value(fam, c.lambda) - pole.location);
            out.push_back(c);
        }
    }
    return out;
}

FindCenterResult find_virtual_center(const FamilyParams& fam, int order, const Pole& pole,
                                     Complex seed, const OrbitBudget&)
{
    if (order < 3) return {FindCenterStatus::BadArguments, {}};
    const int steps = order - 2;

    Complex lambda = seed;
    bool converged = false;
    for (int it = 0; it < 60; ++it) {
        Complex g{};
        if (!asymptotic_orbit(fam, lambda, steps, g)) return {FindCenterStatus::NoConvergence, {}};
        g -= pole.location;
        if (std::abs(g) < 0.5 * kCenterResidualTol) {
            converged = true;
            break;
        }
        const double h = 1e-7 * std::max(1.0, std::abs(lambda));
        Complex gp{}, gm{};
        if (!asymptotic_orbit(fam, lambda + h, steps, gp) ||
            !asymptotic_orbit(fam, lambda - h, steps, gm))
            return {FindCenterStatus::NoConvergence, {}};
        const Complex dg = (gp - gm) / (2.0 * h);
        if (dg == Complex{}) return {FindCenterStatus::NoConvergence, {}};
        const Complex delta = g / dg;
        lambda -= delta;
        if (!std::isfinite(lambda.real()) || !std::isfinite(lambda.imag()))
            return {FindCenterStatus::NoConvergence, {}};
    }
    if (!converged || lambda == Complex{}) return {FindCenterStatus::NoConvergence, {}};

    Complex end{};
    if (!asymptotic_orbit(fam, lambda, steps, end)) return {FindCenterStatus::NoConvergence, {}};
    const double residual = std::abs(end - pole.location);
    if (residual >= kCenterResidualTol) return {FindCenterStatus::NoConvergence, {}};
    if (steps > 0 && hits_pole_early(fam, lambda, steps, 1e-6))
        return {FindCenterStatus::WrongOrder, {}};

    VirtualCenter c;
    c.order = order;
    c.m = pole.m;
    c.branch = pole.j;
    c.lambda = lambda;
    c.pole = pole.location;
    c.residual = residual;
    return {FindCenterStatus::Ok, c};
}

std::vector<VirtualCenter> find_virtual_centers_in_window(const FamilyParams& fam, int order,
                                                          int m_lo, int m_hi, Complex center,
                                                          double width, double height,
                                                          int seeds_per_axis,
                                                          const OrbitBudget& budget)
{
    std::vector<VirtualCenter> found;
    for (int m = m_lo; m <= m_hi; ++m) {
        for (int j = 0; j < fam.q; ++j) {
            const Pole pole = pole_location(fam, m, j);
            for (int a = 0; a < seeds_per_axis; ++a) {
                for (int b = 0; b < seeds_per_axis; ++b) {
                    const Complex seed(
                        center.real() - width / 2 + (a + 0.5) * width / seeds_per_axis,
                        center.imag() - height / 2 + (b + 0.5) * height / seeds_per_axis);
                    if (seed == Complex{}) continue;
                    const FindCenterResult r = find_virtual_center(fam, order, pole, seed, budget);
                    if (!r.ok()) continue;
                    // Keep roots inside the window; Newton wanders freely.
                    if (std::abs(r.center.lambda.real() - center.real()) > width / 2 ||
                        std::abs(r.center.lambda.imag() - center.imag()) > height / 2)
                        continue;
                    bool dup = false;
                    for (const VirtualCenter& c : found)
                        if (std::abs(c.lambda - r.center.lambda) < kDedupeTol) { dup = true; break; }
                    if (!dup) found.push_back(r.center);
                }
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const VirtualCenter& a, const VirtualCenter& b) {
        if (a.m != b.m) return a.m < b.m;
        if (a.branch != b.branch) return a.branch < b.branch;
        if (a.lambda.real() != b.lambda.real()) return a.lambda.real() < b.lambda.real();
        return a.lambda.imag() < b.lambda.imag();
    });
    return found;
}

ComponentCount count_components_at_center(const FamilyParams& fam, const VirtualCenter& center,
                                          double radius, int samples,
                                          const OrbitBudget& budget, int threads)
{
    const std::vector<SampleLabel> labels =
        circle_labels(fam, center.lambda, radius, samples, center.order, budget, threads);

    bool any_decided = false;
    for (const SampleLabel& l : labels)
        if (!l.undecided) { any_decided = true; break; }
    if (!any_decided) return {0, true};

    // Circular run merging over (matches, mode, parity).
    std::vector<std::pair<SampleLabel, int>> runs;
    for (const SampleLabel& l : labels) {
        if (!runs.empty() && runs.back().first == l) runs.back().second++;
        else runs.emplace_back(l, 1);
    }
    if (runs.size() > 1 && runs.front().first == runs.back().first) {
        runs.back().second += runs.front().second;
        runs.erase(runs.begin());
    }
    int count = 0;
    for (const auto& [label, n] : runs)
        if (label.matches) ++count;
    return {count, false};
}

bool verify_attracting_nearby(const FamilyParams& fam, const VirtualCenter& center,
                              const std::vector<double>& radii,
                              const OrbitBudget& budget, int threads)
{
    constexpr int kSamples = 720;
    for (const double r : radii) {
        const std::vector<SampleLabel> labels =
            circle_labels(fam, center.lambda, r, kSamples, center.order, budget, threads);
        bool found = false;
        for (const SampleLabel& l : labels)
            if (l.matches) { found = true; break; }
        if (!found) return false;
    }
    return true;
}

std::string centers_csv(const std::vector<VirtualCenter>& centers)
{
    std::string out = "order,m,branch,lambda_re,lambda_im,residual\n";
    char line[160];
    for (const VirtualCenter& c : centers) {
        const int len = std::snprintf(line, sizeof line, "%d,%d,%d,%.17g,%.17g,%.17g\n",
                                      c.order, c.m, c.branch, c.lambda.real(),
                                      c.lambda.imag(), c.residual);
        out.append(line, static_cast<size_t>(len));
    }
    return out;
}

} // namespace tanpq
