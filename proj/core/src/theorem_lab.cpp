#include "tanpq/theorem_lab.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace tanpq {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next()
    {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

double wrap_angle(double a)
{
    return std::remainder(a, kTwoPi);
}

// eta_k^+ are the roots of eta^q = i, eta_k^- of eta^q = -i; for q odd
// eta_k^- = -eta_k^+, for q even eta_k^- = conj(eta_k^+).
std::vector<Complex> eta_directions(const FamilyParams& fam, int sign)
{
    std::vector<Complex> dirs;
    for (int k = 0; k < fam.q; ++k) {
        const Complex plus = std::polar(1.0, (kPi / 2.0 + kTwoPi * k) / fam.q);
        if (sign > 0) dirs.push_back(plus);
        else if (fam.q % 2 == 1) dirs.push_back(-plus);
        else dirs.push_back(std::conj(plus));
    }
    return dirs;
}

// Separating directions in the lambda plane: i^{-p} * (roots of w^q = ±1).
std::vector<Complex> separating_directions(const FamilyParams& fam, int sign)
{
    std::vector<Complex> dirs;
    const Complex ip_inv = unit_ipow(-fam.p);
    for (int k = 0; k < fam.q; ++k) {
        const double base = (sign > 0) ? kTwoPi * k / fam.q : (kPi + kTwoPi * k) / fam.q;
        dirs.push_back(ip_inv * std::polar(1.0, base));
    }
    return dirs;
}

bool arc_contains_angle(const Arc& a, double theta)
{
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= a.start_angle && t < a.end_angle) return true;
    // wrapped arc: end_angle beyond 2*pi
    return a.end_angle > kTwoPi && t + kTwoPi >= a.start_angle && t + kTwoPi < a.end_angle;
}

double min_arg_deviation(const std::vector<Complex>& points,
                         const std::vector<double>& target_args)
{
    double best = kInf;
    for (const Complex& z : points)
        for (const double t : target_args)
            best = std::min(best, std::abs(wrap_angle(std::arg(z) - t)));
    return best;
}

struct ModePair {
    bool found_inner = false, found_outer = false;
    ShellMode inner = ShellMode::None, outer = ShellMode::None;
    int inner_raw = 0, outer_raw = 0;
};

// First Shell(S_2) classifications on the two flanking ray segments of an
// on-ray order-2 center (pq odd).
ModePair flanking_modes(const FamilyParams& fam, Complex dir, double r_center,
                        const OrbitBudget& budget)
{
    ModePair mp;
    for (double d = 0.02; d <= 0.101; d += 0.02) {
        if (!mp.found_inner && r_center - d > 0) {
            const ParamClass c = classify_parameter(fam, (r_center - d) * dir, budget);
            if (c.is_shell(2)) {
                mp.found_inner = true;
                mp.inner = c.mode;
                mp.inner_raw = c.raw_period;
            }
        }
        if (!mp.found_outer) {
            const ParamClass c = classify_parameter(fam, (r_center + d) * dir, budget);
            if (c.is_shell(2)) {
                mp.found_outer = true;
                mp.outer = c.mode;
                mp.outer_raw = c.raw_period;
            }
        }
    }
    return mp;
}

// Classify a symmetric pair at a shared budget, escalating max_iter when only
// one side resolved: a sample sitting in the slow-convergence layer of a
// component boundary may need the extra iterations on one side only because
// the mirrored orbit differs in the last bits.
std::pair<ParamClass, ParamClass> classify_pair(const FamilyParams& fam, Complex la, Complex lb,
                                                const OrbitBudget& budget)
{
    OrbitBudget b = budget;
    for (int level = 0;; ++level) {
        const ParamClass ca = classify_parameter(fam, la, b);
        const ParamClass cb = classify_parameter(fam, lb, b);
        const bool both = ca.tag != ParamTag::Undecided && cb.tag != ParamTag::Undecided;
        const bool neither = ca.tag == ParamTag::Undecided && cb.tag == ParamTag::Undecided;
        if (both || neither || level == 2) return {ca, cb};
        b.max_iter *= 8;
    }
}

void write_artifact(Certificate& cert, const std::string& dir, const std::string& name,
                    const std::string& bytes)
{
    if (dir.empty()) return;
    std::filesystem::create_directories(dir);
    const std::string path = dir + "/" + name;
    std::ofstream out(path, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (out) cert.artifacts.push_back(path);
}

} // namespace

std::string certificate_json(const Certificate& cert)
{
    nlohmann::json j;
    j["name"] = cert.name;
    j["params"] = {{"p", cert.params.p}, {"q", cert.params.q}};
    j["passed"] = cert.passed;
    if (cert.inconclusive) j["inconclusive"] = true;
    j["measurements"] = nlohmann::json::array();
    for (const Measurement& m : cert.measurements) {
        j["measurements"].push_back(
            {{"label", m.label}, {"value", m.value}, {"expected", m.expected}, {"tol", m.tol}});
    }
    j["artifacts"] = cert.artifacts;
    return j.dump(2);
}

double s1_threshold(const FamilyParams& fam)
{
    const double pq = fam.pq();
    if (pq <= 1.0) return 0.0;
    double lo = 1e-12, hi = 1.0;
    while (std::sinh(hi) - pq * hi < 0) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::sinh(mid) - pq * mid < 0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

std::vector<BoundaryPoint> s1_boundary_curve(const FamilyParams& fam, int branch,
                                             double y_lo, double y_hi, int samples)
{
    if (samples < 2 || y_hi <= y_lo) throw std::invalid_argument("s1_boundary_curve: bad range");
    const double r0 = s1_threshold(fam);
    if (y_lo < std::max(1.0, r0) - 1e-9 || y_hi > 30.0 + 1e-9)
        throw std::invalid_argument("s1_boundary_curve: y range outside [max(1,r0), 30]");

    const double pq = fam.pq();
    std::vector<BoundaryPoint> out;
    out.reserve(static_cast<size_t>(samples));
    for (int i = 0; i < samples; ++i) {
        const double y = y_lo + (y_hi - y_lo) * i / (samples - 1);
        // F < 0 inside the locus, F > 0 outside; F is increasing in x.
        const auto F = [&](double x) {
            const double sx = std::sin(x);
            const double sh = std::sinh(y);
            return pq * pq * (x * x + y * y) - sx * sx - sh * sh;
        };
        if (F(0.0) > 0.0) continue; // below the entry level; no positive root
        double lo = 0.0, hi = 1.0;
        while (F(hi) < 0.0) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (F(mid) < 0.0) lo = mid;
            else hi = mid;
            if (hi - lo <= 1e-15 * std::max(1.0, hi)) break;
        }
        BoundaryPoint pt;
        pt.y = y;
        pt.x = 0.5 * (lo + hi);
        pt.u = Complex(pt.x, y);
        const Complex half_u = pt.u / 2.0;
        pt.z = std::polar(std::pow(std::abs(half_u), 1.0 / fam.q),
                          std::arg(half_u) / fam.q + kTwoPi * branch / fam.q);
        const EvalResult lam = lambda_of_fixed_point(fam, pt.z);
        if (!lam.ok()) continue;
        pt.lambda = lam.value;
        const EvalResult mu = fixed_point_multiplier(fam, pt.z);
        if (!mu.ok()) continue;
        pt.mu_abs = std::abs(mu.value);
        out.push_back(pt);
    }
    return out;
}

Certificate check_symmetries(const FamilyParams& fam, const SuiteOptions& opt)
{
    Certificate cert;
    cert.name = "symmetries";
    cert.params = fam;
    cert.add("rng_seed", static_cast<double>(opt.seed), static_cast<double>(opt.seed), 0.0);
    cert.add("samples", opt.samples, opt.samples, 0.0);
    if (opt.samples == 0) { // vacuous
        cert.finalize();
        return cert;
    }

    SplitMix64 rng(opt.seed);
    const Complex omega = std::polar(1.0, kTwoPi / fam.q);

    int class_mismatch = 0;
    int shell_pairs = 0;
    int doubling_pairs = 0;
    double max_conj_dev = 0.0, max_rot_dev = 0.0, max_neg_dev = 0.0, max_doubling_dev = 0.0;

    for (int s = 0; s < opt.samples; ++s) {
        const double r = std::exp(std::log(0.2) + rng.uniform() * (std::log(6.0) - std::log(0.2)));
        const Complex lambda = std::polar(r, kTwoPi * rng.uniform());

        // Conjugation: classes mirror, multipliers conjugate.
        {
            const auto [base, cj] = classify_pair(fam, lambda, std::conj(lambda), opt.budget);
            if (!cj.same_class(base)) ++class_mismatch;
            else if (base.tag == ParamTag::Shell)
                max_conj_dev = std::max(max_conj_dev,
                                        std::abs(cj.multiplier - std::conj(base.multiplier)));
        }

        // Rotation by a q-th root of unity.
        if (fam.q > 1) {
            const auto [base, rot] = classify_pair(fam, lambda, omega * lambda, opt.budget);
            if (!rot.same_class(base)) ++class_mismatch;
            else if (base.tag == ParamTag::Shell)
                max_rot_dev = std::max(max_rot_dev, std::abs(rot.multiplier - base.multiplier));
        }

        // lambda -> -lambda parity laws.
        const auto [base, neg] = classify_pair(fam, lambda, -lambda, opt.budget);
        if (fam.pq_even()) {
            if (!neg.same_class(base)) ++class_mismatch;
            else if (base.tag == ParamTag::Shell) {
                ++shell_pairs;
                max_neg_dev = std::max(max_neg_dev, std::abs(neg.multiplier - base.multiplier));
            }
        } else if (base.tag != ParamTag::Shell) {
            if (neg.tag != base.tag || neg.prepole_order != base.prepole_order) ++class_mismatch;
        } else {
            ++shell_pairs;
            if (neg.tag != ParamTag::Shell) { ++class_mismatch; continue; }
            const bool base_two = base.mode == ShellMode::TwoCycles;
            if (base.s_index % 2 == 1) {
                // Doubling law: the TwoCycles side's mu squares into the
                // single doubled cycle on the other side.
                const ParamClass& two = base_two ? base : neg;
                const ParamClass& dbl = base_two ? neg : base;
                if (two.mode != ShellMode::TwoCycles || dbl.mode != ShellMode::DoubledCycle ||
                    two.s_index != dbl.s_index || dbl.raw_period != 2 * two.s_index) {
                    ++class_mismatch;
                } else {
                    ++doubling_pairs;
                    const Complex mu2 = two.multiplier * two.multiplier;
                    const double scale = std::max(std::abs(mu2), 1e-30);
                    max_doubling_dev = std::max(max_doubling_dev,
                                                std::abs(dbl.multiplier - mu2) / scale);
                }
            } else {
                // Even index: modes persist and multipliers agree.
                if (neg.mode != base.mode || neg.s_index != base.s_index ||
                    neg.raw_period != base.raw_period)
                    ++class_mismatch;
                else
                    max_neg_dev = std::max(max_neg_dev,
                                           std::abs(neg.multiplier - base.multiplier));
            }
        }
    }

    cert.add("class_mismatches", class_mismatch, 0, 0);
    cert.add("max_conjugation_multiplier_dev", max_conj_dev, 0.0, 1e-9);
    cert.add("max_rotation_multiplier_dev", max_rot_dev, 0.0, 1e-9);
    cert.add("max_negation_multiplier_dev", max_neg_dev, 0.0, 1e-9);
    if (fam.pq_odd()) {
        cert.add("max_doubling_law_rel_dev", max_doubling_dev, 0.0, 1e-8);
        cert.add("doubling_pairs_seen", doubling_pairs, doubling_pairs, 0.0);
    }
    cert.add("shell_pairs_seen", shell_pairs, shell_pairs, 0.0);
    cert.finalize();
    return cert;
}

Certificate check_s1_structure(const FamilyParams& fam, const std::vector<double>& radii,
                               const SuiteOptions& opt)
{
    Certificate cert;
    cert.name = "s1-structure";
    cert.params = fam;

    const double r0 = s1_threshold(fam);
    const double entry_radius = std::pow(std::max(r0, 1e-300) / 2.0, 1.0 / fam.q);
    double r_min = kInf;
    for (const double R : radii) r_min = std::min(r_min, R);
    cert.add("radii_exceed_entry_level", (r0 == 0.0 || r_min > 4.0 * entry_radius) ? 1 : 0, 1, 0);

    std::vector<Complex> dirs = eta_directions(fam, +1);
    {
        const std::vector<Complex> minus = eta_directions(fam, -1);
        dirs.insert(dirs.end(), minus.begin(), minus.end());
    }
    const Complex ip_inv = unit_ipow(-fam.p);

    int undecided_scans = 0;
    for (const double R : radii) {
        const ArcReport rep = circle_scan(fam, R, 3600, opt.budget, opt.threads);
        int undecided = 0;
        for (const Arc& a : rep.arcs)
            if (a.cls.tag == ParamTag::Undecided) undecided += a.sample_count;
        if (undecided > rep.samples / 2) ++undecided_scans;

        cert.add("s1_arc_count_R=" + std::to_string(R), rep.count_shell(1), 2 * fam.q, 0);

        // Each S_1 arc straddles exactly one symmetry-ray direction.
        int straddle_violations = 0;
        int directions_covered = 0;
        for (const Arc& a : rep.arcs) {
            if (!a.cls.is_shell(1)) continue;
            int inside = 0;
            for (const Complex& eta : dirs) {
                const double theta = std::arg(ip_inv * eta);
                if (arc_contains_angle(a, theta)) ++inside;
            }
            if (inside != 1) ++straddle_violations;
            directions_covered += inside;
        }
        cert.add("ray_straddle_violations_R=" + std::to_string(R), straddle_violations, 0, 0);
        cert.add("ray_directions_covered_R=" + std::to_string(R), directions_covered,
                 2 * fam.q, 0);
    }

    // On-ray structure: argument relation and |mu| decay toward infinity.
    double max_arg_dev = 0.0;
    int ray_class_failures = 0;
    int mu_decrease_violations = 0;
    int mode_violations = 0;
    int mirrored_branch_count = 0; // p odd, q even: how often arg(-v) was the match
    for (size_t k = 0; k < dirs.size(); ++k) {
        const bool plus_ray = k < static_cast<size_t>(fam.q);
        for (const double R : radii) {
            const Complex dir = ip_inv * dirs[k];
            const Classification c1 =
                classify_parameter_full(fam, R * dir, opt.budget);
            if (!c1.cls.is_shell(1)) { ++ray_class_failures; continue; }

            const Complex v = free_asymptotic_value(fam, R * dir);
            std::vector<double> targets{std::arg(v)};
            if (fam.p % 2 == 1 && fam.q % 2 == 0) {
                targets.push_back(std::arg(-v));
                const double primary = min_arg_deviation(c1.outcome.cycle.points, {std::arg(v)});
                const double mirrored = min_arg_deviation(c1.outcome.cycle.points, {std::arg(-v)});
                if (mirrored < primary) ++mirrored_branch_count;
            }
            max_arg_dev = std::max(
                max_arg_dev, min_arg_deviation(c1.outcome.cycle.points, targets));

            if (fam.pq_odd()) {
                const ShellMode want = plus_ray ? ShellMode::TwoCycles : ShellMode::DoubledCycle;
                if (c1.cls.mode != want) ++mode_violations;
            }

            const Classification c2 =
                classify_parameter_full(fam, 2.0 * R * dir, opt.budget);
            if (!c2.cls.is_shell(1)) ++ray_class_failures;
            else if (std::abs(c2.cls.multiplier) >= std::abs(c1.cls.multiplier))
                ++mu_decrease_violations;
        }
    }
    cert.add("on_ray_classification_failures", ray_class_failures, 0, 0);
    cert.add("max_on_ray_arg_deviation", max_arg_dev, 0.0, 1e-6);
    cert.add("mu_decrease_violations", mu_decrease_violations, 0, 0);
    if (fam.pq_odd()) cert.add("ray_mode_violations", mode_violations, 0, 0);
    if (fam.p % 2 == 1 && fam.q % 2 == 0)
        cert.add("mirrored_arg_branch_count", mirrored_branch_count, mirrored_branch_count, 0.0);

    if (undecided_scans > 0) cert.inconclusive = true;
    cert.finalize();
    return cert;
}

ParamTag detail::ray_reduced_classify(const FamilyParams& fam, double r, int ray_sign,
                                      const OrbitBudget& budget)
{
    if (!fam.pq_even()) throw std::invalid_argument("ray_reduced_classify: pq must be even");
    const int pq = fam.pq();
    const double ipq = (pq % 4 == 0) ? 1.0 : -1.0; // i^{-pq} for even pq
    const double rq = std::pow(r, fam.q);
    const double A = ipq * ray_sign * rq;

    const int max_period = std::min(budget.max_period, 256);
    std::vector<double> ring(static_cast<size_t>(max_period) + 1);
    std::vector<int> streak(static_cast<size_t>(max_period) + 1, 0);
    const int ring_n = max_period + 1;

    double w = ray_sign * rq; // v^q, exactly real on the ray
    for (int t = 0; t < budget.max_iter; ++t) {
        if (!std::isfinite(w) || std::abs(w) > 1e300) return ParamTag::Undecided;
        const double m = std::round(w / kPi - 0.5);
        if (std::abs(w - (kPi / 2.0 + m * kPi)) < budget.pole_tol)
            return ParamTag::VirtualCycle;
        const double T = std::tan(w);
        const double znext = r * std::pow(std::abs(T), fam.p);
        if (znext < budget.zero_tol) return ParamTag::Capture;

        ring[static_cast<size_t>(t % ring_n)] = w;
        if (t >= budget.warmup) {
            const int nmax = std::min(max_period, t);
            for (int n = 1; n <= nmax; ++n) {
                const double prev = ring[static_cast<size_t>((t - n) % ring_n)];
                if (std::abs(w - prev) < budget.cycle_tol * std::max(1.0, std::abs(w))) {
                    if (++streak[static_cast<size_t>(n)] >= 3) {
                        // Candidate real cycle; attracting iff the w-map
                        // derivative product is inside the unit circle.
                        double log_deriv = 0.0;
                        double wc = w;
                        bool bad = false;
                        for (int i = 0; i < n; ++i) {
                            const double Tc = std::tan(wc);
                            const double cc = std::cos(wc);
                            if (Tc == 0.0 || cc == 0.0) { bad = true; break; }
                            log_deriv += std::log(std::abs(A * pq)) +
                                         (pq - 1) * std::log(std::abs(Tc)) -
                                         2.0 * std::log(std::abs(cc));
                            wc = A * std::pow(Tc, pq);
                            if (!std::isfinite(wc)) { bad = true; break; }
                        }
                        if (!bad && log_deriv < 0.0) return ParamTag::Shell;
                        streak[static_cast<size_t>(n)] = std::numeric_limits<int>::min() / 2;
                    }
                } else {
                    streak[static_cast<size_t>(n)] = 0;
                }
            }
        }
        w = A * std::pow(T, pq);
    }
    return ParamTag::Undecided;
}

Certificate check_separating_rays(const FamilyParams& fam, double r_max,
                                  const SuiteOptions& opt)
{
    Certificate cert;
    cert.name = "separating-rays";
    cert.params = fam;
    const int per_ray = opt.samples;
    cert.add("samples_per_ray", per_ray, per_ray, 0.0);

    if (fam.pq_even()) {
        int shell_hits = 0, capture_hits = 0, other = 0;
        for (int sign : {+1, -1}) {
            for (int k = 0; k < fam.q; ++k) { // rays with equal reduced dynamics per sign
                for (int i = 0; i < per_ray; ++i) {
                    const double f = (per_ray == 1) ? 1.0 : static_cast<double>(i) / (per_ray - 1);
                    const double r = r_max * std::pow(10.0, -3.0 * (1.0 - f));
                    const ParamTag tag = detail::ray_reduced_classify(fam, r, sign, opt.budget);
                    if (tag == ParamTag::Shell) ++shell_hits;
                    else if (tag == ParamTag::Capture) ++capture_hits;
                    else ++other;
                }
            }
        }
        cert.add("shell_classifications_on_rays", shell_hits, 0, 0);
        cert.add("capture_classifications_on_rays", capture_hits, capture_hits, 0.0);
        cert.add("undecided_or_virtual_on_rays", other, other, 0.0);
    } else {
        // pq odd: both S_2 modes flank the first on-ray order-2 center.
        const Complex ip_inv = unit_ipow(-fam.p);
        int centers_checked = 0, flank_failures = 0;
        for (int sign : {+1, -1}) {
            for (int k = 0; k < fam.q; ++k) {
                const int m = (sign > 0) ? 0 : -1;
                const Pole pole = pole_location(fam, m, k);
                const Complex lambda_c = ip_inv * pole.location;
                const double rc = std::abs(lambda_c);
                if (rc > r_max) continue;
                const Complex dir = lambda_c / rc;
                const ModePair mp = flanking_modes(fam, dir, rc, opt.budget);
                ++centers_checked;
                const bool ok = mp.found_inner && mp.found_outer && mp.inner != mp.outer &&
                                ((mp.inner == ShellMode::TwoCycles && mp.inner_raw == 2) ||
                                 (mp.inner == ShellMode::DoubledCycle && mp.inner_raw == 4)) &&
                                ((mp.outer == ShellMode::TwoCycles && mp.outer_raw == 2) ||
                                 (mp.outer == ShellMode::DoubledCycle && mp.outer_raw == 4));
                if (!ok) ++flank_failures;
            }
        }
        cert.add("on_ray_centers_checked", centers_checked, 2 * fam.q, 0);
        cert.add("flanking_mode_failures", flank_failures, 0, 0);
    }
    cert.finalize();
    return cert;
}

Certificate check_s2_bounded(const FamilyParams& fam, const Window& window,
                             const SuiteOptions& opt)
{
    Certificate cert;
    cert.name = "s2-bounded";
    cert.params = fam;
    if (!window.valid()) throw std::invalid_argument("check_s2_bounded: invalid window");

    const ClassGrid grid = render_parameter_plane(fam, window, opt.budget, opt.threads);
    write_artifact(cert, opt.artifact_dir,
                   "s2-window-p" + std::to_string(fam.p) + "q" + std::to_string(fam.q) + ".ppm",
                   encode_ppm(grid));

    // Known order-2 centers inside the window with an edge margin.
    const double margin = 0.05 * std::min(window.width, window.height);
    const double rmax = std::abs(window.center) + std::hypot(window.width, window.height);
    const int m_hi = static_cast<int>(std::ceil(std::pow(rmax, fam.q) / kPi)) + 1;
    std::vector<VirtualCenter> centers;
    for (const VirtualCenter& c : period2_centers(fam, -m_hi, m_hi)) {
        if (std::abs(c.lambda.real() - window.center.real()) < window.width / 2 - margin &&
            std::abs(c.lambda.imag() - window.center.imag()) < window.height / 2 - margin)
            centers.push_back(c);
    }
    cert.add("in_window_centers", static_cast<double>(centers.size()),
             static_cast<double>(centers.size()), 0.0);
    if (centers.size() < 2) {
        cert.inconclusive = true; // precondition: at least two order-2 centers
        cert.finalize();
        return cert;
    }

    const auto is_s2 = [](const ParamClass& c) { return c.is_shell(2); };
    const double cell_w = window.width / window.px_w;
    const double cell_h = window.height / window.px_h;

    std::vector<std::uint8_t> visited(grid.cells.size(), 0);
    int flooded = 0, edge_touches = 0, locality_violations = 0;
    for (const VirtualCenter& c : centers) {
        const int cx = static_cast<int>((c.lambda.real() - window.center.real() +
                                         window.width / 2) / cell_w);
        const int cy = static_cast<int>((window.center.imag() + window.height / 2 -
                                         c.lambda.imag()) / cell_h);
        for (int dy = -3; dy <= 3; ++dy) {
            for (int dx = -3; dx <= 3; ++dx) {
                const int x = cx + dx, y = cy + dy;
                if (x < 0 || x >= window.px_w || y < 0 || y >= window.px_h) continue;
                if (visited[static_cast<size_t>(y) * window.px_w + x]) continue;
                if (!is_s2(grid.at(x, y))) continue;
                const ComponentReport rep = flood_component(grid, x, y, is_s2, &visited);
                ++flooded;
                if (rep.touches_edge) ++edge_touches;
                // The component must hug its virtual center: every cell within
                // twice the component diameter of lambda*.
                const Complex lo = window.cell_center(rep.min_x, rep.max_y);
                const Complex hi = window.cell_center(rep.max_x, rep.min_y);
                const double diam = std::abs(hi - lo) + std::hypot(cell_w, cell_h);
                const double far = std::max({std::abs(Complex(lo.real(), lo.imag()) - c.lambda),
                                             std::abs(Complex(hi.real(), lo.imag()) - c.lambda),
                                             std::abs(Complex(lo.real(), hi.imag()) - c.lambda),
                                             std::abs(Complex(hi.real(), hi.imag()) - c.lambda)});
                if (far > 2.0 * diam) ++locality_violations;
            }
        }
    }
    cert.add("s2_components_flooded", flooded > 0 ? 1 : 0, 1, 0);
    cert.add("s2_components_flooded_count", flooded, flooded, 0.0);
    cert.add("s2_edge_touches", edge_touches, 0, 0);
    cert.add("s2_center_locality_violations", locality_violations, 0, 0);
    if (edge_touches > 0) cert.inconclusive = true; // enlarge the window

    // Control: S_1 components are unbounded, so some S_1 cell sits on the
    // window edge and floods to it.
    bool control_ok = false;
    for (int ix = 0; ix < window.px_w && !control_ok; ++ix) {
        for (const int iy : {0, window.px_h - 1}) {
            if (grid.at(ix, iy).is_shell(1)) {
                const ComponentReport rep =
                    flood_component(grid, ix, iy, [](const ParamClass& c) { return c.is_shell(1); });
                control_ok = rep.touches_edge;
                break;
            }
        }
    }
    for (int iy = 0; iy < window.px_h && !control_ok; ++iy) {
        for (const int ix : {0, window.px_w - 1}) {
            if (grid.at(ix, iy).is_shell(1)) {
                const ComponentReport rep =
                    flood_component(grid, ix, iy, [](const ParamClass& c) { return c.is_shell(1); });
                control_ok = rep.touches_edge;
                break;
            }
        }
    }
    cert.add("s1_touches_edge_control", control_ok ? 1 : 0, 1, 0);
    cert.finalize();
    return cert;
}

std::vector<std::string> suite_names()
{
    return {"symmetries", "s1-structure", "separating-rays", "s2-bounded", "s1-boundary"};
}

namespace {

Certificate s1_boundary_certificate(const FamilyParams& fam, const SuiteOptions& opt)
{
    Certificate cert;
    cert.name = "s1-boundary";
    cert.params = fam;

    const double r0 = s1_threshold(fam);
    cert.add("r0", r0, r0, 0.0);

    const double y_lo = std::max(1.0, r0) + 0.25;
    const std::vector<BoundaryPoint> curve = s1_boundary_curve(fam, 0, y_lo, 25.0, 120);
    cert.add("curve_points", static_cast<double>(curve.size()), 120.0, 0.0);

    double max_mu_err = 0.0;
    for (const BoundaryPoint& pt : curve)
        max_mu_err = std::max(max_mu_err, std::abs(pt.mu_abs - 1.0));
    cert.add("max_abs_mu_minus_1", max_mu_err, 0.0, 1e-8);

    // Asymptote x ~ e^y / 2pq at y = 20.
    const std::vector<BoundaryPoint> at20 = s1_boundary_curve(fam, 0, 20.0, 20.0 + 1e-9, 2);
    if (!at20.empty()) {
        const double expect = std::exp(20.0) / (2.0 * fam.pq());
        cert.add("asymptote_rel_err_y20", std::abs(at20.front().x - expect) / expect, 0.0, 0.01);
    } else {
        cert.add("asymptote_rel_err_y20", 1.0, 0.0, 0.01);
    }

    // Entry level: x -> 0 as y approaches r0 from above (pq >= 2).
    if (fam.pq() >= 2) {
        const std::vector<BoundaryPoint> near =
            s1_boundary_curve(fam, 0, r0 + 1e-5, r0 + 2e-5, 2);
        if (!near.empty())
            cert.add("x_near_entry_level", near.front().x, 0.0, 0.05);
        else
            cert.add("x_near_entry_level", 1.0, 0.0, 0.05);
    }
    (void)opt;
    cert.finalize();
    return cert;
}

} // namespace

std::vector<Certificate> run_suite(const FamilyParams& fam,
                                   const std::vector<std::string>& selection,
                                   const SuiteOptions& opt)
{
    if (!fam.valid()) throw std::invalid_argument("run_suite: p and q must be >= 1");
    if (fam.pq() > 8)
        throw std::invalid_argument("run_suite: pq > 8 exceeds the runtime guard");

    std::vector<std::string> names;
    for (const std::string& s : selection) {
        if (s == "all") {
            names = suite_names();
            break;
        }
        const std::vector<std::string> valid = suite_names();
        if (std::find(valid.begin(), valid.end(), s) == valid.end()) {
            std::string msg = "unknown suite '" + s + "'; valid names:";
            for (const std::string& v : valid) msg += " " + v;
            msg += " all";
            throw std::invalid_argument(msg);
        }
        names.push_back(s);
    }

    const double R = (fam.p == 2 && fam.q == 3) ? 6.0 : 10.0;
    std::vector<Certificate> certs;
    for (const std::string& name : names) {
        if (name == "symmetries") {
            certs.push_back(check_symmetries(fam, opt));
        } else if (name == "s1-structure") {
            certs.push_back(check_s1_structure(fam, {R}, opt));
        } else if (name == "separating-rays") {
            certs.push_back(check_separating_rays(fam, 10.0, opt));
        } else if (name == "s2-bounded") {
            const Window w = opt.s2_window.value_or(
                (fam.p == 1 && fam.q == 1) ? Window::square({}, 8.0, 800)
                                           : Window::square({}, 6.0, 800));
            certs.push_back(check_s2_bounded(fam, w, opt));
        } else if (name == "s1-boundary") {
            certs.push_back(s1_boundary_certificate(fam, opt));
        }
    }
    return certs;
}

} // namespace tanpq
