#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tanpq/centers.hpp"
#include "tanpq/render.hpp"

namespace tanpq {

struct Measurement {
    std::string label;
    double value = 0.0;
    double expected = 0.0;
    double tol = 0.0;

    bool within() const { return std::abs(value - expected) <= tol; }
};

/// One verification suite's result: passed iff every measurement is within
/// its tolerance. `inconclusive` marks environmental failures (e.g. a window
/// too small for a boundedness check) distinct from refutations.
struct Certificate {
    std::string name;
    FamilyParams params;
    bool passed = false;
    bool inconclusive = false;
    std::vector<Measurement> measurements;
    std::vector<std::string> artifacts;

    void add(std::string label, double value, double expected, double tol)
    {
        measurements.push_back({std::move(label), value, expected, tol});
    }
    void finalize()
    {
        passed = true;
        for (const Measurement& m : measurements)
            if (!m.within()) passed = false;
        if (inconclusive) passed = false;
    }
};

std::string certificate_json(const Certificate& cert);

struct SuiteOptions {
    OrbitBudget budget{};
    int threads = 0;
    std::uint64_t seed = 0x7a9f1c3b5d7e9a10ULL; // recorded in certificates
    int samples = 500;                           // random-sampling suites
    std::optional<Window> s2_window;             // default depends on (p,q)
    std::string artifact_dir;                    // empty: no artifacts written
};

/// Classification / multiplier invariance under conjugation, q-th-root-of-
/// unity rotation, and the parity laws for lambda -> -lambda (including the
/// pq-odd doubling law mu(-lambda) = mu(lambda)^2).
Certificate check_symmetries(const FamilyParams& fam, const SuiteOptions& opt = {});

/// The 2q unbounded period-1 components: arc count on circles, symmetry-ray
/// straddling, the on-ray argument relation, and |mu| decay toward the
/// virtual center at infinity.
Certificate check_s1_structure(const FamilyParams& fam, const std::vector<double>& radii,
                               const SuiteOptions& opt = {});

/// Positive root of pq*r = sinh(r) (0 when pq = 1): the imaginary-axis entry
/// level of the unit-modulus locus of h(u) = pq*u/sin(u).
double s1_threshold(const FamilyParams& fam);

struct BoundaryPoint {
    double y = 0.0;
    double x = 0.0; // positive root of |h(x+iy)| = 1
    Complex u{};
    Complex z{};
    Complex lambda{};
    double mu_abs = 0.0; // |multiplier| at z, 1 on the locus
};

/// The |h(u)| = 1 locus solved by bisection in x for each y, mapped to the
/// lambda plane through u = 2 z^q and the fixed-point relation.
std::vector<BoundaryPoint> s1_boundary_curve(const FamilyParams& fam, int branch,
                                             double y_lo, double y_hi, int samples);

/// Separating rays i^{-p} r w_k^± . For pq even the on-ray dynamics is
/// conjugate to a real one-dimensional map, which is iterated exactly; the
/// suite asserts no ray sample is Shell. For pq odd it asserts the two
/// S_2 modes flank the first on-ray virtual center.
Certificate check_separating_rays(const FamilyParams& fam, double r_max,
                                  const SuiteOptions& opt = {});

/// Render the window, flood every S_2 component adjacent to an in-window
/// order-2 center, and assert none touches the window edge (plus the control:
/// S_1 components do).
Certificate check_s2_bounded(const FamilyParams& fam, const Window& window,
                             const SuiteOptions& opt = {});

/// Names accepted by run_suite.
std::vector<std::string> suite_names();

/// Execute the selected suites ("all" for every one). Throws
/// std::invalid_argument for unknown names or pq > 8 (runtime guard).
std::vector<Certificate> run_suite(const FamilyParams& fam,
                                   const std::vector<std::string>& selection,
                                   const SuiteOptions& opt = {});

namespace detail {

/// Classification of an on-ray parameter (pq even) through the conjugated
/// real map w -> i^{-pq} (±1) r^q tan^{pq}(w). Returns the resulting tag;
/// Shell is impossible when the lemma holds.
ParamTag ray_reduced_classify(const FamilyParams& fam, double r, int ray_sign,
                              const OrbitBudget& budget);

} // namespace detail

} // namespace tanpq
