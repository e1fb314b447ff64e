#pragma once

#include <span>
#include <vector>

#include "tanpq/family.hpp"

namespace tanpq {

/// Iteration limits and tolerances for orbit classification.
struct OrbitBudget {
    int max_iter = 2000;
    int warmup = 500;
    int max_period = 64;
    double cycle_tol = 1e-9;
    double attract_tol = 1e-12;
    double zero_tol = 1e-10;
    double pole_tol = 1e-12;

    bool valid() const
    {
        return max_iter > 0 && warmup > 0 && warmup < max_iter && max_period > 0 &&
               cycle_tol > 0 && attract_tol > 0 && zero_tol > 0 && pole_tol > 0;
    }
};

/// A refined periodic cycle.
struct CycleInfo {
    int period = 0;                // raw cycle length
    std::vector<Complex> points;   // z_0 ... z_{period-1}, forward orbit order
    Complex multiplier{};          // closed-form product
    bool self_symmetric = false;   // point set equals its own negation (pq odd only)
};

enum class OrbitTag : std::uint8_t { Attracted, CapturedByZero, PrepoleHit, Undecided };

struct OrbitOutcome {
    OrbitTag tag = OrbitTag::Undecided;
    CycleInfo cycle;       // Attracted only
    int prepole_order = 0; // PrepoleHit only: v is a prepole of this order
};

enum class ParamTag : std::uint8_t { Shell, Capture, VirtualCycle, Undecided };
enum class ShellMode : std::uint8_t { None, TwoCycles, DoubledCycle };

/// Per-parameter classification. For Shell, s_index is the paper-style
/// component index: equal to the raw period, except that a self-symmetric
/// doubled cycle of raw period 2n files under index n.
struct ParamClass {
    ParamTag tag = ParamTag::Undecided;
    ShellMode mode = ShellMode::None;
    int s_index = 0;
    int raw_period = 0;
    int prepole_order = 0;
    Complex multiplier{};

    /// Identity used for arc merging and component floods: everything except
    /// the multiplier, which varies inside a component.
    bool same_class(const ParamClass& o) const
    {
        return tag == o.tag && mode == o.mode && s_index == o.s_index &&
               raw_period == o.raw_period && prepole_order == o.prepole_order;
    }
    bool is_shell(int index) const { return tag == ParamTag::Shell && s_index == index; }
};

/// Iterate z0 under f_lambda. Detects prepole hits (w-plane proximity to
/// pi/2 + m*pi), capture by the fixed critical point 0, and attracting cycles
/// (tail scan for the smallest period with |z_{t+n}-z_t| < cycle_tol sustained
/// 3 consecutive steps, then Newton refinement). Overflow and everything else
/// degrade to Undecided, never a crash.
OrbitOutcome iterate_orbit(const FamilyParams& fam, Complex lambda, Complex z0,
                           const OrbitBudget& budget);

enum class RefineStatus : std::uint8_t { Ok, NoConvergence, DegenerateCycle, NotAttracting };

struct RefineResult {
    RefineStatus status = RefineStatus::NoConvergence;
    CycleInfo cycle;
    bool ok() const { return status == RefineStatus::Ok; }
};

/// Newton-refine a period-n cycle from a seed in its basin, on
/// g(z) = f^n(z) - z with the chain-rule derivative. Collapses to the minimal
/// period if a proper divisor of n already closes the cycle.
RefineResult refine_cycle(const FamilyParams& fam, Complex lambda, Complex seed, int period,
                          const OrbitBudget& budget);

/// Closed-form cycle multiplier (2pq)^n * prod z_i^q / sin(2 z_i^q), in log
/// space so deep-tract factors underflow smoothly to 0.
EvalResult cycle_multiplier(const FamilyParams& fam, std::span<const Complex> points);

/// Classify the parameter by the fate of the free asymptotic value.
ParamClass classify_parameter(const FamilyParams& fam, Complex lambda,
                              const OrbitBudget& budget);

/// As classify_parameter, but also hands back the orbit outcome (cycle points
/// are needed by component counting and the theorem suites).
struct Classification {
    ParamClass cls;
    OrbitOutcome outcome;
};
Classification classify_parameter_full(const FamilyParams& fam, Complex lambda,
                                       const OrbitBudget& budget);

} // namespace tanpq
