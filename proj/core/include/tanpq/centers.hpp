#pragma once

#include <string>
#include <vector>

#include "tanpq/orbit.hpp"

namespace tanpq {

/// A parameter where the free asymptotic value is a prepole of order k-1,
/// i.e. the common virtual center of the 2pq shell components of period k.
struct VirtualCenter {
    int order = 2;        // component period k >= 2
    int m = 0;            // pole branch pi/2 + m*pi
    int branch = 0;       // q-th-root branch of the landing pole
    Complex lambda{};
    Complex pole{};       // landing pole location in the z-plane
    double residual = 0.0; // |f^{k-2}(v) - pole|
};

/// Closed-form order-2 centers: for each m in [m_lo, m_hi] and each root
/// branch j, lambda = i^{-p} * (j-th q-th root of pi/2 + m*pi). Exactly q
/// centers per m.
std::vector<VirtualCenter> period2_centers(const FamilyParams& fam, int m_lo, int m_hi);

enum class FindCenterStatus : std::uint8_t { Ok, NoConvergence, WrongOrder, BadArguments };

struct FindCenterResult {
    FindCenterStatus status = FindCenterStatus::BadArguments;
    VirtualCenter center;
    bool ok() const { return status == FindCenterStatus::Ok; }
};

/// Newton's method on G(lambda) = f^{k-2}(v_lambda) - pole, derivative by
/// central finite difference (G is holomorphic). Order 2 is rejected: the
/// closed form exists. Roots whose orbit reaches a pole early are reported
/// WrongOrder.
FindCenterResult find_virtual_center(const FamilyParams& fam, int order, const Pole& pole,
                                     Complex seed, const OrbitBudget& budget = {});

/// Newton search over a coarse seed grid for all order-k centers landing on
/// poles with m in [m_lo, m_hi] (all root branches), deduplicated.
std::vector<VirtualCenter> find_virtual_centers_in_window(const FamilyParams& fam, int order,
                                                          int m_lo, int m_hi, Complex center,
                                                          double width, double height,
                                                          int seeds_per_axis,
                                                          const OrbitBudget& budget = {});

struct ComponentCount {
    int count = 0;
    bool inconclusive = false; // all samples undecided: radius too small/large
};

/// Count the shell components of period equal to the center's order meeting
/// at it, by classifying lambda* + r e^{i theta} on a sample circle. Arcs are
/// the maximal runs of matching class; adjacent components are distinguished
/// by the asymptotic-tract parity of the far cycle point (equivalently, for
/// pq odd, by the TwoCycles/DoubledCycle mode), since the slivers separating
/// them are far below any sampling resolution.
ComponentCount count_components_at_center(const FamilyParams& fam, const VirtualCenter& center,
                                          double radius, int samples,
                                          const OrbitBudget& budget = {}, int threads = 0);

/// True iff every radius in the list has at least one of 720 circle samples
/// classifying as Shell with the center's component index.
bool verify_attracting_nearby(const FamilyParams& fam, const VirtualCenter& center,
                              const std::vector<double>& radii,
                              const OrbitBudget& budget = {}, int threads = 0);

/// CSV: "order,m,branch,lambda_re,lambda_im,residual" rows, 17 significant
/// digits on floats.
std::string centers_csv(const std::vector<VirtualCenter>& centers);

} // namespace tanpq
