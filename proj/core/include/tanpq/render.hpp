#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tanpq/orbit.hpp"

namespace tanpq {

/// A rectangular pixel grid over a region of the complex plane. Row 0 is the
/// top row (maximal imaginary part); cell centers sit at pixel centers.
struct Window {
    Complex center{};
    double width = 0.0;
    double height = 0.0;
    int px_w = 0;
    int px_h = 0;

    bool valid() const
    {
        return width > 0 && height > 0 && px_w > 0 && px_h > 0 &&
               static_cast<long long>(px_w) * px_h <= 100'000'000LL;
    }
    Complex cell_center(int ix, int iy) const
    {
        const double re = center.real() - width / 2.0 + (ix + 0.5) * width / px_w;
        const double im = center.imag() + height / 2.0 - (iy + 0.5) * height / px_h;
        return {re, im};
    }
    /// Square window helper: height matches width scaled by the pixel aspect.
    static Window square(Complex center, double width, int px)
    {
        return {center, width, width, px, px};
    }
};

struct ClassGrid {
    Window window;
    FamilyParams params;
    OrbitBudget budget;
    std::vector<ParamClass> cells; // row-major, px_w * px_h

    const ParamClass& at(int ix, int iy) const
    {
        return cells[static_cast<size_t>(iy) * window.px_w + ix];
    }
};

/// Classify every cell center as a parameter value. Cells are independent
/// work items written once each, so the result is identical for any worker
/// count. The lambda = 0 puncture cell (if hit exactly) is Undecided.
ClassGrid render_parameter_plane(const FamilyParams& fam, const Window& window,
                                 const OrbitBudget& budget, int threads = 0);

/// Classify every cell center as a dynamical seed for a fixed lambda.
ClassGrid render_dynamical_plane(const FamilyParams& fam, Complex lambda,
                                 const Window& window, const OrbitBudget& budget,
                                 int threads = 0);

struct Arc {
    ParamClass cls;      // representative class (multiplier from first sample)
    int first_sample = 0;
    int sample_count = 0;
    double start_angle = 0.0;
    double end_angle = 0.0; // exceeds 2*pi for the arc wrapping through 0
};

struct ArcReport {
    double radius = 0.0;
    int samples = 0;
    std::vector<Arc> arcs; // circular partition; adjacent arcs differ in class

    int count_shell(int s_index) const
    {
        int n = 0;
        for (const Arc& a : arcs)
            if (a.cls.is_shell(s_index)) ++n;
        return n;
    }
};

/// Classify lambda = R e^{i theta} at uniformly spaced theta and merge equal
/// classified runs into arcs (class equality ignores the multiplier).
ArcReport circle_scan(const FamilyParams& fam, double radius, int samples,
                      const OrbitBudget& budget, int threads = 0);

struct ComponentReport {
    int cell_count = 0;
    int min_x = 0, max_x = 0, min_y = 0, max_y = 0;
    bool touches_edge = false;
};

/// 4-connected flood fill from a seed cell over cells satisfying the
/// predicate. Throws std::invalid_argument if the seed itself fails it.
ComponentReport flood_component(const ClassGrid& grid, int seed_x, int seed_y,
                                const std::function<bool(const ParamClass&)>& predicate,
                                std::vector<std::uint8_t>* visited = nullptr);

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

/// Fixed colormap: capture green, shell period 1 gold, period 2 cyan, higher
/// periods golden-angle hue steps, virtual-cycle white, undecided black.
Rgb class_color(const ParamClass& cls);

/// Binary PPM (P6, maxval 255), top row first.
std::string encode_ppm(const ClassGrid& grid);

/// CSV dump: "ix,iy,re,im,class,period,mode,mult_re,mult_im,order", floats
/// with 17 significant digits.
std::string grid_csv(const ClassGrid& grid);

/// Worker count: explicit > 0 wins, else TANPQ_THREADS, else hardware.
int resolve_thread_count(int requested);

} // namespace tanpq
