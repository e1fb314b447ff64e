#include "tanpq/render.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <stdexcept>
#include <thread>

namespace tanpq {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Run job(index) for index in [0, count) across workers; each index is
// computed exactly once, so results do not depend on the schedule.
void parallel_for(int count, int threads, const std::function<void(int)>& job)
{
    if (threads <= 1 || count <= 1) {
        for (int i = 0; i < count; ++i) job(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (;;) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= count) return;
            job(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(threads) - 1);
    for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& th : pool) th.join();
}

void hsv_to_rgb(double h, double s, double v, Rgb& out)
{
    h = std::fmod(h, 360.0);
    if (h < 0) h += 360.0;
    const double c = v * s;
    const double x = c * (1.0 - std::abs(std::fmod(h / 60.0, 2.0) - 1.0));
    const double m = v - c;
    double r = 0, g = 0, b = 0;
    if (h < 60) { r = c; g = x; }
    else if (h < 120) { r = x; g = c; }
    else if (h < 180) { g = c; b = x; }
    else if (h < 240) { g = x; b = c; }
    else if (h < 300) { r = x; b = c; }
    else { r = c; b = x; }
    out.r = static_cast<std::uint8_t>(std::lround((r + m) * 255.0));
    out.g = static_cast<std::uint8_t>(std::lround((g + m) * 255.0));
    out.b = static_cast<std::uint8_t>(std::lround((b + m) * 255.0));
}

const char* class_name(ParamTag tag)
{
    switch (tag) {
    case ParamTag::Shell: return "shell";
    case ParamTag::Capture: return "capture";
    case ParamTag::VirtualCycle: return "virtualcycle";
    default: return "undecided";
    }
}

const char* mode_name(ShellMode mode)
{
    switch (mode) {
    case ShellMode::TwoCycles: return "two";
    case ShellMode::DoubledCycle: return "doubled";
    default: return "";
    }
}

} // namespace

int resolve_thread_count(int requested)
{
    if (requested > 0) return requested;
    if (const char* env = std::getenv("TANPQ_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ClassGrid render_parameter_plane(const FamilyParams& fam, const Window& window,
                                 const OrbitBudget& budget, int threads)
{
    if (!window.valid()) throw std::invalid_argument("render: invalid window");
    ClassGrid grid{window, fam, budget, {}};
    grid.cells.resize(static_cast<size_t>(window.px_w) * window.px_h);
    const int nthreads = resolve_thread_count(threads);
    parallel_for(window.px_h, nthreads, [&](int iy) {
        for (int ix = 0; ix < window.px_w; ++ix) {
            const Complex lambda = window.cell_center(ix, iy);
            ParamClass& cell = grid.cells[static_cast<size_t>(iy) * window.px_w + ix];
            cell = (lambda == Complex{}) ? ParamClass{}
                                         : classify_parameter(fam, lambda, budget);
        }
    });
    return grid;
}

ClassGrid render_dynamical_plane(const FamilyParams& fam, Complex lambda,
                                 const Window& window, const OrbitBudget& budget,
                                 int threads)
{
    if (!window.valid()) throw std::invalid_argument("render: invalid window");
    if (lambda == Complex{}) throw std::invalid_argument("render: lambda must be nonzero");
    ClassGrid grid{window, fam, budget, {}};
    grid.cells.resize(static_cast<size_t>(window.px_w) * window.px_h);
    const int nthreads = resolve_thread_count(threads);
    parallel_for(window.px_h, nthreads, [&](int iy) {
        for (int ix = 0; ix < window.px_w; ++ix) {
            const Complex z0 = window.cell_center(ix, iy);
            const OrbitOutcome out = iterate_orbit(fam, lambda, z0, budget);
            ParamClass cell;
            switch (out.tag) {
            case OrbitTag::PrepoleHit:
                cell.tag = ParamTag::VirtualCycle;
                cell.prepole_order = out.prepole_order;
                break;
            case OrbitTag::CapturedByZero:
                cell.tag = ParamTag::Capture;
                break;
            case OrbitTag::Attracted:
                cell.tag = ParamTag::Shell;
                cell.s_index = out.cycle.period;
                cell.raw_period = out.cycle.period;
                cell.multiplier = out.cycle.multiplier;
                break;
            default:
                break;
            }
            grid.cells[static_cast<size_t>(iy) * window.px_w + ix] = cell;
        }
    });
    return grid;
}

ArcReport circle_scan(const FamilyParams& fam, double radius, int samples,
                      const OrbitBudget& budget, int threads)
{
    if (radius <= 0 || samples < 4) throw std::invalid_argument("circle_scan: bad arguments");
    std::vector<ParamClass> cls(static_cast<size_t>(samples));
    const int nthreads = resolve_thread_count(threads);
    parallel_for(samples, nthreads, [&](int k) {
        const Complex lambda = std::polar(radius, kTwoPi * k / samples);
        cls[static_cast<size_t>(k)] = classify_parameter(fam, lambda, budget);
    });

    ArcReport report{radius, samples, {}};
    for (int k = 0; k < samples; ++k) {
        if (!report.arcs.empty() && report.arcs.back().cls.same_class(cls[k])) {
            report.arcs.back().sample_count++;
        } else {
            Arc a;
            a.cls = cls[static_cast<size_t>(k)];
            a.first_sample = k;
            a.sample_count = 1;
            report.arcs.push_back(a);
        }
    }
    // Merge across the 0/2pi seam.
    if (report.arcs.size() > 1 &&
        report.arcs.front().cls.same_class(report.arcs.back().cls)) {
        Arc& back = report.arcs.back();
        back.sample_count += report.arcs.front().sample_count;
        report.arcs.erase(report.arcs.begin());
    }
    for (Arc& a : report.arcs) {
        a.start_angle = kTwoPi * a.first_sample / samples;
        a.end_angle = kTwoPi * (a.first_sample + a.sample_count) / samples;
    }
    return report;
}

ComponentReport flood_component(const ClassGrid& grid, int seed_x, int seed_y,
                                const std::function<bool(const ParamClass&)>& predicate,
                                std::vector<std::uint8_t>* visited)
{
    const int w = grid.window.px_w;
    const int h = grid.window.px_h;
    if (seed_x < 0 || seed_x >= w || seed_y < 0 || seed_y >= h)
        throw std::invalid_argument("flood_component: seed outside grid");
    if (!predicate(grid.at(seed_x, seed_y)))
        throw std::invalid_argument("flood_component: seed cell fails the predicate");

    std::vector<std::uint8_t> local;
    std::vector<std::uint8_t>& seen = visited ? *visited : local;
    if (seen.size() != static_cast<size_t>(w) * h)
        seen.assign(static_cast<size_t>(w) * h, 0);

    ComponentReport rep;
    rep.min_x = rep.max_x = seed_x;
    rep.min_y = rep.max_y = seed_y;
    std::deque<std::pair<int, int>> queue{{seed_x, seed_y}};
    seen[static_cast<size_t>(seed_y) * w + seed_x] = 1;
    while (!queue.empty()) {
        const auto [x, y] = queue.front();
        queue.pop_front();
        rep.cell_count++;
        rep.min_x = std::min(rep.min_x, x);
        rep.max_x = std::max(rep.max_x, x);
        rep.min_y = std::min(rep.min_y, y);
        rep.max_y = std::max(rep.max_y, y);
        if (x == 0 || y == 0 || x == w - 1 || y == h - 1) rep.touches_edge = true;
        const int nx[4] = {x - 1, x + 1, x, x};
        const int ny[4] = {y, y, y - 1, y + 1};
        for (int d = 0; d < 4; ++d) {
            if (nx[d] < 0 || nx[d] >= w || ny[d] < 0 || ny[d] >= h) continue;
            std::uint8_t& mark = seen[static_cast<size_t>(ny[d]) * w + nx[d]];
            if (mark) continue;
            if (!predicate(grid.at(nx[d], ny[d]))) continue;
            mark = 1;
            queue.emplace_back(nx[d], ny[d]);
        }
    }
    return rep;
}

Rgb class_color(const ParamClass& cls)
{
    switch (cls.tag) {
    case ParamTag::Capture: return {0, 160, 0};
    case ParamTag::VirtualCycle: return {255, 255, 255};
    case ParamTag::Undecided: return {0, 0, 0};
    case ParamTag::Shell:
        if (cls.s_index == 1) return {255, 215, 0};
        if (cls.s_index == 2) return {0, 200, 200};
        {
            Rgb out;
            hsv_to_rgb(static_cast<double>(cls.s_index - 3) * 137.50776405003785,
                       0.85, 0.95, out);
            return out;
        }
    }
    return {0, 0, 0};
}

std::string encode_ppm(const ClassGrid& grid)
{
    char header[64];
    const int len = std::snprintf(header, sizeof header, "P6\n%d %d\n255\n",
                                  grid.window.px_w, grid.window.px_h);
    std::string out(header, static_cast<size_t>(len));
    out.reserve(out.size() + grid.cells.size() * 3);
    for (const ParamClass& cell : grid.cells) {
        const Rgb c = class_color(cell);
        out.push_back(static_cast<char>(c.r));
        out.push_back(static_cast<char>(c.g));
        out.push_back(static_cast<char>(c.b));
    }
    return out;
}

std::string grid_csv(const ClassGrid& grid)
{
    std::string out = "ix,iy,re,im,class,period,mode,mult_re,mult_im,order\n";
    char line[256];
    for (int iy = 0; iy < grid.window.px_h; ++iy) {
        for (int ix = 0; ix < grid.window.px_w; ++ix) {
            const ParamClass& c = grid.at(ix, iy);
            const Complex z = grid.window.cell_center(ix, iy);
            const int len = std::snprintf(
                line, sizeof line, "%d,%d,%.17g,%.17g,%s,%d,%s,%.17g,%.17g,%d\n", ix, iy,
                z.real(), z.imag(), class_name(c.tag), c.s_index, mode_name(c.mode),
                c.multiplier.real(), c.multiplier.imag(), c.prepole_order);
            out.append(line, static_cast<size_t>(len));
        }
    }
    return out;
}

} // namespace tanpq
