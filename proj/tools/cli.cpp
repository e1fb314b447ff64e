#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tanpq/centers.hpp"
#include "tanpq/complex_format.hpp"
#include "tanpq/theorem_lab.hpp"

namespace tanpq::cli {

namespace {

constexpr int kMaxCenterOrder = 5;

std::pair<int, int> parse_m_range(const std::string& text)
{
    const size_t pos = text.find("..");
    try {
        if (pos == std::string::npos) {
            const int m = std::stoi(text);
            return {m, m};
        }
        const int lo = std::stoi(text.substr(0, pos));
        const int hi = std::stoi(text.substr(pos + 2));
        if (lo > hi) throw std::invalid_argument("");
        return {lo, hi};
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed m-range '" + text + "' (expected a..b)");
    }
}

std::pair<int, int> parse_resolution(const std::string& text)
{
    const size_t pos = text.find('x');
    try {
        if (pos == std::string::npos) {
            const int n = std::stoi(text);
            if (n <= 0) throw std::invalid_argument("");
            return {n, n};
        }
        const int w = std::stoi(text.substr(0, pos));
        const int h = std::stoi(text.substr(pos + 1));
        if (w <= 0 || h <= 0) throw std::invalid_argument("");
        return {w, h};
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed resolution '" + text + "' (expected N or WxH)");
    }
}

bool write_file(const std::string& path, const std::string& bytes)
{
    if (const auto dir = std::filesystem::path(path).parent_path(); !dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) return false;
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    return static_cast<bool>(out);
}

nlohmann::json complex_json(Complex z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

int run_render(const CliConfig& cfg, bool dynamical)
{
    const ClassGrid grid =
        dynamical
            ? render_dynamical_plane(cfg.params, cfg.lambda, cfg.window, cfg.budget, cfg.threads)
            : render_parameter_plane(cfg.params, cfg.window, cfg.budget, cfg.threads);
    if (!write_file(cfg.out_path, encode_ppm(grid))) {
        std::cerr << "error: cannot write '" << cfg.out_path << "'\n";
        return kExitIo;
    }
    if (!cfg.csv_path.empty() && !write_file(cfg.csv_path, grid_csv(grid))) {
        std::cerr << "error: cannot write '" << cfg.csv_path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_centers(const CliConfig& cfg)
{
    std::vector<VirtualCenter> centers;
    if (cfg.order == 2) {
        centers = period2_centers(cfg.params, cfg.m_lo, cfg.m_hi);
    } else {
        centers = find_virtual_centers_in_window(
            cfg.params, cfg.order, cfg.m_lo, cfg.m_hi, cfg.window.center, cfg.window.width,
            cfg.window.height, 24, cfg.budget);
    }
    const std::string csv = centers_csv(centers);
    if (cfg.out_path.empty()) {
        std::cout << csv;
        return kExitOk;
    }
    if (!write_file(cfg.out_path, csv)) {
        std::cerr << "error: cannot write '" << cfg.out_path << "'\n";
        return kExitIo;
    }
    return kExitOk;
}

int run_probe(const CliConfig& cfg)
{
    const Classification c = classify_parameter_full(cfg.params, cfg.lambda, cfg.budget);
    nlohmann::json j;
    j["params"] = {{"p", cfg.params.p}, {"q", cfg.params.q}};
    j["lambda"] = complex_json(cfg.lambda);
    j["asymptotic_value"] = complex_json(free_asymptotic_value(cfg.params, cfg.lambda));
    switch (c.cls.tag) {
    case ParamTag::Shell: {
        j["outcome"] = "shell";
        j["s_index"] = c.cls.s_index;
        j["raw_period"] = c.cls.raw_period;
        if (c.cls.mode == ShellMode::TwoCycles) j["mode"] = "two";
        else if (c.cls.mode == ShellMode::DoubledCycle) j["mode"] = "doubled";
        j["multiplier"] = complex_json(c.cls.multiplier);
        nlohmann::json pts = nlohmann::json::array();
        for (const Complex& z : c.outcome.cycle.points) pts.push_back(complex_json(z));
        j["cycle"] = pts;
        break;
    }
    case ParamTag::Capture:
        j["outcome"] = "capture";
        break;
    case ParamTag::VirtualCycle:
        j["outcome"] = "virtualcycle";
        j["prepole_order"] = c.cls.prepole_order;
        break;
    case ParamTag::Undecided:
        j["outcome"] = "undecided";
        break;
    }
    const std::string text = j.dump(2) + "\n";
    if (cfg.out_path.empty()) {
        std::cout << text;
        return kExitOk;
    }
    return write_file(cfg.out_path, text) ? kExitOk : kExitIo;
}

int run_verify(const CliConfig& cfg)
{
    SuiteOptions opt;
    opt.budget = cfg.budget;
    opt.threads = cfg.threads;
    opt.samples = cfg.suite_samples;
    opt.artifact_dir = cfg.cert_dir;
    if (cfg.window_explicit) opt.s2_window = cfg.window;

    const std::vector<Certificate> certs = run_suite(cfg.params, cfg.suites, opt);
    bool all_passed = true;
    bool any_inconclusive = false;
    for (const Certificate& cert : certs) {
        const std::string path = cfg.cert_dir + "/" + cert.name + "-p" +
                                 std::to_string(cfg.params.p) + "q" +
                                 std::to_string(cfg.params.q) + ".json";
        if (!write_file(path, certificate_json(cert) + "\n")) {
            std::cerr << "error: cannot write '" << path << "'\n";
            return kExitIo;
        }
        std::printf("%-16s p=%d q=%d  %s\n", cert.name.c_str(), cfg.params.p, cfg.params.q,
                    cert.inconclusive ? "INCONCLUSIVE" : (cert.passed ? "PASS" : "FAIL"));
        all_passed = all_passed && cert.passed;
        any_inconclusive = any_inconclusive || cert.inconclusive;
    }
    if (any_inconclusive) return kExitInconclusive;
    return all_passed ? kExitOk : kExitVerifyFailed;
}

} // namespace

CliConfig parse_args(const std::vector<std::string>& argv)
{
    CLI::App app{"numerical laboratory for the family lambda tan^p(z^q)", "tanpq"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string center_text = "0+0i";
    std::string lambda_text;
    std::string res_text = "800";
    std::string m_range_text = "-2..2";
    double width = 8.0;
    double height = 0.0; // 0: derived from width and the pixel aspect

    const auto add_common = [&](CLI::App* sub, bool needs_budget) {
        sub->add_option("--p", cfg.params.p, "outer power p >= 1")->required();
        sub->add_option("--q", cfg.params.q, "inner power q >= 1")->required();
        sub->add_option("--threads", cfg.threads, "worker threads (default: hardware)");
        if (needs_budget) {
            sub->add_option("--max-iter", cfg.budget.max_iter);
            sub->add_option("--warmup", cfg.budget.warmup);
            sub->add_option("--max-period", cfg.budget.max_period);
            sub->add_option("--cycle-tol", cfg.budget.cycle_tol);
            sub->add_option("--attract-tol", cfg.budget.attract_tol);
            sub->add_option("--zero-tol", cfg.budget.zero_tol);
            sub->add_option("--pole-tol", cfg.budget.pole_tol);
        }
    };
    std::vector<CLI::Option*> window_opts;
    const auto add_window = [&](CLI::App* sub) {
        window_opts.push_back(sub->add_option("--center", center_text, "window center as a+bi"));
        window_opts.push_back(sub->add_option("--width", width, "window width"));
        window_opts.push_back(
            sub->add_option("--height", height, "window height (default: width * aspect)"));
        window_opts.push_back(sub->add_option("--res", res_text, "resolution N or WxH"));
    };

    CLI::App* rp = app.add_subcommand("render-param", "render the parameter plane");
    add_common(rp, true);
    add_window(rp);
    rp->add_option("--out", cfg.out_path, "output PPM path")->required();
    rp->add_option("--csv", cfg.csv_path, "optional grid CSV dump");

    CLI::App* rd = app.add_subcommand("render-dyn", "render a dynamical plane");
    add_common(rd, true);
    add_window(rd);
    rd->add_option("--lambda", lambda_text, "parameter as a+bi")->required();
    rd->add_option("--out", cfg.out_path, "output PPM path")->required();
    rd->add_option("--csv", cfg.csv_path, "optional grid CSV dump");

    CLI::App* ce = app.add_subcommand("centers", "virtual cycle parameters");
    add_common(ce, true);
    add_window(ce);
    ce->add_option("--order", cfg.order, "center order k (2..5)");
    ce->add_option("--m-range", m_range_text, "pole range a..b");
    ce->add_option("--out", cfg.out_path, "CSV path (default: stdout)");

    CLI::App* pr = app.add_subcommand("probe", "classify a single parameter");
    add_common(pr, true);
    pr->add_option("--lambda", lambda_text, "parameter as a+bi")->required();
    pr->add_option("--out", cfg.out_path, "JSON path (default: stdout)");

    CLI::App* ve = app.add_subcommand("verify", "run theorem verification suites");
    add_common(ve, true);
    add_window(ve);
    ve->add_option("--suite", cfg.suites, "suite names or 'all'")->required();
    ve->add_option("--out-dir", cfg.cert_dir, "certificate directory");
    ve->add_option("--samples", cfg.suite_samples, "random samples per suite");

    std::vector<std::string> args(argv.rbegin(), argv.rend());
    if (!args.empty()) args.pop_back(); // program name
    try {
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        throw std::invalid_argument(e.what());
    }

    if (rp->parsed()) cfg.subcommand = Subcommand::RenderParam;
    else if (rd->parsed()) cfg.subcommand = Subcommand::RenderDyn;
    else if (ce->parsed()) cfg.subcommand = Subcommand::Centers;
    else if (pr->parsed()) cfg.subcommand = Subcommand::Probe;
    else cfg.subcommand = Subcommand::Verify;

    if (!cfg.params.valid()) throw std::invalid_argument("p and q must be >= 1");
    if (!cfg.budget.valid()) throw std::invalid_argument("invalid orbit budget");

    const auto [px_w, px_h] = parse_resolution(res_text);
    if (height <= 0.0) height = width * static_cast<double>(px_h) / px_w;
    cfg.window = {parse_complex(center_text), width, height, px_w, px_h};
    if (!cfg.window.valid()) throw std::invalid_argument("invalid window");
    for (const CLI::Option* o : window_opts)
        if (o->count() > 0) cfg.window_explicit = true;

    if (!lambda_text.empty()) cfg.lambda = parse_complex(lambda_text);
    if ((cfg.subcommand == Subcommand::RenderDyn || cfg.subcommand == Subcommand::Probe) &&
        cfg.lambda == Complex{})
        throw std::invalid_argument("lambda must be nonzero");

    std::tie(cfg.m_lo, cfg.m_hi) = parse_m_range(m_range_text);
    if (cfg.subcommand == Subcommand::Centers) {
        if (cfg.order < 2 || cfg.order > kMaxCenterOrder)
            throw std::invalid_argument("order cap exceeded: supported orders are 2.." +
                                        std::to_string(kMaxCenterOrder));
    }
    return cfg;
}

int run(const CliConfig& cfg)
{
    switch (cfg.subcommand) {
    case Subcommand::RenderParam: return run_render(cfg, false);
    case Subcommand::RenderDyn: return run_render(cfg, true);
    case Subcommand::Centers: return run_centers(cfg);
    case Subcommand::Probe: return run_probe(cfg);
    case Subcommand::Verify: return run_verify(cfg);
    }
    return kExitUsage;
}

int main_entry(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    try {
        const CliConfig cfg = parse_args(args);
        return run(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace tanpq::cli
