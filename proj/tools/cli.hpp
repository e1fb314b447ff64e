#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tanpq/orbit.hpp"
#include "tanpq/render.hpp"

namespace tanpq::cli {

// Exit codes: 0 pass, 1 usage, 2 I/O, 3 verification failure, 4 inconclusive.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitVerifyFailed = 3;
inline constexpr int kExitInconclusive = 4;

enum class Subcommand { RenderParam, RenderDyn, Centers, Probe, Verify };

struct CliConfig {
    Subcommand subcommand = Subcommand::Probe;
    FamilyParams params;
    OrbitBudget budget;
    Window window = Window::square({}, 8.0, 800);
    int threads = 0;

    bool window_explicit = false;     // user set window flags (verify honors them)
    Complex lambda{};                 // render-dyn, probe
    std::string out_path;             // image / csv target
    std::string csv_path;             // optional grid dump
    int order = 2;                    // centers
    int m_lo = -2, m_hi = 2;          // centers
    std::vector<std::string> suites;  // verify
    std::string cert_dir = "certificates";
    int suite_samples = 500;
};

/// Parse argv into a validated config. Throws std::invalid_argument with a
/// user-facing message on any usage error.
CliConfig parse_args(const std::vector<std::string>& argv);

/// Execute the configured subcommand; returns a process exit code.
int run(const CliConfig& config);

/// Convenience wrapper: parse + run with usage errors mapped to exit code 1.
int main_entry(int argc, char** argv);

} // namespace tanpq::cli
