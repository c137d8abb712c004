// Copyright 2026 The cohswap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// cohswap run <scenario> [--out-dir DIR] [--grid N] [--quad-tol TOL] [--seed S]
//
// Exit codes: 0 success, 1 I/O failure, 2 invalid scenario or arguments,
// 3 quadrature did not converge.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cohswap/scenario.hpp"

namespace {

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNonConvergence = 3;

int run(const std::string &config_path, const cohswap::RunOptions &options) {
    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "error: cannot read scenario '" << config_path << "'\n";
        return kExitIo;
    }
    std::ostringstream text;
    text << in.rdbuf();

    try {
        const cohswap::ScenarioConfig config = cohswap::parse_scenario(text.str());
        const cohswap::RunReport report = cohswap::run_scenario(config, options, text.str());
        for (const auto &rec : report.fits) {
            std::cout << rec.pattern_id << ": V = " << rec.fit.visibility;
            if (rec.fit.offset_defined) {
                std::cout << ", offset = " << rec.fit.phase_offset;
            }
            std::cout << "\n";
        }
        for (const auto &[name, phi] : report.loop_fluxes) {
            std::cout << "loop " << name << ": enclosed flux = " << phi << "\n";
        }
        for (const auto &s : report.spectral) {
            std::cout << "sigma_f/sigma_p = " << s.sigma_f / s.sigma_p
                      << ": V_closed = " << s.v_closed << ", V_quad = " << s.v_quad
                      << " (err " << s.error << ")\n";
        }
        std::cout << "wrote " << report.fringe_path.string() << ", "
                  << report.visibility_path.string() << ", "
                  << report.manifest_path.string() << "\n";
        return 0;
    } catch (const cohswap::ConfigError &e) {
        for (const auto &issue : e.issues()) {
            std::cerr << config_path << ":" << issue.line << ":" << issue.column << ": "
                      << (issue.field.empty() ? "" : issue.field + ": ") << issue.message
                      << "\n";
        }
        return kExitConfig;
    } catch (const cohswap::NonConvergenceError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNonConvergence;
    } catch (const std::filesystem::filesystem_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Conditional fringe and visibility simulator"};
    app.set_version_flag("--version", std::string(cohswap::kVersion));
    app.require_subcommand(1);

    CLI::App *run_cmd = app.add_subcommand("run", "Run a scenario file");
    std::string positional;
    std::string config_flag;
    std::string out_dir;
    std::size_t grid = 0;
    double quad_tol = 0.0;
    std::int64_t seed = 0;
    run_cmd->add_option("scenario", positional, "Scenario file");
    auto *config_opt = run_cmd->add_option("--config", config_flag, "Scenario file");
    run_cmd->add_option("--out-dir", out_dir, "Output directory")->envname("COHSWAP_OUT_DIR");
    auto *grid_opt = run_cmd->add_option("--grid", grid, "Phase grid size");
    auto *tol_opt = run_cmd->add_option("--quad-tol", quad_tol, "Quadrature tolerance");
    auto *seed_opt = run_cmd->add_option("--seed", seed, "Recorded in the manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (positional.empty() == config_opt->empty()) {
        std::cerr << "error: give the scenario either positionally or with --config\n";
        return kExitConfig;
    }
    cohswap::RunOptions options;
    options.out_dir = out_dir.empty() ? "." : out_dir;
    if (!grid_opt->empty()) {
        options.grid = grid;
    }
    if (!tol_opt->empty()) {
        options.quad_tolerance = quad_tol;
    }
    if (!seed_opt->empty()) {
        options.seed = seed;
    }
    return run(positional.empty() ? config_flag : positional, options);
}
