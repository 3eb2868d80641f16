// SPDX-License-Identifier: Apache-2.0
//
// cfmimo: mobility-aware cell-free massive MIMO simulator for mmWave bands
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// cfsim: run a Monte Carlo campaign and write its result files.
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error.

#include "cfmimo/cfmimo.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Cell-free massive MIMO mmWave simulator with user mobility and hysteresis handover"};
    app.set_version_flag("--version", std::string(cfmimo::kToolVersion));

    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;
    std::optional<int> drops;
    std::optional<int> workers;
    std::string scheme;
    std::string out_dir = "results";
    bool quiet = false;
    bool print_config = false;

    app.add_option("--config", config_path, "Configuration file (flat KEY = VALUE lines)")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override one key, e.g. --set assoc.zeta_ho=0.2 (repeatable)");
    app.add_option("--seed", seed, "Master seed");
    app.add_option("--drops", drops, "Number of independent drops");
    app.add_option("--scheme", scheme, "Beamforming scheme")
        ->check(CLI::IsMember({"ltb-di", "ltb-ci", "stb-di", "stb-ci", "abf"}));
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--workers", workers, "Concurrent drops");
    app.add_flag("--quiet", quiet, "No progress output");
    app.add_flag("--print-config", print_config, "Print the resolved configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // Dedicated flags are applied after --config / --set.
    if (seed)
        overrides.push_back("sim.seed=" + std::to_string(*seed));
    if (drops)
        overrides.push_back("sim.drops=" + std::to_string(*drops));
    if (workers)
        overrides.push_back("sim.workers=" + std::to_string(*workers));
    if (!scheme.empty())
        overrides.push_back("sim.scheme=" + scheme);

    cfmimo::SystemConfig cfg;
    try {
        cfg = config_path.empty() ? cfmimo::parse_config("", overrides)
                                  : cfmimo::parse_config_file(config_path, overrides);
    } catch (const cfmimo::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    }

    if (print_config) {
        std::cout << cfmimo::to_config_text(cfg);
        return 0;
    }

    try {
        const std::string started = utc_now();
        cfmimo::ProgressCallback progress;
        if (!quiet)
            progress = [](int done, int total) {
                std::fprintf(stderr, "\rdrops %d/%d", done, total);
                if (done == total)
                    std::fputc('\n', stderr);
            };
        const cfmimo::CampaignSummary summary = cfmimo::run_campaign(cfg, progress);
        const cfmimo::RunManifest manifest = cfmimo::emit_results(summary, out_dir, started, utc_now());
        if (!quiet) {
            std::cout << "scheme " << cfmimo::to_string(cfg.scheme) << ", " << summary.drops.size() << " drops, "
                      << summary.pooled_rates.size() << " rate samples\n"
                      << "median rate      " << summary.median_rate_bps / 1e6 << " Mbps\n"
                      << "95%-likely rate  " << summary.likely95_rate_bps / 1e6 << " Mbps\n"
                      << "handovers        " << summary.total_handovers << " ("
                      << summary.handovers_per_ue_per_minute << " per UE per minute)\n"
                      << "results in " << out_dir << " (" << manifest.files.size() << " files)\n";
        }
    } catch (const cfmimo::ConfigError &e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
