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

// Result files of a campaign:
//
//   rates.csv      drop,epoch,block,ue,sinr_db,rate_bps
//   cdf.csv        rate_bps,cdf
//   summary.json   median / 95%-likely rate, handover statistics
//   handovers.csv  drop,epoch,ue,ap_out,ap_in
//   manifest.json  resolved configuration, timestamps, file inventory
//
// Floating-point values carry 17 significant digits. summary.json holds no
// timestamps or worker counts and is byte-identical for identical
// (configuration, seed).

#ifndef CFMIMO_OUTPUT_HPP
#define CFMIMO_OUTPUT_HPP

#include "cfmimo/config.hpp"
#include "cfmimo/config_io.hpp"
#include "cfmimo/engine.hpp"
#include "cfmimo/text.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfmimo {

inline constexpr const char *kToolVersion = "1.0.0";

class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct RunManifest {
    std::string config_text; // to_config_text() of the resolved configuration
    std::uint64_t seed = 0;
    std::string version = kToolVersion;
    std::string started_utc;
    std::string finished_utc;
    std::vector<std::string> files;
};

namespace detail {

inline std::string json_number(double v) { return std::isfinite(v) ? format_double(v) : "null"; }

inline std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

} // namespace detail

inline std::string rates_csv(const CampaignSummary &s) {
    std::string out = "drop,epoch,block,ue,sinr_db,rate_bps\n";
    for (const DropResult &d : s.drops)
        for (const RateSample &r : d.samples) {
            out += std::to_string(d.drop);
            out += ',';
            out += std::to_string(r.epoch);
            out += ',';
            out += std::to_string(r.block);
            out += ',';
            out += std::to_string(r.ue);
            out += ',';
            out += format_double(10.0 * std::log10(r.sinr));
            out += ',';
            out += format_double(r.rate_bps);
            out += '\n';
        }
    return out;
}

inline std::string cdf_csv(const CampaignSummary &s) {
    std::string out = "rate_bps,cdf\n";
    for (const CdfPoint &p : s.cdf) {
        out += format_double(p.rate_bps);
        out += ',';
        out += format_double(p.cdf);
        out += '\n';
    }
    return out;
}

inline std::string handovers_csv(const CampaignSummary &s) {
    std::string out = "drop,epoch,ue,ap_out,ap_in\n";
    for (const DropResult &d : s.drops)
        for (const HandoverEvent &e : d.handovers)
            out += std::to_string(d.drop) + ',' + std::to_string(e.epoch) + ',' + std::to_string(e.ue) + ',' +
                   std::to_string(e.ap_out) + ',' + std::to_string(e.ap_in) + '\n';
    return out;
}

// Deterministic summary payload, fixed key order.
inline std::string summary_json(const CampaignSummary &s) {
    using detail::json_number;
    const SystemConfig &c = s.config;
    std::string o = "{\n";
    auto field = [&o](std::string_view key, const std::string &value, bool last = false) {
        o += "  ";
        o += detail::json_string(key);
        o += ": ";
        o += value;
        o += last ? "\n" : ",\n";
    };
    field("scheme", detail::json_string(to_string(c.scheme)));
    field("seed", std::to_string(c.seed));
    field("drops", std::to_string(s.drops.size()));
    field("epochs", std::to_string(c.epochs));
    field("blocks_per_epoch", std::to_string(blocks_per_epoch(c)));
    field("samples", std::to_string(s.pooled_rates.size()));
    field("median_rate_bps", json_number(s.median_rate_bps));
    field("likely95_rate_bps", json_number(s.likely95_rate_bps));
    field("total_handovers", std::to_string(s.total_handovers));
    field("handovers_per_ue_per_minute", json_number(s.handovers_per_ue_per_minute));

    std::string per_ue = "[";
    for (std::size_t k = 0; k < s.handovers_per_ue.size(); ++k)
        per_ue += (k ? ", " : "") + std::to_string(s.handovers_per_ue[k]);
    per_ue += "]";
    field("handovers_per_ue", per_ue);

    std::string seeds = "[";
    for (std::size_t d = 0; d < s.drop_seeds.size(); ++d)
        seeds += (d ? ", " : "") + std::to_string(s.drop_seeds[d]);
    seeds += "]";
    field("drop_seeds", seeds);

    const DropDiagnostics &g = s.diagnostics;
    std::string diag = "{";
    diag += "\"eigen_nonconverged\": " + std::to_string(g.eigen_nonconverged);
    diag += ", \"division_guards\": " + std::to_string(g.division_guards);
    diag += ", \"degenerate_beams\": " + std::to_string(g.degenerate_beams);
    diag += ", \"gain_evolutions\": " + std::to_string(g.gain_evolutions);
    diag += ", \"gain_resets\": " + std::to_string(g.gain_resets);
    diag += ", \"geometry_updates\": " + std::to_string(g.geometry_updates);
    diag += ", \"link_redraws\": " + std::to_string(g.link_redraws);
    diag += ", \"truncated_pairs\": " + std::to_string(g.truncated_pairs);
    diag += "}";
    field("diagnostics", diag, true);
    o += "}\n";
    return o;
}

inline std::string manifest_json(const RunManifest &m) {
    nlohmann::ordered_json j;
    j["version"] = m.version;
    j["seed"] = m.seed;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    std::string_view text = m.config_text;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            continue;
        cfg[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
    }
    j["config"] = cfg;
    j["files"] = m.files;
    return j.dump(2) + "\n";
}

// Writes all result files into `out_dir` (created if missing). Files are
// staged under temporary names and renamed once all writes succeeded; on
// failure every staged or renamed file is removed.
inline RunManifest emit_results(const CampaignSummary &s, const std::filesystem::path &out_dir,
                                std::string started_utc = {}, std::string finished_utc = {}) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec || !fs::is_directory(out_dir))
        throw OutputError("cannot create output directory '" + out_dir.string() + "'");

    RunManifest manifest;
    manifest.config_text = to_config_text(s.config);
    manifest.seed = s.config.seed;
    manifest.started_utc = std::move(started_utc);
    manifest.finished_utc = std::move(finished_utc);
    manifest.files = {"rates.csv", "cdf.csv", "summary.json", "handovers.csv", "manifest.json"};

    const std::vector<std::pair<std::string, std::string>> payloads = {
        {"rates.csv", rates_csv(s)},
        {"cdf.csv", cdf_csv(s)},
        {"summary.json", summary_json(s)},
        {"handovers.csv", handovers_csv(s)},
        {"manifest.json", manifest_json(manifest)},
    };

    std::vector<fs::path> staged;
    std::vector<fs::path> committed;
    auto cleanup = [&] {
        std::error_code ignore;
        for (const auto &p : staged)
            fs::remove(p, ignore);
        for (const auto &p : committed)
            fs::remove(p, ignore);
    };
    try {
        for (const auto &[name, body] : payloads) {
            const fs::path tmp = out_dir / (name + ".partial");
            staged.push_back(tmp);
            std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
            if (!f)
                throw OutputError("cannot write '" + tmp.string() + "'");
            f.write(body.data(), static_cast<std::streamsize>(body.size()));
            f.close();
            if (!f)
                throw OutputError("write failed for '" + tmp.string() + "'");
        }
        for (std::size_t i = 0; i < payloads.size(); ++i) {
            const fs::path dst = out_dir / payloads[i].first;
            fs::rename(staged[i], dst);
            committed.push_back(dst);
        }
        staged.clear();
    } catch (const fs::filesystem_error &e) {
        cleanup();
        throw OutputError(e.what());
    } catch (...) {
        cleanup();
        throw;
    }
    return manifest;
}

} // namespace cfmimo

#endif
