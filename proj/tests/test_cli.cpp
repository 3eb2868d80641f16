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

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

int run(const std::string &args) {
    const std::string cmd = std::string(CFSIM_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char *kSmall = "--set net.M=10 --set net.K=3 --set net.N_AP=4 --set net.N_UE=2 --set net.N_s=10 "
                     "--set assoc.N_UC=2 --set sim.epochs=2 --set time.tau_s=448 --set time.tau_c=224 --drops 1";

} // namespace

TEST(Cli, RunWritesResults) {
    const fs::path out = fs::temp_directory_path() / "cfmimo_cli_out";
    fs::remove_all(out);
    EXPECT_EQ(run(std::string(kSmall) + " --quiet --scheme stb-ci --out " + out.string()), 0);
    for (const char *f : {"rates.csv", "cdf.csv", "summary.json", "handovers.csv", "manifest.json"})
        EXPECT_TRUE(fs::exists(out / f)) << f;
    fs::remove_all(out);
}

TEST(Cli, InformationalFlags) {
    EXPECT_EQ(run("--version"), 0);
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("--print-config --set net.M=50"), 0);
}

TEST(Cli, ConfigurationErrorsExitOne) {
    EXPECT_EQ(run("--set net.M=0 --print-config"), 1);
    EXPECT_EQ(run("--set net.bogus=1 --print-config"), 1);
    EXPECT_EQ(run("--scheme zf"), 1);
    EXPECT_EQ(run("--no-such-flag"), 1);
    EXPECT_EQ(run("--config /nonexistent/file.cfg"), 1);
}

TEST(Cli, ConfigFileAndOverrides) {
    const fs::path cfg = fs::temp_directory_path() / "cfmimo_cli.cfg";
    std::ofstream(cfg) << "net.M = 0\n";
    EXPECT_EQ(run("--config " + cfg.string() + " --print-config"), 1);
    EXPECT_EQ(run("--config " + cfg.string() + " --set net.M=20 --print-config"), 0);
    fs::remove(cfg);
}

TEST(Cli, RuntimeErrorsExitTwo) {
    const fs::path blocker = fs::temp_directory_path() / "cfmimo_cli_blocker";
    std::ofstream(blocker) << "x";
    EXPECT_EQ(run(std::string(kSmall) + " --quiet --out " + (blocker / "sub").string()), 2);
    fs::remove(blocker);
}
