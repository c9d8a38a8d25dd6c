// SPDX-License-Identifier: Apache-2.0
//
// sixdma - simulation and pose optimization for six-dimensional movable
// antenna (6DMA) base stations
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
//
// End-to-end tests that drive the installed binary through a shell, checking
// files and exit codes rather than library internals.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sixdma/runner.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace sixdma;
namespace fs = std::filesystem;

namespace
{

constexpr const char *kCliPath = SIXDMA_CLI_PATH;

int run_cli(const std::string &args)
{
    const std::string cmd = std::string("\"") + kCliPath + "\" " + args;
    const int status = std::system(cmd.c_str());
    return (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

std::string read_file(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

fs::path scratch_dir(const std::string &name)
{
    const fs::path dir = fs::path("cli_scratch") / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// Small scenario and site so every subcommand finishes in seconds.
fs::path write_tiny_config(const fs::path &dir)
{
    const fs::path path = dir / "tiny.ini";
    std::ofstream out(path, std::ios::binary);
    out << "[scenario]\n"
           "mean_user_count = 2\n"
           "n_nlos = 1\n"
           "[site]\n"
           "n_surfaces = 3\n"
           "[optimizer]\n"
           "max_outer_iters = 2\n"
           "candidates_per_surface = 2\n"
           "mc_realizations = 2\n"
           "[run]\n"
           "power_sweep_dbm = 0 10\n"
           "eval_realizations = 6\n"
           "seed = 7\n";
    REQUIRE(out.good());
    return path;
}

} // namespace

TEST_CASE("--version prints the version string")
{
    const fs::path dir = scratch_dir("version");
    const fs::path out = dir / "stdout.txt";
    CHECK(run_cli("--version > " + out.string()) == 0);
    CHECK(read_file(out) == "sixdma 0.1.0\n");
}

TEST_CASE("gen-scenario writes the spelled-out defaults")
{
    const fs::path dir = scratch_dir("gen");
    const fs::path out = dir / "stdout.txt";
    REQUIRE(run_cli("gen-scenario --out " + dir.string() + " > " + out.string()) == 0);
    CHECK(read_file(out).find("config.ini") != std::string::npos);

    const fs::path config = dir / "config.ini";
    CHECK(read_file(config) == default_config_text());
    const LoadedConfig loaded = load_run_config(config.string(), {});
    CHECK(loaded.run.seed == 1);
    CHECK(loaded.run.eval_realizations == 256);
    CHECK(loaded.run.schemes.size() == 4);
}

TEST_CASE("evaluate writes identical output across repeated runs")
{
    const fs::path dir = scratch_dir("eval");
    const fs::path config = write_tiny_config(dir);

    const std::string base = "evaluate --config " + config.string() + " --out ";
    REQUIRE(run_cli(base + (dir / "a").string() + " > /dev/null") == 0);
    REQUIRE(run_cli(base + (dir / "b").string() + " > /dev/null") == 0);

    const std::string csv = read_file(dir / "a" / "evaluate.csv");
    CHECK(csv == read_file(dir / "b" / "evaluate.csv"));
    CHECK(csv.find("scheme,power_dbm,mean_capacity_bps_hz,std_error,n_realizations,seed\n") == 0);
    CHECK(csv.find("fpa,0,") != std::string::npos);
    CHECK(csv.find("fpa,10,") != std::string::npos);

    const std::string manifest = read_file(dir / "a" / "evaluate.manifest");
    CHECK(manifest.find("code_version = sixdma 0.1.0\n") != std::string::npos);
    CHECK(manifest.find("master_seed = 7\n") != std::string::npos);
    CHECK(manifest.find("overrides = none\n") != std::string::npos);
}

TEST_CASE("compare output does not depend on the worker count")
{
    const fs::path dir = scratch_dir("compare");
    const fs::path config = write_tiny_config(dir);

    const std::string base = "compare --config " + config.string();
    REQUIRE(run_cli(base + " --out " + (dir / "w1").string() + " --workers 1 > /dev/null") == 0);
    REQUIRE(run_cli(base + " --out " + (dir / "w3").string() + " --workers 3 > /dev/null") == 0);

    const std::string csv = read_file(dir / "w1" / "compare.csv");
    CHECK(csv == read_file(dir / "w3" / "compare.csv"));
    CHECK(csv.find("# power=0 ordering=") != std::string::npos);
    CHECK(csv.find("pair=6dma-fpa") != std::string::npos);

    const std::string manifest = read_file(dir / "w3" / "compare.manifest");
    CHECK(manifest.find("workers = 3\n") != std::string::npos);
    CHECK(manifest.find("overrides = run.workers=3\n") != std::string::npos);
    CHECK(manifest.find("schemes = fpa,rotation_only,fas_ma,6dma\n") != std::string::npos);
}

TEST_CASE("optimize writes pose and trace tables that round-trip")
{
    const fs::path dir = scratch_dir("optimize");
    const fs::path config = write_tiny_config(dir);

    REQUIRE(run_cli("optimize --config " + config.string() + " --out " + dir.string() +
                    " --set optimizer.max_outer_iters=0 > /dev/null") == 0);

    const std::vector<SurfacePose> poses = poses_from_csv(read_file(dir / "poses.csv"));
    REQUIRE(poses.size() == 3);
    SiteTemplate tpl;
    tpl.n_surfaces = 3;
    const std::vector<SurfacePose> expected = fpa_three_sector(tpl).poses;
    for (std::size_t s = 0; s < poses.size(); ++s)
    {
        CHECK(poses[s].position == expected[s].position);
        CHECK(poses[s].rotation.alpha == expected[s].rotation.alpha);
        CHECK(poses[s].rotation.beta == expected[s].rotation.beta);
        CHECK(poses[s].rotation.gamma == expected[s].rotation.gamma);
    }

    const std::string trace = read_file(dir / "trace.csv");
    CHECK(trace.find("iteration,objective\n0,") == 0);
    const std::string manifest = read_file(dir / "poses.manifest");
    CHECK(manifest.find("overrides = optimizer.max_outer_iters=0\n") != std::string::npos);
}

TEST_CASE("missing config file fails without writing output")
{
    const fs::path dir = scratch_dir("missing");
    const fs::path err = dir / "stderr.txt";
    CHECK(run_cli("evaluate --config no_such.ini --out " + dir.string() + " 2> " + err.string()) == 1);
    CHECK(read_file(err).find("no_such.ini") != std::string::npos);
    CHECK(!fs::exists(dir / "evaluate.csv"));
}

TEST_CASE("unknown override key fails by name")
{
    const fs::path dir = scratch_dir("badkey");
    const fs::path config = write_tiny_config(dir);
    const fs::path err = dir / "stderr.txt";
    CHECK(run_cli("evaluate --config " + config.string() + " --out " + dir.string() +
                  " --set run.bogus=1 2> " + err.string()) == 1);
    CHECK(read_file(err).find("run.bogus") != std::string::npos);
    CHECK(!fs::exists(dir / "evaluate.csv"));
}
