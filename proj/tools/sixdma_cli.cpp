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

#include "sixdma/runner.hpp"
#include "sixdma/version.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

namespace fs = std::filesystem;

void write_file(const fs::path &path, const std::string &content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out)
        throw std::runtime_error("write failed for '" + path.string() + "'");
}

struct CommonArgs
{
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
};

void add_common_options(CLI::App *cmd, CommonArgs &args, bool needs_config)
{
    if (needs_config)
        cmd->add_option("--config", args.config_path, "run configuration file")->required();
    cmd->add_option("--out", args.out_dir, "output directory (created if missing)");
    cmd->add_option("--set", args.sets, "override, section.key=value (repeatable)");
    cmd->add_option("--seed", args.seed, "override run.seed");
    cmd->add_option("--workers", args.workers, "override run.workers");
}

sixdma::LoadedConfig load(const CommonArgs &args)
{
    std::vector<std::string> overrides = args.sets;
    if (args.seed)
        overrides.push_back("run.seed=" + std::to_string(*args.seed));
    if (args.workers)
        overrides.push_back("run.workers=" + std::to_string(*args.workers));
    return sixdma::load_run_config(args.config_path, overrides);
}

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string enabled_schemes(const sixdma::RunConfig &cfg)
{
    std::string out;
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i)
    {
        if (i != 0)
            out += ',';
        out += sixdma::scheme_name(cfg.schemes[i]);
    }
    return out;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"6DMA base-station simulator and pose optimizer"};
    app.set_version_flag("--version", std::string(sixdma::kVersionString));
    app.require_subcommand(1);

    CommonArgs args;
    CLI::App *cmd_evaluate =
        app.add_subcommand("evaluate", "evaluate the fixed three-sector layout over the power sweep");
    add_common_options(cmd_evaluate, args, true);
    CLI::App *cmd_compare =
        app.add_subcommand("compare", "evaluate all four schemes on paired realizations");
    add_common_options(cmd_compare, args, true);
    CLI::App *cmd_optimize =
        app.add_subcommand("optimize", "run the configured pose-optimization regime");
    add_common_options(cmd_optimize, args, true);
    CLI::App *cmd_gen =
        app.add_subcommand("gen-scenario", "write a config file with all defaults spelled out");
    add_common_options(cmd_gen, args, false);

    CLI11_PARSE(app, argc, argv);

    try
    {
        const fs::path out_dir(args.out_dir);
        fs::create_directories(out_dir);

        if (cmd_gen->parsed())
        {
            const fs::path path = out_dir / "config.ini";
            write_file(path, sixdma::default_config_text());
            std::cout << path.string() << "\n";
            return 0;
        }

        const auto start = std::chrono::steady_clock::now();
        const sixdma::LoadedConfig loaded = load(args);

        if (cmd_evaluate->parsed())
        {
            const std::string csv = sixdma::run_evaluate(loaded.run);
            write_file(out_dir / "evaluate.csv", csv);
            write_file(out_dir / "evaluate.manifest",
                       sixdma::manifest_text(loaded, "fpa", seconds_since(start)));
            std::cout << (out_dir / "evaluate.csv").string() << "\n";
        }
        else if (cmd_compare->parsed())
        {
            const sixdma::CompareResult result = sixdma::run_compare(loaded.run);
            write_file(out_dir / "compare.csv", result.csv);
            write_file(out_dir / "compare.manifest",
                       sixdma::manifest_text(loaded, enabled_schemes(loaded.run), seconds_since(start)));
            std::cout << (out_dir / "compare.csv").string() << "\n";
        }
        else if (cmd_optimize->parsed())
        {
            const sixdma::OptimizeResult result = sixdma::run_optimize(loaded.run);
            write_file(out_dir / "poses.csv", result.poses_csv);
            write_file(out_dir / "poses.manifest",
                       sixdma::manifest_text(loaded, "optimize", seconds_since(start)));
            write_file(out_dir / "trace.csv", result.trace_csv);
            write_file(out_dir / "trace.manifest",
                       sixdma::manifest_text(loaded, "optimize", seconds_since(start)));
            std::cout << (out_dir / "poses.csv").string() << "\n";
        }
        return 0;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
