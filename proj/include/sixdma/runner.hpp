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

#pragma once

#include "sixdma/config.hpp"
#include "sixdma/optimize.hpp"
#include "sixdma/scenario.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sixdma
{

enum class Scheme
{
    fpa,
    rotation_only,
    fas_ma,
    sixdma
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string &name);

// Coarse pose grid covering the feasible ball of the default site: a few
// spread-out centers, two downtilts, six azimuths.
DiscreteGrid default_run_grid();

// Everything a batch run needs, assembled from a config file plus overrides.
struct RunConfig
{
    ScenarioSpec scenario = default_scenario();
    SiteTemplate site;
    OptimizerConfig optimizer;
    DiscreteGrid grid = default_run_grid();
    FasMaConfig fas;
    std::vector<double> power_sweep_dbm{-10.0, -5.0, 0.0, 5.0, 10.0};
    std::vector<Scheme> schemes{Scheme::fpa, Scheme::rotation_only, Scheme::fas_ma, Scheme::sixdma};
    std::size_t eval_realizations = 256;
    std::size_t csm_budget = 64;
    std::size_t csm_measure_realizations = 4;
    std::uint64_t seed = 1;
    int workers = 1;
};

// Default config file contents; parsing it back reproduces RunConfig{}.
std::string default_config_text();

// Builds a RunConfig from parsed configuration, consuming every key it
// understands. Unknown keys surface through map.require_all_consumed().
RunConfig config_from_map(const ConfigMap &map);

struct LoadedConfig
{
    RunConfig run;
    std::string config_text;            // raw file bytes, hashed into the manifest
    std::vector<std::string> overrides; // "section.key=value", application order
};

// Reads the file, applies overrides, rejects unknown keys.
LoadedConfig load_run_config(const std::string &path, const std::vector<std::string> &overrides);

// Shortest decimal form that parses back to the same double.
std::string format_real(double value);

std::uint64_t fnv1a64(std::string_view bytes);

// Per-scheme, per-power evaluation result with the paired per-realization
// capacities kept for gap statistics.
struct SchemePoint
{
    Scheme scheme = Scheme::fpa;
    double power_dbm = 0.0;
    CapacityEstimate estimate;
    std::vector<double> capacities;
};

struct CompareResult
{
    std::vector<SchemePoint> points; // power-major, canonical scheme order
    std::string csv;
};

// Evaluates the fixed three-sector layout across the power sweep.
std::string run_evaluate(const RunConfig &cfg);

// Evaluates all four schemes on paired realizations across the power sweep.
// Optimized schemes are trained per power point on a separate substream;
// every scheme's point i uses the same user drop.
CompareResult run_compare(const RunConfig &cfg);

struct OptimizeResult
{
    OptimizationTrace trace;
    std::string poses_csv;
    std::string trace_csv;
};

// Runs the configured regime from the three-sector starting layout.
OptimizeResult run_optimize(const RunConfig &cfg);

std::string poses_to_csv(const std::vector<SurfacePose> &poses);
std::vector<SurfacePose> poses_from_csv(const std::string &text);

std::string manifest_text(const LoadedConfig &loaded, const std::string &schemes, double duration_s);

} // namespace sixdma
