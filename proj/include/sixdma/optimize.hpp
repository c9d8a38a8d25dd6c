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

#include "sixdma/metrics.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace sixdma
{

enum class Regime
{
    continuous,
    discrete,
    csm
};

struct OptimizerConfig
{
    Regime regime = Regime::continuous;
    std::size_t max_outer_iters = 30;
    std::size_t candidates_per_surface = 8;
    double rotation_step_cap = 0.35;  // rad
    double position_step_cap = 0.25;  // m
    std::size_t mc_realizations = 64; // objective averaging depth
    std::uint64_t master_seed = 1;
    double improvement_tol = 1e-4; // bits/s/Hz
    int workers = 1;
};

void validate(const OptimizerConfig &cfg);

// Candidate pose sets for the discrete regimes: surface centers pick from
// position_levels, each rotation angle picks from its own level list.
struct DiscreteGrid
{
    std::vector<Vec3> position_levels;
    std::vector<double> alpha_levels{0.0};
    std::vector<double> beta_levels{0.0};
    std::vector<double> gamma_levels{0.0};

    std::size_t configs_per_surface() const
    {
        return position_levels.size() * alpha_levels.size() * beta_levels.size() * gamma_levels.size();
    }
};

void validate(const DiscreteGrid &grid);

struct AcceptedMove
{
    std::size_t iteration = 0;
    std::size_t surface = 0;
    double objective_before = 0.0;
    double objective_after = 0.0;
};

struct OptimizationTrace
{
    // objectives[0] is the starting value, then one entry per outer
    // iteration; non-decreasing by the acceptance rule.
    std::vector<double> objectives;
    std::vector<AcceptedMove> accepted;
    std::vector<SurfacePose> final_poses;
    // Objective at final_poses. For the discrete regimes this is the value
    // after quantization/assembly and may sit below objectives.back().
    CapacityEstimate final_estimate;
};

// Site-dependent scalar to maximize. The Monte-Carlo variants below fix
// their user drops up front so every call sees identical randomness.
using Objective = std::function<double(const SiteGeometry &)>;

// Mean capacity over n pre-drawn realizations of `scenario`. Uses the same
// substreams as monte_carlo_capacity with this master_seed.
Objective make_mc_objective(const ScenarioSpec &scenario, std::size_t n, std::uint64_t master_seed,
                            int workers = 1);

// Coordinate descent over surfaces: per surface, draws bounded random pose
// perturbations (rotations through the linearized step), projects them to
// feasibility and accepts the best candidate iff it improves the incumbent
// by more than improvement_tol. Stops after max_outer_iters or one full
// cycle without an acceptance.
OptimizationTrace alternating_optimize(const SiteGeometry &site, const OptimizerConfig &cfg,
                                       const Objective &objective);
OptimizationTrace alternating_optimize(const SiteGeometry &site, const ScenarioSpec &scenario,
                                       const OptimizerConfig &cfg);

// Angles of the re-orthonormalized product R(u) * (I + [delta]x). Throws
// when any |delta| component exceeds step_cap.
RotationAngles linearized_rotation_step(const RotationAngles &u, const Vec3 &delta, double step_cap);

// Continuous optimization followed by per-coordinate snapping to the grid
// (Euclidean for positions, circular for angles, ties to the lower level
// index). An infeasible snapped site triggers a bounded neighborhood search
// over near-optimal levels, surface by surface.
OptimizationTrace relax_and_quantize(const SiteGeometry &site, const OptimizerConfig &cfg,
                                     const DiscreteGrid &grid, const Objective &objective);
OptimizationTrace relax_and_quantize(const SiteGeometry &site, const ScenarioSpec &scenario,
                                     const OptimizerConfig &cfg, const DiscreteGrid &grid);

struct CsmOptions
{
    // Averaging depth of each training measurement.
    std::size_t measure_realizations = 4;
    int workers = 1;
    // Measurement metric override; when empty, mean capacity over
    // measure_realizations pre-drawn realizations is used.
    Objective metric;
};

// Training-based search: measures `budget` random feasible grid
// configurations (or all of them when the grid is small enough), then picks
// for every coordinate the level with the best conditional mean measurement
// and projects the assembled configuration to feasibility.
OptimizationTrace csm_optimize(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const DiscreteGrid &grid, std::size_t budget, std::uint64_t seed,
                               const CsmOptions &options = {});

struct SearchResult
{
    std::vector<SurfacePose> poses;
    double objective = 0.0;
    std::size_t n_feasible = 0;
};

// Full enumeration over the grid (frozen surfaces keep their pose), for use
// as an oracle on small instances. Ties break toward the lexicographically
// first configuration.
SearchResult exhaustive_search(const SiteGeometry &site, const DiscreteGrid &grid,
                               const Objective &objective, std::size_t config_cap = 1000000);
SearchResult exhaustive_search(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const OptimizerConfig &cfg, const DiscreteGrid &grid,
                               std::size_t config_cap = 1000000);

} // namespace sixdma
