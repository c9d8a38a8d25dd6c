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

#include "sixdma/optimize.hpp"

#include "sixdma/parallel.hpp"
#include "sixdma/summation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace sixdma
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double circular_distance(double a, double b)
{
    const double d = std::abs(normalize_angle(a) - normalize_angle(b));
    return std::min(d, kTwoPi - d);
}

std::vector<std::size_t> movable_indices(const SiteGeometry &site)
{
    std::vector<std::size_t> out;
    for (std::size_t s = 0; s < site.surface_count(); ++s)
        if (!site.poses[s].frozen)
            out.push_back(s);
    return out;
}

void require_feasible(const SiteGeometry &site, const char *who)
{
    const ConstraintReport report = check_constraints(site);
    if (!report.feasible())
        throw std::invalid_argument(std::string(who) + ": infeasible site geometry: " + report.describe());
}

} // namespace

void validate(const OptimizerConfig &cfg)
{
    if (cfg.candidates_per_surface == 0)
        throw std::invalid_argument("OptimizerConfig: candidates_per_surface must be at least 1");
    if (cfg.rotation_step_cap < 0.0 || cfg.position_step_cap < 0.0)
        throw std::invalid_argument("OptimizerConfig: step caps must be nonnegative");
    if (cfg.rotation_step_cap == 0.0 && cfg.position_step_cap == 0.0)
        throw std::invalid_argument("OptimizerConfig: at least one step cap must be positive");
    if (cfg.mc_realizations == 0)
        throw std::invalid_argument("OptimizerConfig: mc_realizations must be at least 1");
    if (cfg.improvement_tol < 0.0)
        throw std::invalid_argument("OptimizerConfig: improvement_tol must be nonnegative");
    if (cfg.workers < 1)
        throw std::invalid_argument("OptimizerConfig: workers must be at least 1");
}

void validate(const DiscreteGrid &grid)
{
    if (grid.position_levels.empty())
        throw std::invalid_argument("DiscreteGrid: position_levels must be nonempty");
    for (std::size_t i = 0; i < grid.position_levels.size(); ++i)
        for (std::size_t j = i + 1; j < grid.position_levels.size(); ++j)
            if (grid.position_levels[i] == grid.position_levels[j])
                throw std::invalid_argument("DiscreteGrid: duplicate position level");
    auto check_angles = [](const std::vector<double> &levels, const char *name) {
        if (levels.empty())
            throw std::invalid_argument(std::string("DiscreteGrid: ") + name + " must be nonempty");
        for (std::size_t i = 0; i < levels.size(); ++i)
        {
            if (levels[i] < 0.0 || levels[i] >= kTwoPi)
                throw std::invalid_argument(std::string("DiscreteGrid: ") + name +
                                            " must lie in [0, 2*pi)");
            if (i > 0 && !(levels[i] > levels[i - 1]))
                throw std::invalid_argument(std::string("DiscreteGrid: ") + name +
                                            " must be strictly increasing");
        }
    };
    check_angles(grid.alpha_levels, "alpha_levels");
    check_angles(grid.beta_levels, "beta_levels");
    check_angles(grid.gamma_levels, "gamma_levels");
}

Objective make_mc_objective(const ScenarioSpec &scenario, std::size_t n, std::uint64_t master_seed,
                            int workers)
{
    if (n == 0)
        throw std::invalid_argument("make_mc_objective: need at least one realization");
    auto users = std::make_shared<std::vector<UserRealization>>(
        sample_user_sets(scenario, n, master_seed, workers));
    const ScenarioSpec scen = scenario;
    return [users, scen, workers](const SiteGeometry &site) {
        std::vector<double> caps(users->size());
        parallel_for(users->size(), workers, [&](std::size_t i) {
            caps[i] = capacity_of_realization(site, scen, (*users)[i]);
        });
        return pairwise_sum(caps) / static_cast<double>(caps.size());
    };
}

RotationAngles linearized_rotation_step(const RotationAngles &u, const Vec3 &delta, double step_cap)
{
    if (!(step_cap > 0.0))
        throw std::invalid_argument("linearized_rotation_step: step cap must be positive");
    if (delta.lpNorm<Eigen::Infinity>() > step_cap)
        throw std::invalid_argument("linearized_rotation_step: delta exceeds the step cap");
    if (delta.isZero(0.0))
        return u;
    const Mat3 stepped = rotation_matrix(u) * (Mat3::Identity() + skew(delta));
    return rotation_angles_from_matrix(nearest_rotation(stepped));
}

OptimizationTrace alternating_optimize(const SiteGeometry &site, const OptimizerConfig &cfg,
                                       const Objective &objective)
{
    validate(cfg);
    if (!objective)
        throw std::invalid_argument("alternating_optimize: objective is empty");
    require_feasible(site, "alternating_optimize");

    SiteGeometry cur = site;
    OptimizationTrace trace;
    double incumbent = objective(cur);
    trace.objectives.push_back(incumbent);

    const std::vector<std::size_t> movable = movable_indices(cur);
    const RngStream root(cfg.master_seed);

    for (std::size_t iter = 0; iter < cfg.max_outer_iters; ++iter)
    {
        bool any_accept = false;
        for (std::size_t s : movable)
        {
            double best_val = -std::numeric_limits<double>::infinity();
            std::vector<SurfacePose> best_poses;
            for (std::size_t c = 0; c < cfg.candidates_per_surface; ++c)
            {
                RngStream cs = root.child(stream_tag::candidates, iter).child(s, c);
                SurfacePose cand = cur.poses[s];
                if (cfg.rotation_step_cap > 0.0)
                {
                    const Vec3 du(cs.uniform(-cfg.rotation_step_cap, cfg.rotation_step_cap),
                                  cs.uniform(-cfg.rotation_step_cap, cfg.rotation_step_cap),
                                  cs.uniform(-cfg.rotation_step_cap, cfg.rotation_step_cap));
                    cand.rotation = linearized_rotation_step(cand.rotation, du, cfg.rotation_step_cap);
                }
                if (cfg.position_step_cap > 0.0)
                {
                    cand.position += Vec3(cs.uniform(-cfg.position_step_cap, cfg.position_step_cap),
                                          cs.uniform(-cfg.position_step_cap, cfg.position_step_cap),
                                          cs.uniform(-cfg.position_step_cap, cfg.position_step_cap));
                }

                std::vector<SurfacePose> proposal = cur.poses;
                proposal[s] = cand;
                std::vector<SurfacePose> projected;
                try
                {
                    projected = project_to_feasible(cur, proposal);
                }
                catch (const std::runtime_error &)
                {
                    continue; // unrepairable candidate
                }

                SiteGeometry probe = cur;
                probe.poses = std::move(projected);
                const double val = objective(probe);
                if (val > best_val)
                {
                    best_val = val;
                    best_poses = std::move(probe.poses);
                }
            }

            if (best_val > incumbent + cfg.improvement_tol)
            {
                trace.accepted.push_back({iter, s, incumbent, best_val});
                cur.poses = std::move(best_poses);
                incumbent = best_val;
                any_accept = true;
            }
        }
        trace.objectives.push_back(incumbent);
        if (!any_accept)
            break;
    }

    trace.final_poses = cur.poses;
    trace.final_estimate = {incumbent, 0.0, 1};
    return trace;
}

OptimizationTrace alternating_optimize(const SiteGeometry &site, const ScenarioSpec &scenario,
                                       const OptimizerConfig &cfg)
{
    if (cfg.regime != Regime::continuous)
        throw std::invalid_argument("alternating_optimize: regime must be 'continuous'");
    const Objective objective =
        make_mc_objective(scenario, cfg.mc_realizations, cfg.master_seed, cfg.workers);
    OptimizationTrace trace = alternating_optimize(site, cfg, objective);
    SiteGeometry final_site = site;
    final_site.poses = trace.final_poses;
    trace.final_estimate =
        monte_carlo_capacity(final_site, scenario, cfg.mc_realizations, cfg.master_seed, cfg.workers);
    return trace;
}

namespace
{

// Per-surface level assignment into a DiscreteGrid.
struct GridChoice
{
    std::size_t pos = 0;
    std::size_t alpha = 0;
    std::size_t beta = 0;
    std::size_t gamma = 0;
};

SurfacePose pose_from_choice(const DiscreteGrid &grid, const GridChoice &c, bool frozen)
{
    SurfacePose pose;
    pose.position = grid.position_levels[c.pos];
    pose.rotation = {grid.alpha_levels[c.alpha], grid.beta_levels[c.beta], grid.gamma_levels[c.gamma]};
    pose.frozen = frozen;
    return pose;
}

// Saturating count of grid configurations across all movable surfaces.
double total_config_count(const DiscreteGrid &grid, std::size_t movable_count)
{
    double total = 1.0;
    for (std::size_t i = 0; i < movable_count; ++i)
    {
        total *= static_cast<double>(grid.configs_per_surface());
        if (total > 1e18)
            return 1e18;
    }
    return total;
}

bool advance_odometer(std::vector<GridChoice> &choices, const DiscreteGrid &grid)
{
    for (std::size_t i = choices.size(); i-- > 0;)
    {
        GridChoice &c = choices[i];
        if (++c.gamma < grid.gamma_levels.size())
            return true;
        c.gamma = 0;
        if (++c.beta < grid.beta_levels.size())
            return true;
        c.beta = 0;
        if (++c.alpha < grid.alpha_levels.size())
            return true;
        c.alpha = 0;
        if (++c.pos < grid.position_levels.size())
            return true;
        c.pos = 0;
    }
    return false;
}

std::vector<SurfacePose> poses_from_choices(const SiteGeometry &site,
                                            const std::vector<std::size_t> &movable,
                                            const DiscreteGrid &grid,
                                            const std::vector<GridChoice> &choices)
{
    std::vector<SurfacePose> poses = site.poses;
    for (std::size_t i = 0; i < movable.size(); ++i)
        poses[movable[i]] = pose_from_choice(grid, choices[i], false);
    return poses;
}

bool site_feasible(const SiteGeometry &site, const std::vector<SurfacePose> &poses)
{
    SiteGeometry probe = site;
    probe.poses = poses;
    return check_constraints(probe).feasible();
}

// Indices of the (up to) `count` levels nearest to `value`, nearest first.
template <typename DistanceFn>
std::vector<std::size_t> nearest_levels(std::size_t n_levels, DistanceFn &&dist, std::size_t count)
{
    std::vector<std::size_t> order(n_levels);
    for (std::size_t i = 0; i < n_levels; ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return dist(a) < dist(b); });
    order.resize(std::min(count, order.size()));
    return order;
}

GridChoice quantize_pose(const DiscreteGrid &grid, const SurfacePose &pose)
{
    GridChoice c;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.position_levels.size(); ++i)
    {
        const double d = (pose.position - grid.position_levels[i]).squaredNorm();
        if (d < best)
        {
            best = d;
            c.pos = i;
        }
    }
    auto pick_angle = [](const std::vector<double> &levels, double value) {
        std::size_t idx = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < levels.size(); ++i)
        {
            const double d = circular_distance(value, levels[i]);
            if (d < best_d)
            {
                best_d = d;
                idx = i;
            }
        }
        return idx;
    };
    c.alpha = pick_angle(grid.alpha_levels, pose.rotation.alpha);
    c.beta = pick_angle(grid.beta_levels, pose.rotation.beta);
    c.gamma = pick_angle(grid.gamma_levels, pose.rotation.gamma);
    return c;
}

double quantization_error(const DiscreteGrid &grid, const GridChoice &c, const SurfacePose &target)
{
    const double dp = (target.position - grid.position_levels[c.pos]).squaredNorm();
    const double da = circular_distance(target.rotation.alpha, grid.alpha_levels[c.alpha]);
    const double db = circular_distance(target.rotation.beta, grid.beta_levels[c.beta]);
    const double dg = circular_distance(target.rotation.gamma, grid.gamma_levels[c.gamma]);
    return dp + da * da + db * db + dg * dg;
}

} // namespace

OptimizationTrace relax_and_quantize(const SiteGeometry &site, const OptimizerConfig &cfg,
                                     const DiscreteGrid &grid, const Objective &objective)
{
    validate(grid);
    OptimizationTrace trace = alternating_optimize(site, cfg, objective);

    SiteGeometry relaxed = site;
    relaxed.poses = trace.final_poses;
    const std::vector<std::size_t> movable = movable_indices(site);

    std::vector<GridChoice> choices(movable.size());
    for (std::size_t i = 0; i < movable.size(); ++i)
        choices[i] = quantize_pose(grid, relaxed.poses[movable[i]]);
    std::vector<SurfacePose> quantized = poses_from_choices(site, movable, grid, choices);

    if (!site_feasible(site, quantized))
    {
        // Bounded repair: per surface, try the three nearest levels of each
        // coordinate in order of increasing quantization error from the
        // continuous solution; keep the first combination that makes the
        // whole site feasible.
        constexpr int kSweeps = 3;
        for (int sweep = 0; sweep < kSweeps && !site_feasible(site, quantized); ++sweep)
        {
            for (std::size_t i = 0; i < movable.size(); ++i)
            {
                if (site_feasible(site, quantized))
                    break;
                const SurfacePose &target = relaxed.poses[movable[i]];
                const auto pos_cands = nearest_levels(
                    grid.position_levels.size(),
                    [&](std::size_t l) { return (target.position - grid.position_levels[l]).squaredNorm(); },
                    3);
                auto angle_cands = [&](const std::vector<double> &levels, double value) {
                    return nearest_levels(
                        levels.size(), [&](std::size_t l) { return circular_distance(value, levels[l]); }, 3);
                };
                const auto a_cands = angle_cands(grid.alpha_levels, target.rotation.alpha);
                const auto b_cands = angle_cands(grid.beta_levels, target.rotation.beta);
                const auto g_cands = angle_cands(grid.gamma_levels, target.rotation.gamma);

                std::vector<GridChoice> combos;
                for (std::size_t p : pos_cands)
                    for (std::size_t a : a_cands)
                        for (std::size_t bb : b_cands)
                            for (std::size_t g : g_cands)
                                combos.push_back({p, a, bb, g});
                std::stable_sort(combos.begin(), combos.end(), [&](const GridChoice &x, const GridChoice &y) {
                    return quantization_error(grid, x, target) < quantization_error(grid, y, target);
                });

                for (const GridChoice &combo : combos)
                {
                    std::vector<SurfacePose> attempt = quantized;
                    attempt[movable[i]] = pose_from_choice(grid, combo, false);
                    if (site_feasible(site, attempt))
                    {
                        choices[i] = combo;
                        quantized = std::move(attempt);
                        break;
                    }
                }
            }
        }
        if (!site_feasible(site, quantized))
            throw std::runtime_error("relax_and_quantize: no feasible quantized configuration found");
    }

    SiteGeometry final_site = site;
    final_site.poses = quantized;
    trace.final_poses = quantized;
    trace.final_estimate = {objective(final_site), 0.0, 1};
    return trace;
}

OptimizationTrace relax_and_quantize(const SiteGeometry &site, const ScenarioSpec &scenario,
                                     const OptimizerConfig &cfg, const DiscreteGrid &grid)
{
    if (cfg.regime != Regime::discrete)
        throw std::invalid_argument("relax_and_quantize: regime must be 'discrete'");
    const Objective objective =
        make_mc_objective(scenario, cfg.mc_realizations, cfg.master_seed, cfg.workers);
    OptimizationTrace trace = relax_and_quantize(site, cfg, grid, objective);
    SiteGeometry final_site = site;
    final_site.poses = trace.final_poses;
    trace.final_estimate =
        monte_carlo_capacity(final_site, scenario, cfg.mc_realizations, cfg.master_seed, cfg.workers);
    return trace;
}

OptimizationTrace csm_optimize(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const DiscreteGrid &grid, std::size_t budget, std::uint64_t seed,
                               const CsmOptions &options)
{
    if (budget == 0)
        throw std::invalid_argument("csm_optimize: empty training set (budget is zero)");
    validate(grid);
    if (options.measure_realizations == 0 && !options.metric)
        throw std::invalid_argument("csm_optimize: measure_realizations must be at least 1");

    const std::vector<std::size_t> movable = movable_indices(site);
    if (movable.empty())
        throw std::invalid_argument("csm_optimize: no movable surfaces");

    const Objective metric =
        options.metric
            ? options.metric
            : make_mc_objective(scenario, options.measure_realizations,
                                derive_key(seed, stream_tag::csm_measure), options.workers);

    // Training set: full enumeration when it fits the budget, otherwise
    // uniformly random feasible configurations.
    std::vector<std::vector<GridChoice>> training;
    const double total = total_config_count(grid, movable.size());
    if (total <= static_cast<double>(budget))
    {
        std::vector<GridChoice> choices(movable.size());
        do
        {
            if (site_feasible(site, poses_from_choices(site, movable, grid, choices)))
                training.push_back(choices);
        } while (advance_odometer(choices, grid));
    }
    else
    {
        RngStream sampler(derive_key(seed, stream_tag::csm_sample));
        const std::size_t max_attempts = 100 * budget;
        for (std::size_t attempt = 0; attempt < max_attempts && training.size() < budget; ++attempt)
        {
            std::vector<GridChoice> choices(movable.size());
            for (GridChoice &c : choices)
            {
                c.pos = sampler.uniform_index(grid.position_levels.size());
                c.alpha = sampler.uniform_index(grid.alpha_levels.size());
                c.beta = sampler.uniform_index(grid.beta_levels.size());
                c.gamma = sampler.uniform_index(grid.gamma_levels.size());
            }
            if (site_feasible(site, poses_from_choices(site, movable, grid, choices)))
                training.push_back(std::move(choices));
        }
    }
    if (training.empty())
        throw std::runtime_error("csm_optimize: no feasible sample drawn");

    std::vector<double> measured(training.size());
    for (std::size_t t = 0; t < training.size(); ++t)
    {
        SiteGeometry probe = site;
        probe.poses = poses_from_choices(site, movable, grid, training[t]);
        measured[t] = metric(probe);
    }

    // Per coordinate, pick the level with the best conditional sample mean.
    auto best_level = [&](std::size_t surface_slot, auto level_of, std::size_t n_levels) {
        std::vector<double> sum(n_levels, 0.0);
        std::vector<std::size_t> cnt(n_levels, 0);
        for (std::size_t t = 0; t < training.size(); ++t)
        {
            const std::size_t l = level_of(training[t][surface_slot]);
            sum[l] += measured[t];
            cnt[l] += 1;
        }
        std::size_t best = 0;
        double best_mean = -std::numeric_limits<double>::infinity();
        for (std::size_t l = 0; l < n_levels; ++l)
        {
            if (cnt[l] == 0)
                continue;
            const double mean = sum[l] / static_cast<double>(cnt[l]);
            if (mean > best_mean)
            {
                best_mean = mean;
                best = l;
            }
        }
        return best;
    };

    std::vector<GridChoice> assembled(movable.size());
    for (std::size_t i = 0; i < movable.size(); ++i)
    {
        assembled[i].pos = best_level(i, [](const GridChoice &c) { return c.pos; },
                                      grid.position_levels.size());
        assembled[i].alpha = best_level(i, [](const GridChoice &c) { return c.alpha; },
                                        grid.alpha_levels.size());
        assembled[i].beta = best_level(i, [](const GridChoice &c) { return c.beta; },
                                       grid.beta_levels.size());
        assembled[i].gamma = best_level(i, [](const GridChoice &c) { return c.gamma; },
                                        grid.gamma_levels.size());
    }

    std::vector<SurfacePose> final_poses = poses_from_choices(site, movable, grid, assembled);
    if (!site_feasible(site, final_poses))
    {
        // Fall back to the best-measured training sample when the assembled
        // configuration cannot be repaired.
        std::size_t best_t = 0;
        for (std::size_t t = 1; t < training.size(); ++t)
            if (measured[t] > measured[best_t])
                best_t = t;
        const std::vector<SurfacePose> fallback = poses_from_choices(site, movable, grid, training[best_t]);
        final_poses = project_to_feasible(site, final_poses, &fallback);
    }

    SiteGeometry final_site = site;
    final_site.poses = final_poses;
    OptimizationTrace trace;
    trace.final_poses = std::move(final_poses);
    const double value = metric(final_site);
    trace.objectives = {value};
    trace.final_estimate = {value, 0.0, std::max<std::size_t>(options.measure_realizations, 1)};
    return trace;
}

SearchResult exhaustive_search(const SiteGeometry &site, const DiscreteGrid &grid,
                               const Objective &objective, std::size_t config_cap)
{
    validate(grid);
    if (!objective)
        throw std::invalid_argument("exhaustive_search: objective is empty");
    const std::vector<std::size_t> movable = movable_indices(site);
    if (movable.empty())
        throw std::invalid_argument("exhaustive_search: no movable surfaces");
    if (total_config_count(grid, movable.size()) > static_cast<double>(config_cap))
        throw std::invalid_argument("exhaustive_search: configuration count exceeds the cap");

    SearchResult result;
    result.objective = -std::numeric_limits<double>::infinity();
    std::vector<GridChoice> choices(movable.size());
    do
    {
        std::vector<SurfacePose> poses = poses_from_choices(site, movable, grid, choices);
        if (!site_feasible(site, poses))
            continue;
        result.n_feasible += 1;
        SiteGeometry probe = site;
        probe.poses = poses;
        const double val = objective(probe);
        if (val > result.objective)
        {
            result.objective = val;
            result.poses = std::move(poses);
        }
    } while (advance_odometer(choices, grid));

    if (result.n_feasible == 0)
        throw std::runtime_error("exhaustive_search: no feasible configuration on the grid");
    return result;
}

SearchResult exhaustive_search(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const OptimizerConfig &cfg, const DiscreteGrid &grid,
                               std::size_t config_cap)
{
    const Objective objective =
        make_mc_objective(scenario, cfg.mc_realizations, cfg.master_seed, cfg.workers);
    return exhaustive_search(site, grid, objective, config_cap);
}

} // namespace sixdma
