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

#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace sixdma;

namespace
{

constexpr double kPi = 3.14159265358979323846;

// Smooth analytic objective: total alignment of the surface normals with a
// target direction. Maximized when every normal equals the target.
Objective alignment_objective(const Vec3 &target)
{
    const Vec3 t = target.normalized();
    return [t](const SiteGeometry &site) {
        double sum = 0.0;
        for (std::size_t s = 0; s < site.surface_count(); ++s)
            sum += surface_normal(site, s).dot(t);
        return sum;
    };
}

// Two surfaces beside each other, normals tilted off +x.
SiteGeometry tilted_pair()
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.spec.local_normal = Vec3(0.0, 0.0, 1.0);
    site.feasible_radius = 4.0;
    site.min_surface_distance = 0.4;
    site.poses.resize(2);
    site.poses[0].position = Vec3(1.0, 0.5, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi - 0.3, 0.0};
    site.poses[1].position = Vec3(1.0, -0.5, 0.0);
    site.poses[1].rotation = RotationAngles{0.0, 0.5 * kPi + 0.2, 2.0 * kPi - 0.1};
    return site;
}

bool same_pose(const SurfacePose &a, const SurfacePose &b)
{
    return a.position == b.position && a.rotation.alpha == b.rotation.alpha &&
           a.rotation.beta == b.rotation.beta && a.rotation.gamma == b.rotation.gamma;
}

} // namespace

TEST_CASE("optimizer config validation")
{
    OptimizerConfig cfg;
    CHECK_NOTHROW(validate(cfg));

    OptimizerConfig nocand = cfg;
    nocand.candidates_per_surface = 0;
    CHECK_THROWS_AS(validate(nocand), std::invalid_argument);

    OptimizerConfig nostep = cfg;
    nostep.rotation_step_cap = 0.0;
    nostep.position_step_cap = 0.0;
    CHECK_THROWS_AS(validate(nostep), std::invalid_argument);

    OptimizerConfig negative = cfg;
    negative.rotation_step_cap = -0.1;
    CHECK_THROWS_AS(validate(negative), std::invalid_argument);

    OptimizerConfig noworkers = cfg;
    noworkers.workers = 0;
    CHECK_THROWS_AS(validate(noworkers), std::invalid_argument);
}

TEST_CASE("discrete grid validation")
{
    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
    CHECK_NOTHROW(validate(grid));

    DiscreteGrid empty;
    CHECK_THROWS_AS(validate(empty), std::invalid_argument);

    DiscreteGrid dup = grid;
    dup.position_levels.push_back(Vec3(1.0, 0.0, 0.0));
    CHECK_THROWS_AS(validate(dup), std::invalid_argument);

    DiscreteGrid unordered = grid;
    unordered.gamma_levels = {1.0, 0.5};
    CHECK_THROWS_AS(validate(unordered), std::invalid_argument);

    DiscreteGrid out_of_range = grid;
    out_of_range.beta_levels = {2.0 * kPi};
    CHECK_THROWS_AS(validate(out_of_range), std::invalid_argument);
}

TEST_CASE("linearized rotation step basics")
{
    const RotationAngles u{0.4, 1.2, 5.1};

    SUBCASE("zero delta is the identity")
    {
        const RotationAngles same = linearized_rotation_step(u, Vec3::Zero(), 0.35);
        CHECK(same.alpha == u.alpha);
        CHECK(same.beta == u.beta);
        CHECK(same.gamma == u.gamma);
    }

    SUBCASE("small step about z from the identity pose")
    {
        const double eps = 1e-3;
        const RotationAngles stepped =
            linearized_rotation_step(RotationAngles{}, Vec3(0.0, 0.0, eps), 0.35);
        CHECK(stepped.gamma == doctest::Approx(std::atan(eps)).epsilon(1e-12));
        CHECK(stepped.alpha == doctest::Approx(0.0));
        CHECK(stepped.beta == doctest::Approx(0.0));
    }

    SUBCASE("cap is enforced")
    {
        CHECK_THROWS_AS(linearized_rotation_step(u, Vec3(0.4, 0.0, 0.0), 0.35), std::invalid_argument);
        CHECK_THROWS_AS(linearized_rotation_step(u, Vec3::Zero(), 0.0), std::invalid_argument);
    }
}

TEST_CASE("linearized rotation step tracks the exponential map")
{
    RngStream rng(400);
    const double cap = 0.35;
    for (int i = 0; i < 1000; ++i)
    {
        const RotationAngles u{rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                               rng.uniform(0.0, 2.0 * kPi)};
        const Vec3 delta(rng.uniform(-cap, cap), rng.uniform(-cap, cap), rng.uniform(-cap, cap));
        const RotationAngles stepped = linearized_rotation_step(u, delta, cap);

        const Mat3 result = rotation_matrix(stepped);
        CHECK((result * result.transpose() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);

        const double norm = delta.norm();
        Mat3 expm = Mat3::Identity();
        if (norm > 0.0)
            expm = Eigen::AngleAxisd(norm, delta / norm).toRotationMatrix();
        const Mat3 exact = rotation_matrix(u) * expm;
        // The re-orthonormalized linear step agrees with the exponential map
        // to third order in the step size.
        CHECK((result - exact).norm() < 2.0 * norm * norm * norm + 1e-12);
    }
}

TEST_CASE("alternating optimization with zero iterations returns the start")
{
    const SiteGeometry site = tilted_pair();
    OptimizerConfig cfg;
    cfg.max_outer_iters = 0;
    const OptimizationTrace trace = alternating_optimize(site, cfg, alignment_objective(Vec3::UnitX()));
    REQUIRE(trace.objectives.size() == 1);
    CHECK(trace.accepted.empty());
    REQUIRE(trace.final_poses.size() == 2);
    CHECK(same_pose(trace.final_poses[0], site.poses[0]));
    CHECK(same_pose(trace.final_poses[1], site.poses[1]));
}

TEST_CASE("alternating optimization improves a steerable objective monotonically")
{
    const SiteGeometry site = tilted_pair();
    const Objective objective = alignment_objective(Vec3::UnitX());
    OptimizerConfig cfg;
    cfg.max_outer_iters = 12;
    cfg.candidates_per_surface = 6;
    cfg.master_seed = 9;

    const OptimizationTrace trace = alternating_optimize(site, cfg, objective);
    REQUIRE(trace.objectives.size() >= 2);
    for (std::size_t i = 1; i < trace.objectives.size(); ++i)
        CHECK(trace.objectives[i] >= trace.objectives[i - 1]);
    CHECK(trace.objectives.back() > trace.objectives.front() + 0.05);
    for (const AcceptedMove &move : trace.accepted)
        CHECK(move.objective_after > move.objective_before + cfg.improvement_tol);

    // The reported poses realize the reported objective.
    SiteGeometry tuned = site;
    tuned.poses = trace.final_poses;
    CHECK(objective(tuned) == trace.objectives.back());
    CHECK(check_constraints(tuned).feasible());
}

TEST_CASE("alternating optimization is deterministic in the seed")
{
    const SiteGeometry site = tilted_pair();
    const Objective objective = alignment_objective(Vec3(1.0, 0.2, 0.1));
    OptimizerConfig cfg;
    cfg.max_outer_iters = 6;
    cfg.master_seed = 21;

    const OptimizationTrace a = alternating_optimize(site, cfg, objective);
    const OptimizationTrace b = alternating_optimize(site, cfg, objective);
    REQUIRE(a.objectives.size() == b.objectives.size());
    for (std::size_t i = 0; i < a.objectives.size(); ++i)
        CHECK(a.objectives[i] == b.objectives[i]);
    REQUIRE(a.final_poses.size() == b.final_poses.size());
    for (std::size_t s = 0; s < a.final_poses.size(); ++s)
        CHECK(same_pose(a.final_poses[s], b.final_poses[s]));
}

TEST_CASE("frozen surfaces are never moved by the optimizer")
{
    SiteGeometry site = tilted_pair();
    site.poses[0].frozen = true;
    OptimizerConfig cfg;
    cfg.max_outer_iters = 8;
    cfg.master_seed = 13;
    const OptimizationTrace trace = alternating_optimize(site, cfg, alignment_objective(Vec3::UnitX()));
    CHECK(same_pose(trace.final_poses[0], site.poses[0]));
    for (const AcceptedMove &move : trace.accepted)
        CHECK(move.surface != 0);
}

TEST_CASE("rotation-only optimization keeps positions bit-exact")
{
    const SiteGeometry site = tilted_pair();
    OptimizerConfig cfg;
    cfg.max_outer_iters = 10;
    cfg.master_seed = 17;
    const OptimizerConfig ro = rotation_only_config(cfg);
    REQUIRE(ro.position_step_cap == 0.0);

    const OptimizationTrace trace = alternating_optimize(site, ro, alignment_objective(Vec3::UnitX()));
    for (std::size_t s = 0; s < site.surface_count(); ++s)
        CHECK(trace.final_poses[s].position == site.poses[s].position);
    CHECK(trace.objectives.back() > trace.objectives.front());
}

TEST_CASE("a huge improvement threshold freezes the search")
{
    const SiteGeometry site = tilted_pair();
    OptimizerConfig cfg;
    cfg.max_outer_iters = 5;
    cfg.improvement_tol = 1e9;
    const OptimizationTrace trace = alternating_optimize(site, cfg, alignment_objective(Vec3::UnitX()));
    CHECK(trace.accepted.empty());
    CHECK(same_pose(trace.final_poses[0], site.poses[0]));
    CHECK(same_pose(trace.final_poses[1], site.poses[1]));
    // One exploratory cycle, then termination on no acceptance.
    CHECK(trace.objectives.size() == 2);
    CHECK(trace.objectives[0] == trace.objectives[1]);
}

TEST_CASE("alternating optimization rejects bad inputs")
{
    const SiteGeometry site = tilted_pair();
    OptimizerConfig cfg;
    CHECK_THROWS_AS(alternating_optimize(site, cfg, Objective{}), std::invalid_argument);

    SiteGeometry bad = site;
    bad.poses[0].position = Vec3(100.0, 0.0, 0.0);
    CHECK_THROWS_AS(alternating_optimize(bad, cfg, alignment_objective(Vec3::UnitX())),
                    std::invalid_argument);
}

TEST_CASE("Monte-Carlo objective matches the capacity estimator bit for bit")
{
    ScenarioSpec scenario = default_scenario();
    scenario.mean_user_count = 5.0;
    SiteTemplate tpl;
    tpl.n_surfaces = 3;
    const SiteGeometry site = fpa_three_sector(tpl);

    const Objective objective = make_mc_objective(scenario, 6, 33);
    const CapacityEstimate est = monte_carlo_capacity(site, scenario, 6, 33);
    CHECK(objective(site) == est.mean);
}

TEST_CASE("quantization keeps on-grid poses and breaks ties toward lower levels")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0}; // normal +x

    OptimizerConfig cfg;
    cfg.max_outer_iters = 0; // quantize the start pose directly

    SUBCASE("already on the grid")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(1.0, 0.0, 0.0), Vec3(0.0, 0.0, 1.5)};
        grid.beta_levels = {0.5 * kPi};
        const OptimizationTrace trace =
            relax_and_quantize(site, cfg, grid, alignment_objective(Vec3::UnitX()));
        CHECK(trace.final_poses[0].position == Vec3(1.0, 0.0, 0.0));
        CHECK(trace.final_poses[0].rotation.beta == 0.5 * kPi);
        CHECK(trace.final_poses[0].rotation.alpha == 0.0);
    }

    SUBCASE("equidistant angle levels resolve to the lower index")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
        grid.beta_levels = {0.5 * kPi};
        grid.gamma_levels = {0.0, 0.5 * kPi};
        SiteGeometry midway = site;
        midway.poses[0].rotation.gamma = 0.25 * kPi; // exactly between the levels
        const OptimizationTrace trace =
            relax_and_quantize(midway, cfg, grid, alignment_objective(Vec3::UnitX()));
        CHECK(trace.final_poses[0].rotation.gamma == 0.0);
    }

    SUBCASE("equidistant position levels resolve to the lower index")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(0.0, 0.0, 1.0), Vec3(0.0, 0.0, -1.0)};
        grid.beta_levels = {0.5 * kPi};
        const OptimizationTrace trace =
            relax_and_quantize(site, cfg, grid, alignment_objective(Vec3::UnitX()));
        CHECK(trace.final_poses[0].position == Vec3(0.0, 0.0, 1.0));
    }
}

TEST_CASE("infeasible snaps are repaired on nearby grid levels")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.15;
    site.poses.resize(2);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    site.poses[1].position = Vec3(1.0, 0.05, 0.15); // snaps to the same level
    site.poses[1].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0), Vec3(1.0, 0.2, 0.0)};
    grid.beta_levels = {0.5 * kPi};

    OptimizerConfig cfg;
    cfg.max_outer_iters = 0;
    const OptimizationTrace trace =
        relax_and_quantize(site, cfg, grid, alignment_objective(Vec3::UnitX()));
    SiteGeometry result = site;
    result.poses = trace.final_poses;
    CHECK(check_constraints(result).feasible());
    CHECK(trace.final_poses[0].position != trace.final_poses[1].position);
}

TEST_CASE("impossible quantization reports failure")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.15;
    site.poses.resize(2);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    site.poses[1].position = Vec3(1.0, 0.3, 0.0);
    site.poses[1].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    DiscreteGrid grid; // a single shared level cannot host two surfaces
    grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
    grid.beta_levels = {0.5 * kPi};

    OptimizerConfig cfg;
    cfg.max_outer_iters = 0;
    CHECK_THROWS_WITH_AS(relax_and_quantize(site, cfg, grid, alignment_objective(Vec3::UnitX())),
                         doctest::Contains("no feasible quantized configuration"), std::runtime_error);
}

TEST_CASE("quantized search never beats the exhaustive oracle")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.5;
    site.poses.resize(2);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    site.poses[1].position = Vec3(0.0, 1.0, 0.0);
    site.poses[1].rotation = RotationAngles{0.0, 0.5 * kPi, 0.5 * kPi};

    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0), Vec3(0.0, 1.0, 0.0)};
    grid.beta_levels = {0.5 * kPi};
    grid.gamma_levels = {0.0, 0.5 * kPi};

    const Objective objective = alignment_objective(Vec3(1.0, 1.0, 0.0));
    const SearchResult oracle = exhaustive_search(site, grid, objective);
    CHECK(oracle.n_feasible >= 2);

    OptimizerConfig cfg;
    cfg.max_outer_iters = 6;
    cfg.master_seed = 3;
    const OptimizationTrace trace = relax_and_quantize(site, cfg, grid, objective);
    CHECK(trace.final_estimate.mean <= oracle.objective + 1e-12);
}

TEST_CASE("exhaustive search enumerates, skips infeasible configs and breaks ties first")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    SUBCASE("single configuration")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
        grid.beta_levels = {0.5 * kPi};
        const SearchResult result = exhaustive_search(site, grid, alignment_objective(Vec3::UnitX()));
        CHECK(result.n_feasible == 1);
        CHECK(result.poses[0].position == Vec3(1.0, 0.0, 0.0));
        CHECK(result.objective == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("infeasible levels are skipped")
    {
        DiscreteGrid grid;
        // The second level aims the surface straight at the origin.
        grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
        grid.beta_levels = {0.5 * kPi, 1.5 * kPi};
        const SearchResult result = exhaustive_search(site, grid, alignment_objective(Vec3::UnitX()));
        CHECK(result.n_feasible == 1);
        CHECK(result.poses[0].rotation.beta == 0.5 * kPi);
    }

    SUBCASE("constant objective keeps the first feasible configuration")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(1.0, 0.0, 0.0), Vec3(1.2, 0.0, 0.0)};
        grid.beta_levels = {0.5 * kPi};
        const Objective constant = [](const SiteGeometry &) { return 1.0; };
        const SearchResult result = exhaustive_search(site, grid, constant);
        CHECK(result.n_feasible == 2);
        CHECK(result.poses[0].position == Vec3(1.0, 0.0, 0.0));
    }

    SUBCASE("an oversized grid is rejected")
    {
        DiscreteGrid grid;
        for (int i = 0; i < 40; ++i)
            grid.position_levels.push_back(Vec3(1.0 + 0.01 * i, 0.0, 0.0));
        grid.beta_levels = {0.5 * kPi};
        CHECK_THROWS_WITH_AS(exhaustive_search(site, grid, alignment_objective(Vec3::UnitX()), 10),
                             doctest::Contains("exceeds the cap"), std::invalid_argument);
    }

    SUBCASE("a grid with no feasible configuration is reported")
    {
        DiscreteGrid grid;
        grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
        grid.beta_levels = {1.5 * kPi}; // normal toward the origin
        CHECK_THROWS_AS(exhaustive_search(site, grid, alignment_objective(Vec3::UnitX())),
                        std::runtime_error);
    }
}

TEST_CASE("exhaustive search steers a surface toward the strongest direction")
{
    // One surface free to pick among four azimuth settings; the objective is
    // the element gain toward a known direction, so the nearest azimuth must
    // win.
    SiteGeometry site;
    site.spec = planar_grid(2, 2, 0.05);
    site.spec.local_normal = Vec3(1.0, 0.0, 0.0);
    site.feasible_radius = 2.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(0.5, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{};

    DiscreteGrid grid;
    grid.position_levels = {Vec3(0.5, 0.0, 0.0)};
    grid.gamma_levels = {0.0, 0.5 * kPi, kPi, 1.5 * kPi};

    const DirectionalPattern pattern;
    const Vec3 target = Vec3(-1.0, -0.4, 0.0).normalized(); // closest to azimuth pi
    const Objective gain_toward = [&](const SiteGeometry &s) {
        return element_gain(s.poses[0], s.spec, target, pattern);
    };

    // Only the azimuths pointing away from the origin are feasible for the
    // blockage constraint; with the surface at +x, gamma = pi faces the
    // origin head on and is infeasible, so the runner must settle for the
    // best feasible azimuth.
    const SearchResult result = exhaustive_search(site, grid, gain_toward);
    CHECK(result.n_feasible == 3);
    CHECK(result.poses[0].rotation.gamma == 1.5 * kPi);
}

TEST_CASE("training-based search finds a separable optimum")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 3.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0), Vec3(1.5, 0.0, 0.0)};
    grid.beta_levels = {0.5 * kPi};
    grid.gamma_levels = {0.0, kPi / 9.0};

    // Separable scores: position level 1 adds 2, gamma level 1 adds 1.
    const Objective metric = [&](const SiteGeometry &s) {
        double score = 0.0;
        if (s.poses[0].position == grid.position_levels[1])
            score += 2.0;
        if (s.poses[0].rotation.gamma == grid.gamma_levels[1])
            score += 1.0;
        return score;
    };

    CsmOptions options;
    options.metric = metric;
    const ScenarioSpec scenario = default_scenario();
    const OptimizationTrace trace = csm_optimize(site, scenario, grid, 16, 77, options);
    CHECK(trace.final_poses[0].position == grid.position_levels[1]);
    CHECK(trace.final_poses[0].rotation.gamma == grid.gamma_levels[1]);
    REQUIRE(trace.objectives.size() == 1);
    CHECK(trace.objectives[0] == 3.0);
    CHECK(trace.final_estimate.mean == 3.0);
}

TEST_CASE("training-based search is deterministic under sampling")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 3.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    DiscreteGrid grid;
    for (int i = 0; i < 8; ++i)
        grid.position_levels.push_back(Vec3(1.0 + 0.1 * i, 0.0, 0.0));
    grid.beta_levels = {0.5 * kPi};
    grid.gamma_levels = {0.0, 0.3, 0.6, 5.9};

    const Objective metric = [](const SiteGeometry &s) {
        return s.poses[0].position.x() - 0.5 * std::abs(s.poses[0].rotation.gamma - 0.3);
    };
    CsmOptions options;
    options.metric = metric;

    const ScenarioSpec scenario = default_scenario();
    // 8 * 4 = 32 grid configurations, budget of 12 forces random sampling.
    const OptimizationTrace a = csm_optimize(site, scenario, grid, 12, 5, options);
    const OptimizationTrace b = csm_optimize(site, scenario, grid, 12, 5, options);
    CHECK(a.final_poses[0].position == b.final_poses[0].position);
    CHECK(a.final_poses[0].rotation.gamma == b.final_poses[0].rotation.gamma);
    CHECK(a.objectives[0] == b.objectives[0]);
}

TEST_CASE("training-based search repairs or falls back on a colliding assembly")
{
    // Two surfaces, three position levels; the cross votes push both
    // surfaces toward the same level, which is infeasible, so the optimizer
    // must recover a feasible layout.
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 3.0;
    site.min_surface_distance = 0.5;
    site.poses.resize(2);
    site.poses[0].position = Vec3(1.0, 0.3, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    site.poses[1].position = Vec3(1.0, -0.3, 0.0);
    site.poses[1].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};

    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.3, 0.0), Vec3(1.0, -0.3, 0.0), Vec3(1.0, -0.35, 0.0)};
    grid.beta_levels = {0.5 * kPi};

    const Objective metric = [&](const SiteGeometry &s) {
        // Rewards the (b, a) and (a, b) layouts asymmetrically and starves
        // the third level, steering both conditional argmaxes to level b.
        const bool s0_a = s.poses[0].position == grid.position_levels[0];
        const bool s0_b = s.poses[0].position == grid.position_levels[1];
        const bool s1_a = s.poses[1].position == grid.position_levels[0];
        const bool s1_b = s.poses[1].position == grid.position_levels[1];
        if (s0_a && s1_b)
            return 10.0;
        if (s0_b && s1_a)
            return 9.0;
        return 0.0;
    };
    CsmOptions options;
    options.metric = metric;

    const ScenarioSpec scenario = default_scenario();
    const OptimizationTrace trace = csm_optimize(site, scenario, grid, 64, 11, options);
    SiteGeometry result = site;
    result.poses = trace.final_poses;
    CHECK(check_constraints(result).feasible());
}

TEST_CASE("training-based search rejects an empty budget")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 3.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
    grid.beta_levels = {0.5 * kPi};
    const ScenarioSpec scenario = default_scenario();
    CHECK_THROWS_WITH_AS(csm_optimize(site, scenario, grid, 0, 1), doctest::Contains("empty training set"),
                         std::invalid_argument);
}

TEST_CASE("training-based search reports a grid with no feasible configuration")
{
    SiteGeometry site;
    site.spec = planar_grid(1, 1, 0.05);
    site.feasible_radius = 3.0;
    site.min_surface_distance = 0.1;
    site.poses.resize(1);
    site.poses[0].position = Vec3(1.0, 0.0, 0.0);
    site.poses[0].rotation = RotationAngles{0.0, 0.5 * kPi, 0.0};
    DiscreteGrid grid;
    grid.position_levels = {Vec3(1.0, 0.0, 0.0)};
    grid.beta_levels = {1.5 * kPi}; // always facing the origin
    const ScenarioSpec scenario = default_scenario();
    CHECK_THROWS_AS(csm_optimize(site, scenario, grid, 8, 1), std::runtime_error);
}
