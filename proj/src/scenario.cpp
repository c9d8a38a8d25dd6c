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

#include "sixdma/scenario.hpp"

#include "sixdma/metrics.hpp"
#include "sixdma/optimize.hpp"
#include "sixdma/parallel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sixdma
{

void validate(const ScenarioSpec &spec)
{
    if (!(spec.region_radius > 0.0))
        throw std::invalid_argument("ScenarioSpec: region_radius must be positive");
    if (!(spec.bs_height >= 0.0))
        throw std::invalid_argument("ScenarioSpec: bs_height must be nonnegative");
    for (const Hotspot &h : spec.hotspots)
    {
        if (!(h.radius > 0.0))
            throw std::invalid_argument("ScenarioSpec: hotspot radius must be positive");
        if (!(h.weight > 0.0))
            throw std::invalid_argument("ScenarioSpec: hotspot weight must be positive");
        const double center_dist = std::hypot(h.center.x(), h.center.y());
        if (center_dist + h.radius > spec.region_radius + 1e-9)
            throw std::invalid_argument("ScenarioSpec: hotspot disc extends outside the region");
    }
    if (!(spec.regular_weight >= 0.0))
        throw std::invalid_argument("ScenarioSpec: regular_weight must be nonnegative");
    double total_weight = spec.regular_weight;
    for (const Hotspot &h : spec.hotspots)
        total_weight += h.weight;
    if (!(total_weight > 0.0))
        throw std::invalid_argument("ScenarioSpec: total assignment weight must be positive");
    if (!(spec.mean_user_count > 0.0))
        throw std::invalid_argument("ScenarioSpec: mean_user_count must be positive");
    if (!(spec.wavelength > 0.0))
        throw std::invalid_argument("ScenarioSpec: wavelength must be positive");
    if (!(spec.rician_factor > 0.0))
        throw std::invalid_argument("ScenarioSpec: rician_factor must be positive");
    if (!(spec.nlos_angular_spread_deg > 0.0) || spec.nlos_angular_spread_deg > 180.0)
        throw std::invalid_argument("ScenarioSpec: nlos_angular_spread_deg must lie in (0, 180]");
    if (spec.pathloss_exponent_los < 2.0 || spec.pathloss_exponent_nlos < 2.0)
        throw std::invalid_argument("ScenarioSpec: pathloss exponents must be at least 2");
    validate(spec.pattern);
}

ScenarioSpec default_scenario()
{
    ScenarioSpec spec;
    spec.hotspots = {
        {Vec3(120.0, 30.0, 0.0), 20.0, 1.0},
        {Vec3(-90.0, 70.0, 0.0), 20.0, 2.0},
        {Vec3(20.0, -130.0, 0.0), 20.0, 3.0},
    };
    return spec;
}

namespace
{

Vec3 uniform_in_disc(RngStream &stream, const Vec3 &center, double radius, double z)
{
    const double r = radius * std::sqrt(stream.uniform());
    const double phi = stream.uniform(0.0, 2.0 * std::numbers::pi);
    return Vec3(center.x() + r * std::cos(phi), center.y() + r * std::sin(phi), z);
}

bool inside_any_hotspot(const ScenarioSpec &spec, const Vec3 &p)
{
    for (const Hotspot &h : spec.hotspots)
        if (std::hypot(p.x() - h.center.x(), p.y() - h.center.y()) < h.radius)
            return true;
    return false;
}

} // namespace

UserRealization sample_users(const ScenarioSpec &spec, RngStream stream)
{
    validate(spec);
    const std::uint64_t count = stream.poisson(spec.mean_user_count);
    double total_weight = spec.regular_weight;
    for (const Hotspot &h : spec.hotspots)
        total_weight += h.weight;

    const double ground_z = -spec.bs_height;
    UserRealization out;
    out.positions.reserve(count);
    out.paths.reserve(count);
    for (std::uint64_t u = 0; u < count; ++u)
    {
        const double pick = stream.uniform(0.0, total_weight);
        double acc = 0.0;
        const Hotspot *chosen = nullptr;
        for (const Hotspot &h : spec.hotspots)
        {
            acc += h.weight;
            if (pick < acc)
            {
                chosen = &h;
                break;
            }
        }

        Vec3 pos;
        if (chosen != nullptr)
        {
            pos = uniform_in_disc(stream, chosen->center, chosen->radius, ground_z);
        }
        else
        {
            // Regular users live in the region minus all hotspot discs.
            constexpr int kMaxAttempts = 100000;
            int attempt = 0;
            do
            {
                if (++attempt > kMaxAttempts)
                    throw std::runtime_error("sample_users: could not place a regular user; "
                                             "hotspots may cover the whole region");
                pos = uniform_in_disc(stream, Vec3::Zero(), spec.region_radius, ground_z);
            } while (inside_any_hotspot(spec, pos));
        }

        RngStream path_stream = stream.child(stream_tag::user, u);
        out.positions.push_back(pos);
        out.paths.push_back(user_paths(spec, pos, path_stream));
    }
    return out;
}

std::vector<UserRealization> sample_user_sets(const ScenarioSpec &spec, std::size_t n,
                                              std::uint64_t master_seed, int workers)
{
    validate(spec);
    std::vector<UserRealization> sets(n);
    parallel_for(n, workers, [&](std::size_t i) {
        sets[i] = sample_users(spec, realization_stream(master_seed, i));
    });
    return sets;
}

SiteGeometry fpa_three_sector(const SiteTemplate &tpl)
{
    if (tpl.n_surfaces == 0 || tpl.n_surfaces % 3 != 0)
        throw std::invalid_argument("fpa_three_sector: surface count must be a positive multiple of 3");
    if (!(tpl.mount_radius >= 0.0) || !(tpl.feasible_radius > 0.0))
        throw std::invalid_argument("fpa_three_sector: radii must be positive");

    SiteGeometry site;
    site.spec = tpl.surface;
    site.feasible_radius = tpl.feasible_radius;
    site.min_surface_distance = tpl.min_surface_distance;

    const std::size_t per_sector = tpl.n_surfaces / 3;
    const double tilt = tpl.downtilt_deg * std::numbers::pi / 180.0;
    const double ct = std::cos(tilt), st = std::sin(tilt);
    site.poses.reserve(tpl.n_surfaces);
    for (std::size_t sector = 0; sector < 3; ++sector)
    {
        const double az = 2.0 * std::numbers::pi * static_cast<double>(sector) / 3.0;
        const Vec3 outward(std::cos(az), std::sin(az), 0.0);
        // Stack axis orthogonal to the downtilted boresight, so stacked
        // surfaces sit exactly on each other's plane (zero-margin feasible).
        const Vec3 stack_dir(st * std::cos(az), st * std::sin(az), ct);
        for (std::size_t k = 0; k < per_sector; ++k)
        {
            SurfacePose pose;
            const double offset =
                (static_cast<double>(k) - 0.5 * static_cast<double>(per_sector - 1)) * tpl.stack_spacing;
            pose.position = tpl.mount_radius * outward + offset * stack_dir;
            pose.rotation = normalized({0.0, 0.5 * std::numbers::pi + tilt, az});
            site.poses.push_back(pose);
        }
    }

    const ConstraintReport report = check_constraints(site);
    if (!report.feasible())
        throw std::runtime_error("fpa_three_sector: constructed layout is infeasible: " + report.describe());
    return site;
}

OptimizerConfig rotation_only_config(const OptimizerConfig &base)
{
    OptimizerConfig cfg = base;
    cfg.position_step_cap = 0.0;
    return cfg;
}

namespace
{

// Per-realization state of the fluid-antenna local search: the scaled
// channel matrix row by antenna, its Gram, and the phase bookkeeping needed
// to rebuild a row for a new in-plane offset.
struct FasWorkspace
{
    // base_coef[s](k_paths_flat): per surface, user-major flattened path
    // coefficients sqrt(p/sigma^2) * eta * sqrt(gain) * exp(j k q_s . dir).
    std::vector<Eigen::VectorXcd> base_coef;
    // In-plane wavevector components per surface and flattened path index.
    std::vector<Eigen::VectorXd> wave_x, wave_y;
    std::vector<std::size_t> path_offset; // per user, into the flattened axis
    std::size_t n_users = 0;

    Eigen::MatrixXcd rows; // (B*N) x K scaled channel matrix
    Eigen::MatrixXcd gram; // K x K
};

Eigen::VectorXcd fas_row(const FasWorkspace &ws, std::size_t s, double ex, double ey)
{
    Eigen::VectorXcd row = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(ws.n_users));
    const Eigen::VectorXcd &coef = ws.base_coef[s];
    const Eigen::VectorXd &wx = ws.wave_x[s];
    const Eigen::VectorXd &wy = ws.wave_y[s];
    for (std::size_t k = 0; k < ws.n_users; ++k)
    {
        const std::size_t lo = ws.path_offset[k];
        const std::size_t hi = ws.path_offset[k + 1];
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t l = lo; l < hi; ++l)
            acc += coef[static_cast<Eigen::Index>(l)] *
                   std::polar(1.0, wx[static_cast<Eigen::Index>(l)] * ex + wy[static_cast<Eigen::Index>(l)] * ey);
        row[static_cast<Eigen::Index>(k)] = acc;
    }
    return row;
}

double fas_capacity(const FasWorkspace &ws)
{
    return sum_capacity_from_gram(ws.gram);
}

double fas_one_realization(const SiteGeometry &site, const ScenarioSpec &scen,
                           const UserRealization &users, const FasMaConfig &cfg)
{
    const std::size_t k = users.user_count();
    if (k == 0)
        return 0.0;

    const std::size_t b = site.surface_count();
    const std::size_t n = site.spec.elements_per_surface();
    const double lambda = scen.wavelength;
    const double half = 0.5 * cfg.aperture_wavelengths * lambda;
    const double dmin = cfg.min_spacing_wavelengths * lambda;
    const double k0 = 2.0 * std::numbers::pi / lambda;
    const double amp_scale =
        std::sqrt(dbm_to_watts(scen.user_power_dbm) / dbm_to_watts(scen.noise_power_dbm));

    FasWorkspace ws;
    ws.n_users = k;
    ws.path_offset.resize(k + 1, 0);
    for (std::size_t u = 0; u < k; ++u)
        ws.path_offset[u + 1] = ws.path_offset[u] + users.paths[u].size();
    const std::size_t total_paths = ws.path_offset[k];

    ws.base_coef.resize(b);
    ws.wave_x.resize(b);
    ws.wave_y.resize(b);
    for (std::size_t s = 0; s < b; ++s)
    {
        ws.base_coef[s].resize(static_cast<Eigen::Index>(total_paths));
        ws.wave_x[s].resize(static_cast<Eigen::Index>(total_paths));
        ws.wave_y[s].resize(static_cast<Eigen::Index>(total_paths));
        const Mat3 rot = rotation_matrix(site.poses[s].rotation);
        for (std::size_t u = 0; u < k; ++u)
        {
            for (std::size_t l = 0; l < users.paths[u].size(); ++l)
            {
                const PropagationPath &path = users.paths[u][l];
                const double g = element_gain(site.poses[s], site.spec, path.direction, scen.pattern);
                const std::complex<double> c = amp_scale * path.complex_gain * std::sqrt(g) *
                                               std::polar(1.0, k0 * path.direction.dot(site.poses[s].position));
                const Vec3 w = k0 * (rot.transpose() * path.direction);
                const Eigen::Index idx = static_cast<Eigen::Index>(ws.path_offset[u] + l);
                ws.base_coef[s][idx] = c;
                ws.wave_x[s][idx] = w.x();
                ws.wave_y[s][idx] = w.y();
            }
        }
    }

    // Starting offsets: the surface's own element layout.
    std::vector<std::vector<Eigen::Vector2d>> offsets(b, std::vector<Eigen::Vector2d>(n));
    for (std::size_t s = 0; s < b; ++s)
        for (std::size_t e = 0; e < n; ++e)
            offsets[s][e] = Eigen::Vector2d(site.spec.local_elements[e].x(), site.spec.local_elements[e].y());

    auto rebuild = [&]() {
        ws.rows.resize(static_cast<Eigen::Index>(b * n), static_cast<Eigen::Index>(k));
        for (std::size_t s = 0; s < b; ++s)
            for (std::size_t e = 0; e < n; ++e)
                ws.rows.row(static_cast<Eigen::Index>(s * n + e)) =
                    fas_row(ws, s, offsets[s][e].x(), offsets[s][e].y()).transpose();
        ws.gram = ws.rows.adjoint() * ws.rows;
    };
    rebuild();
    double cap = fas_capacity(ws);
    const double start_cap = cap;
    if (cfg.passes <= 0)
        return start_cap;

    auto spacing_ok = [&](std::size_t s, std::size_t e, const Eigen::Vector2d &cand) {
        for (std::size_t other = 0; other < n; ++other)
        {
            if (other == e)
                continue;
            if ((cand - offsets[s][other]).norm() < dmin * (1.0 - 1e-12))
                return false;
        }
        return true;
    };

    for (int pass = 0; pass < cfg.passes; ++pass)
    {
        for (std::size_t s = 0; s < b; ++s)
        {
            for (std::size_t e = 0; e < n; ++e)
            {
                const Eigen::Index row_idx = static_cast<Eigen::Index>(s * n + e);
                const Eigen::VectorXcd old_row = ws.rows.row(row_idx).transpose();
                const Eigen::MatrixXcd gram_rest = ws.gram - old_row.conjugate() * old_row.transpose();

                Eigen::Vector2d best_off = offsets[s][e];
                double best_cap = cap;
                Eigen::VectorXcd best_row = old_row;
                auto try_offset = [&](const Eigen::Vector2d &cand) {
                    if (std::abs(cand.x()) > half || std::abs(cand.y()) > half)
                        return;
                    if (!spacing_ok(s, e, cand))
                        return;
                    const Eigen::VectorXcd row = fas_row(ws, s, cand.x(), cand.y());
                    const double c = sum_capacity_from_gram(gram_rest + row.conjugate() * row.transpose());
                    if (c > best_cap * (1.0 + 1e-12) + 1e-15)
                    {
                        best_cap = c;
                        best_off = cand;
                        best_row = row;
                    }
                };

                // Coarse pass over a half-wavelength lattice of the aperture.
                const int steps = static_cast<int>(std::floor(2.0 * half / (0.5 * lambda)));
                for (int ix = 0; ix <= steps; ++ix)
                    for (int iy = 0; iy <= steps; ++iy)
                        try_offset(Eigen::Vector2d(-half + 0.5 * lambda * ix, -half + 0.5 * lambda * iy));

                // Local pattern refinement around the coarse winner.
                for (double step = 0.25 * lambda; step > lambda / 256.0; step *= 0.5)
                {
                    bool moved = true;
                    while (moved)
                    {
                        moved = false;
                        const Eigen::Vector2d base = best_off;
                        const Eigen::Vector2d moves[4] = {
                            base + Eigen::Vector2d(step, 0.0), base - Eigen::Vector2d(step, 0.0),
                            base + Eigen::Vector2d(0.0, step), base - Eigen::Vector2d(0.0, step)};
                        const double before = best_cap;
                        for (const auto &m : moves)
                            try_offset(m);
                        moved = best_cap > before;
                    }
                }

                if (best_cap > cap)
                {
                    offsets[s][e] = best_off;
                    ws.rows.row(row_idx) = best_row.transpose();
                    ws.gram = gram_rest + best_row.conjugate() * best_row.transpose();
                    cap = best_cap;
                }
            }
            // Guard against drift from the incremental Gram updates.
            rebuild();
            cap = fas_capacity(ws);
        }
    }
    return std::max(cap, start_cap);
}

} // namespace

std::vector<double> fas_ma_baseline(const SiteGeometry &site, const ScenarioSpec &scenario,
                                    const FasMaConfig &cfg)
{
    validate(scenario);
    if (cfg.n_realizations == 0)
        throw std::invalid_argument("fas_ma_baseline: need at least one realization");
    if (!(cfg.aperture_wavelengths > 0.0) || !(cfg.min_spacing_wavelengths > 0.0))
        throw std::invalid_argument("fas_ma_baseline: aperture and spacing must be positive");
    const ConstraintReport report = check_constraints(site);
    if (!report.feasible())
        throw std::invalid_argument("fas_ma_baseline: infeasible site geometry: " + report.describe());

    const std::size_t n = site.spec.elements_per_surface();
    const double side_slots =
        std::floor(cfg.aperture_wavelengths / cfg.min_spacing_wavelengths) + 1.0;
    if (side_slots * side_slots < static_cast<double>(n))
        throw std::invalid_argument("fas_ma_baseline: aperture cannot hold all antennas at the "
                                    "minimum spacing");
    const double half = 0.5 * cfg.aperture_wavelengths * scenario.wavelength;
    for (const Vec3 &e : site.spec.local_elements)
    {
        if (std::abs(e.z()) > 1e-12)
            throw std::invalid_argument("fas_ma_baseline: element layout must be planar");
        if (std::abs(e.x()) > half + 1e-12 || std::abs(e.y()) > half + 1e-12)
            throw std::invalid_argument("fas_ma_baseline: starting layout exceeds the aperture");
    }

    std::vector<double> caps(cfg.n_realizations);
    parallel_for(cfg.n_realizations, cfg.workers, [&](std::size_t i) {
        const UserRealization users = sample_users(scenario, realization_stream(cfg.master_seed, i));
        caps[i] = fas_one_realization(site, scenario, users, cfg);
    });
    return caps;
}

} // namespace sixdma
