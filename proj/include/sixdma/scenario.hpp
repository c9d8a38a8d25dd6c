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

#include "sixdma/channel.hpp"
#include "sixdma/geometry.hpp"
#include "sixdma/rng.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

namespace sixdma
{

struct OptimizerConfig;

inline double dbm_to_watts(double dbm)
{
    return 1e-3 * std::pow(10.0, dbm / 10.0);
}

// Circular user sub-region with a relative intensity weight. Only the x/y
// components of the center matter; users live on the ground plane.
struct Hotspot
{
    Vec3 center = Vec3::Zero();
    double radius = 0.0;
    double weight = 1.0;
};

// Cell model: a disc of radius region_radius on the ground, the site at the
// center at height bs_height, hotspot sub-regions with higher user density
// and a regular population elsewhere.
struct ScenarioSpec
{
    double region_radius = 200.0;
    double bs_height = 25.0;
    std::vector<Hotspot> hotspots;
    double regular_weight = 2.0;
    double mean_user_count = 12.0;
    double user_power_dbm = 0.0;
    double noise_power_dbm = -94.0;
    double wavelength = 0.1;
    double rician_factor = 10.0;
    std::size_t n_nlos = 4;
    double nlos_angular_spread_deg = 30.0;
    double pathloss_exponent_los = 2.5;
    double pathloss_exponent_nlos = 3.5;
    DirectionalPattern pattern;
};

void validate(const ScenarioSpec &spec);

// Default cell: three hotspots with weights 1, 2 and 3 placed asymmetrically
// around the site, regular traffic carrying the remaining quarter of users.
ScenarioSpec default_scenario();

struct UserRealization
{
    std::vector<Vec3> positions;
    std::vector<std::vector<PropagationPath>> paths;

    std::size_t user_count() const { return positions.size(); }
};

// One random user drop: Poisson total count, weight-proportional assignment
// to hotspots or the regular region, uniform placement within the assigned
// sub-region, multipath profile per user. Fully determined by the stream.
UserRealization sample_users(const ScenarioSpec &spec, RngStream stream);

// User drops for realizations [0, n), each from its own substream of
// master_seed. Output is identical for any worker count.
std::vector<UserRealization> sample_user_sets(const ScenarioSpec &spec, std::size_t n,
                                              std::uint64_t master_seed, int workers = 1);

// Construction parameters of the fixed three-sector reference site.
struct SiteTemplate
{
    std::size_t n_surfaces = 15;
    SurfaceSpec surface = planar_grid(2, 2, 0.05);
    double feasible_radius = 3.0;
    double min_surface_distance = 0.25;
    double mount_radius = 1.0;
    double downtilt_deg = 10.0;
    double stack_spacing = 0.25;
};

// Fixed-position baseline: three sectors at azimuths 0/120/240 degrees with
// a common downtilt, the surfaces of each sector stacked along an axis
// orthogonal to the sector boresight. Deterministic; the result always
// passes check_constraints.
SiteGeometry fpa_three_sector(const SiteTemplate &tpl);

// Rotation-only movability: same optimizer, position steps disabled.
OptimizerConfig rotation_only_config(const OptimizerConfig &base);

struct FasMaConfig
{
    // Per-antenna in-plane movement range, as a square side length in
    // wavelengths, centered on the surface origin.
    double aperture_wavelengths = 4.0;
    double min_spacing_wavelengths = 0.5;
    // Refinement sweeps over all antennas; 0 keeps the starting layout.
    int passes = 1;
    std::size_t n_realizations = 1;
    std::uint64_t master_seed = 0;
    int workers = 1;
};

// Fluid/movable-antenna style baseline: rotations stay fixed while each
// antenna's in-plane offset is re-optimized for every channel realization
// separately (instantaneous adaptation). Returns the per-realization
// optimized sum capacities; realization i uses the same user drop as
// realization i of any other scheme run with the same master_seed.
std::vector<double> fas_ma_baseline(const SiteGeometry &site, const ScenarioSpec &scenario,
                                    const FasMaConfig &cfg);

} // namespace sixdma
