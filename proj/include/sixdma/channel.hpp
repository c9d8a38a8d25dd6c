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

#include "sixdma/geometry.hpp"
#include "sixdma/rng.hpp"

#include <complex>
#include <vector>

namespace sixdma
{

struct ScenarioSpec;

// Parametric single-element power pattern in the style of the 3GPP channel
// model standards: quadratic roll-off in both principal planes, capped
// front-to-back attenuation, overall side attenuation limit.
struct DirectionalPattern
{
    double g_max_db = 8.0;
    double hpbw_deg = 65.0;
    double side_att_max_db = 30.0;
    double front_back_db = 30.0;
};

void validate(const DirectionalPattern &pattern);

struct PropagationPath
{
    // Unit vector from the site toward the source of this path, global frame.
    Vec3 direction = Vec3::UnitX();
    // Complex amplitude, path loss included.
    std::complex<double> complex_gain{0.0, 0.0};
};

// Stacked complex channel coefficients of one user, surface-major: entries
// [s*N, (s+1)*N) belong to surface s.
struct UserChannel
{
    Eigen::VectorXcd coefficients;
};

// Per-element phase response of surface `pose` toward a plane wave from
// `direction`: element n carries exp(j*(2*pi/wavelength)*direction.r_n)
// with r_n the element's global position.
Eigen::VectorXcd steering_vector(const SurfacePose &pose, const SurfaceSpec &spec,
                                 const Vec3 &direction, double wavelength);

// Linear power gain of one element of the given surface toward `direction`
// (global frame). Boresight is the rotated local_normal.
double element_gain(const SurfacePose &pose, const SurfaceSpec &spec, const Vec3 &direction,
                    const DirectionalPattern &pattern);

// Channel of one user: sum over paths of gain-weighted steering vectors,
// per surface, concatenated surface-major.
UserChannel synthesize_channel(const SiteGeometry &site, const std::vector<PropagationPath> &paths,
                               const DirectionalPattern &pattern, double wavelength);

// Draws the multipath profile of a user at `user_position` (site frame):
// one deterministic line-of-sight path plus n_nlos scattered paths with
// complex Gaussian gains, scaled so the LOS-to-NLOS power ratio equals the
// configured Rician factor.
std::vector<PropagationPath> user_paths(const ScenarioSpec &scenario, const Vec3 &user_position,
                                        RngStream &stream);

} // namespace sixdma
