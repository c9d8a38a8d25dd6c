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

#include "sixdma/channel.hpp"

#include "sixdma/scenario.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sixdma
{

namespace
{

constexpr double kDegPerRad = 180.0 / std::numbers::pi;

struct PatternFrame
{
    Vec3 x; // boresight
    Vec3 y;
    Vec3 z; // pattern zenith axis
};

// Orthonormal frame with x along the local boresight; the zenith axis is
// chosen deterministically from whichever global axis is least aligned
// with the boresight.
PatternFrame pattern_frame(const Vec3 &local_normal)
{
    PatternFrame f;
    f.x = local_normal.normalized();
    const Vec3 helper = (std::abs(f.x.z()) < 0.9) ? Vec3(0.0, 0.0, 1.0) : Vec3(1.0, 0.0, 0.0);
    f.z = (helper - helper.dot(f.x) * f.x).normalized();
    f.y = f.z.cross(f.x);
    return f;
}

double clamp_unit(double x)
{
    return std::max(-1.0, std::min(1.0, x));
}

} // namespace

void validate(const DirectionalPattern &pattern)
{
    if (!(pattern.hpbw_deg > 0.0) || !(pattern.hpbw_deg < 180.0))
        throw std::invalid_argument("DirectionalPattern: hpbw_deg must lie in (0, 180)");
    if (pattern.side_att_max_db < 0.0 || pattern.front_back_db < 0.0)
        throw std::invalid_argument("DirectionalPattern: attenuation limits must be nonnegative");
}

Eigen::VectorXcd steering_vector(const SurfacePose &pose, const SurfaceSpec &spec,
                                 const Vec3 &direction, double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("steering_vector: wavelength must be positive");
    const Mat3 r = rotation_matrix(pose.rotation);
    const double k = 2.0 * std::numbers::pi / wavelength;
    Eigen::VectorXcd out(static_cast<Eigen::Index>(spec.elements_per_surface()));
    for (std::size_t n = 0; n < spec.elements_per_surface(); ++n)
    {
        const Vec3 rn = pose.position + r * spec.local_elements[n];
        const double phase = k * direction.dot(rn);
        out[static_cast<Eigen::Index>(n)] = std::polar(1.0, phase);
    }
    return out;
}

double element_gain(const SurfacePose &pose, const SurfaceSpec &spec, const Vec3 &direction,
                    const DirectionalPattern &pattern)
{
    const Vec3 local = (rotation_matrix(pose.rotation).transpose() * direction).normalized();
    const PatternFrame f = pattern_frame(spec.local_normal);

    const double theta_deg = std::acos(clamp_unit(local.dot(f.z))) * kDegPerRad;
    const double phi_deg = std::atan2(local.dot(f.y), local.dot(f.x)) * kDegPerRad;

    const double tv = (theta_deg - 90.0) / pattern.hpbw_deg;
    const double th = phi_deg / pattern.hpbw_deg;
    const double att_v = std::min(12.0 * tv * tv, pattern.front_back_db);
    const double att_h = std::min(12.0 * th * th, pattern.front_back_db);
    const double gain_db = pattern.g_max_db - std::min(att_v + att_h, pattern.side_att_max_db);
    return std::pow(10.0, gain_db / 10.0);
}

UserChannel synthesize_channel(const SiteGeometry &site, const std::vector<PropagationPath> &paths,
                               const DirectionalPattern &pattern, double wavelength)
{
    if (paths.empty())
        throw std::invalid_argument("synthesize_channel: path list is empty");
    if (!(wavelength > 0.0))
        throw std::invalid_argument("synthesize_channel: wavelength must be positive");

    const std::size_t n = site.spec.elements_per_surface();
    UserChannel ch;
    ch.coefficients = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(site.antenna_count()));
    for (std::size_t s = 0; s < site.surface_count(); ++s)
    {
        auto block = ch.coefficients.segment(static_cast<Eigen::Index>(s * n), static_cast<Eigen::Index>(n));
        for (const PropagationPath &path : paths)
        {
            const double g = element_gain(site.poses[s], site.spec, path.direction, pattern);
            block += path.complex_gain * std::sqrt(g) *
                     steering_vector(site.poses[s], site.spec, path.direction, wavelength);
        }
    }
    return ch;
}

std::vector<PropagationPath> user_paths(const ScenarioSpec &scenario, const Vec3 &user_position,
                                        RngStream &stream)
{
    const double horizontal = std::hypot(user_position.x(), user_position.y());
    if (horizontal > scenario.region_radius + 1e-9)
        throw std::invalid_argument("user_paths: user lies outside the scenario region");
    if (!(scenario.rician_factor > 0.0))
        throw std::invalid_argument("user_paths: rician_factor must be positive");

    const double dist = user_position.norm();
    if (!(dist > 0.0))
        throw std::invalid_argument("user_paths: user coincides with the site origin");

    const Vec3 k_los = user_position / dist;
    const double lambda = scenario.wavelength;
    // Free-space amplitude stretched to the configured power-law exponent.
    const double a_los = lambda / (4.0 * std::numbers::pi * dist) *
                         std::pow(dist, -(scenario.pathloss_exponent_los - 2.0) / 2.0);

    std::vector<PropagationPath> paths;
    paths.push_back({k_los, std::polar(a_los, -2.0 * std::numbers::pi * dist / lambda)});

    if (std::isinf(scenario.rician_factor) || scenario.n_nlos == 0)
        return paths;

    const double spread = scenario.nlos_angular_spread_deg / kDegPerRad;
    const double cos_spread = std::cos(spread);
    // Orthonormal basis with k_los as the third axis, for cap sampling.
    const Vec3 e1 = k_los.unitOrthogonal();
    const Vec3 e2 = k_los.cross(e1);
    const double per_path_var = a_los * a_los / (scenario.rician_factor * static_cast<double>(scenario.n_nlos));

    for (std::size_t l = 0; l < scenario.n_nlos; ++l)
    {
        // Uniform direction within the spherical cap around the LOS direction.
        const double c = stream.uniform(cos_spread, 1.0);
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        const double phi = stream.uniform(0.0, 2.0 * std::numbers::pi);
        const Vec3 dir = c * k_los + s * (std::cos(phi) * e1 + std::sin(phi) * e2);
        paths.push_back({dir.normalized(), stream.complex_normal(per_path_var)});
    }
    return paths;
}

} // namespace sixdma
