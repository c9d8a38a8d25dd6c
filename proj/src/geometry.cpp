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

#include "sixdma/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace sixdma
{

namespace
{

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double clamp_unit(double x)
{
    return std::max(-1.0, std::min(1.0, x));
}

} // namespace

double normalize_angle(double angle)
{
    if (!std::isfinite(angle))
        throw std::invalid_argument("normalize_angle: angle must be finite");
    double a = std::fmod(angle, kTwoPi);
    if (a < 0.0)
        a += kTwoPi;
    if (a >= kTwoPi)
        a = 0.0;
    return a;
}

RotationAngles normalized(const RotationAngles &u)
{
    return {normalize_angle(u.alpha), normalize_angle(u.beta), normalize_angle(u.gamma)};
}

Mat3 rotation_matrix(const RotationAngles &u)
{
    const double ca = std::cos(u.alpha), sa = std::sin(u.alpha);
    const double cb = std::cos(u.beta), sb = std::sin(u.beta);
    const double cg = std::cos(u.gamma), sg = std::sin(u.gamma);
    Mat3 r;
    r << cg * cb, cg * sb * sa - sg * ca, cg * sb * ca + sg * sa, //
        sg * cb, sg * sb * sa + cg * ca, sg * sb * ca - cg * sa, //
        -sb, cb * sa, cb * ca;
    return r;
}

RotationAngles rotation_angles_from_matrix(const Mat3 &r)
{
    RotationAngles u;
    const double s = -r(2, 0);
    if (std::abs(s) > 1.0 - 1e-12)
    {
        // Gimbal lock: only the sum/difference of alpha and gamma is
        // determined, so pin alpha to zero.
        u.alpha = 0.0;
        u.beta = (s > 0.0) ? 0.5 * std::numbers::pi : -0.5 * std::numbers::pi;
        u.gamma = std::atan2(-r(0, 1), r(1, 1));
    }
    else
    {
        u.beta = std::asin(clamp_unit(s));
        u.alpha = std::atan2(r(2, 1), r(2, 2));
        u.gamma = std::atan2(r(1, 0), r(0, 0));
    }
    return normalized(u);
}

Mat3 skew(const Vec3 &v)
{
    Mat3 m;
    m << 0.0, -v.z(), v.y(), //
        v.z(), 0.0, -v.x(), //
        -v.y(), v.x(), 0.0;
    return m;
}

Mat3 nearest_rotation(const Mat3 &m)
{
    Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 u = svd.matrixU();
    const Mat3 v = svd.matrixV();
    if ((u * v.transpose()).determinant() < 0.0)
        u.col(2) = -u.col(2);
    return u * v.transpose();
}

SurfaceSpec planar_grid(std::size_t rows, std::size_t cols, double spacing)
{
    if (rows == 0 || cols == 0)
        throw std::invalid_argument("planar_grid: grid must have at least one element");
    if (!(spacing > 0.0))
        throw std::invalid_argument("planar_grid: spacing must be positive");
    SurfaceSpec spec;
    spec.local_elements.reserve(rows * cols);
    const double x0 = -0.5 * spacing * static_cast<double>(cols - 1);
    const double y0 = -0.5 * spacing * static_cast<double>(rows - 1);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j)
            spec.local_elements.emplace_back(x0 + spacing * static_cast<double>(j),
                                             y0 + spacing * static_cast<double>(i), 0.0);
    return spec;
}

std::string ConstraintReport::describe() const
{
    if (violations.empty())
        return "feasible";
    std::string out;
    char buf[160];
    for (const auto &v : violations)
    {
        if (v.kind == "reflection" || v.kind == "min_distance")
            std::snprintf(buf, sizeof(buf), "%s(%zu,%zu) margin=%.6g; ", v.kind.c_str(), v.surface_a,
                          v.surface_b, v.margin);
        else
            std::snprintf(buf, sizeof(buf), "%s(%zu) margin=%.6g; ", v.kind.c_str(), v.surface_a, v.margin);
        out += buf;
    }
    out.pop_back();
    out.pop_back();
    return out;
}

ConstraintReport check_constraints(const SiteGeometry &site)
{
    const std::size_t b = site.surface_count();
    ConstraintReport report;
    std::vector<Vec3> normals(b);
    for (std::size_t i = 0; i < b; ++i)
        normals[i] = surface_normal(site, i);

    for (std::size_t i = 0; i < b; ++i)
    {
        const Vec3 &qi = site.poses[i].position;

        // Signals leaving surface i must not hit the front side of any other
        // surface, so every other center has to lie in the back half-space.
        for (std::size_t j = 0; j < b; ++j)
        {
            if (j == i)
                continue;
            const Vec3 d = site.poses[j].position - qi;
            if (d.squaredNorm() == 0.0)
                continue; // coincident centers are caught by min_distance
            const double margin = -normals[i].dot(d);
            if (margin < -kFeasibilityTol)
                report.violations.push_back({"reflection", i, j, margin});
        }

        // The processing unit at the origin must sit behind every surface.
        {
            const double margin = -normals[i].dot(Vec3::Zero() - qi);
            if (margin < -kFeasibilityTol)
                report.violations.push_back({"blockage", i, i, margin});
        }

        for (std::size_t j = i + 1; j < b; ++j)
        {
            const double dist = (site.poses[j].position - qi).norm();
            const double margin = dist - site.min_surface_distance;
            if (margin < -kFeasibilityTol)
                report.violations.push_back({"min_distance", i, j, margin});
        }

        {
            const double margin = site.feasible_radius - qi.norm();
            if (margin < -kFeasibilityTol)
                report.violations.push_back({"region", i, i, margin});
        }
    }
    return report;
}

Vec3 surface_normal(const SiteGeometry &site, std::size_t s)
{
    if (s >= site.surface_count())
        throw std::out_of_range("surface_normal: surface index out of range");
    return rotation_matrix(site.poses[s].rotation) * site.spec.local_normal;
}

Vec3 global_antenna_position(const SiteGeometry &site, std::size_t s, std::size_t n)
{
    if (s >= site.surface_count())
        throw std::out_of_range("global_antenna_position: surface index out of range");
    if (n >= site.spec.elements_per_surface())
        throw std::out_of_range("global_antenna_position: element index out of range");
    return site.poses[s].position + rotation_matrix(site.poses[s].rotation) * site.spec.local_elements[n];
}

std::vector<Vec3> all_antenna_positions(const SiteGeometry &site)
{
    std::vector<Vec3> out;
    out.reserve(site.antenna_count());
    for (std::size_t s = 0; s < site.surface_count(); ++s)
    {
        const Mat3 r = rotation_matrix(site.poses[s].rotation);
        for (const Vec3 &e : site.spec.local_elements)
            out.push_back(site.poses[s].position + r * e);
    }
    return out;
}

namespace
{

// Rotates surface s so that its normal tilts away from the worst offending
// half-space target (another surface center, or the processing unit).
bool repair_rotation(const SiteGeometry &site, std::vector<SurfacePose> &poses, std::size_t s)
{
    const Vec3 n = rotation_matrix(poses[s].rotation) * site.spec.local_normal;
    const Vec3 &q = poses[s].position;
    Vec3 worst_dir = Vec3::Zero();
    double worst = kFeasibilityTol;
    auto consider = [&](const Vec3 &target) {
        const Vec3 d = target - q;
        const double len = d.norm();
        if (len == 0.0)
            return;
        const Vec3 unit = d / len;
        const double dot = n.dot(unit);
        if (dot > worst)
        {
            worst = dot;
            worst_dir = unit;
        }
    };
    for (std::size_t j = 0; j < poses.size(); ++j)
        if (j != s)
            consider(poses[j].position);
    consider(Vec3::Zero());
    if (worst <= kFeasibilityTol)
        return false;

    Vec3 axis = worst_dir.cross(n);
    const double axis_len = axis.norm();
    if (axis_len < 1e-12)
    {
        // Normal points straight at the target: any perpendicular axis works.
        axis = n.unitOrthogonal();
    }
    else
    {
        axis /= axis_len;
    }
    const double angle = std::acos(clamp_unit(n.dot(worst_dir)));
    const double delta = (0.5 * std::numbers::pi - angle) + 1e-6;
    const Mat3 fixed = Eigen::AngleAxisd(delta, axis).toRotationMatrix() *
                       rotation_matrix(poses[s].rotation);
    poses[s].rotation = rotation_angles_from_matrix(fixed);
    return true;
}

} // namespace

std::vector<SurfacePose> project_to_feasible(const SiteGeometry &site,
                                             const std::vector<SurfacePose> &proposal,
                                             const std::vector<SurfacePose> *fallback)
{
    if (proposal.size() != site.surface_count())
        throw std::invalid_argument("project_to_feasible: proposal size does not match site");

    SiteGeometry probe = site;
    probe.poses = proposal;
    if (check_constraints(probe).feasible())
        return proposal;

    const std::size_t b = proposal.size();
    constexpr int kMaxSweeps = 50;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep)
    {
        // Pull centers back into the feasible ball.
        for (std::size_t i = 0; i < b; ++i)
        {
            if (probe.poses[i].frozen)
                continue;
            const double r = probe.poses[i].position.norm();
            if (r > site.feasible_radius && r > 0.0)
                probe.poses[i].position *= site.feasible_radius / r;
        }

        // Separate centers that sit too close, splitting the correction
        // between the two unless one of them is frozen.
        for (std::size_t i = 0; i < b; ++i)
        {
            for (std::size_t j = i + 1; j < b; ++j)
            {
                Vec3 d = probe.poses[j].position - probe.poses[i].position;
                double dist = d.norm();
                if (dist >= site.min_surface_distance)
                    continue;
                Vec3 dir = (dist > 0.0) ? Vec3(d / dist) : Vec3::UnitX();
                const double target = site.min_surface_distance * (1.0 + 1e-12);
                const double push = target - dist;
                const bool fi = probe.poses[i].frozen;
                const bool fj = probe.poses[j].frozen;
                if (fi && fj)
                    continue;
                if (fi)
                    probe.poses[j].position += push * dir;
                else if (fj)
                    probe.poses[i].position -= push * dir;
                else
                {
                    probe.poses[i].position -= 0.5 * push * dir;
                    probe.poses[j].position += 0.5 * push * dir;
                }
            }
        }

        // Tilt surfaces away from anything still in front of them.
        for (std::size_t i = 0; i < b; ++i)
        {
            if (probe.poses[i].frozen)
                continue;
            repair_rotation(site, probe.poses, i);
        }

        if (check_constraints(probe).feasible())
            return probe.poses;
    }

    if (fallback != nullptr)
        return *fallback;
    throw std::runtime_error("project_to_feasible: no feasible repair found");
}

} // namespace sixdma
