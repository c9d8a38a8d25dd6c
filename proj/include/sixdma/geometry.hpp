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

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace sixdma
{

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Rotation angles (alpha, beta, gamma) about the x, y and z axes of the
// global frame, applied in that order: R = Rz(gamma) * Ry(beta) * Rx(alpha).
struct RotationAngles
{
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

// Maps an angle to the canonical interval [0, 2*pi).
double normalize_angle(double angle);

RotationAngles normalized(const RotationAngles &u);

Mat3 rotation_matrix(const RotationAngles &u);

// Inverse of rotation_matrix up to angle normalization. For inputs within
// 1e-12 of the gimbal-lock branch (|beta| = pi/2) alpha is pinned to zero
// and the remaining freedom is folded into gamma.
RotationAngles rotation_angles_from_matrix(const Mat3 &r);

Mat3 skew(const Vec3 &v);

// Closest rotation matrix in the Frobenius norm (polar factor via SVD,
// with a determinant fix so the result is proper).
Mat3 nearest_rotation(const Mat3 &m);

// Antenna layout shared by all surfaces of a site: element offsets in the
// surface-local frame and the local boresight direction.
struct SurfaceSpec
{
    std::vector<Vec3> local_elements;
    Vec3 local_normal = Vec3(0.0, 0.0, 1.0);

    std::size_t elements_per_surface() const { return local_elements.size(); }
};

// Rectangular rows x cols element grid with the given spacing, centered on
// the local origin and lying in the plane orthogonal to local_normal (the
// local z axis by default).
SurfaceSpec planar_grid(std::size_t rows, std::size_t cols, double spacing);

struct SurfacePose
{
    Vec3 position = Vec3::Zero();
    RotationAngles rotation;
    // Frozen surfaces keep their pose through optimization and repair.
    bool frozen = false;
};

struct SiteGeometry
{
    SurfaceSpec spec;
    std::vector<SurfacePose> poses;
    // All surface centers must stay within this distance of the site origin
    // (where the processing unit sits).
    double feasible_radius = 0.0;
    // Lower bound on the distance between any two surface centers.
    double min_surface_distance = 0.0;

    std::size_t surface_count() const { return poses.size(); }
    std::size_t antenna_count() const { return poses.size() * spec.elements_per_surface(); }
};

struct ConstraintViolation
{
    // One of "reflection", "blockage", "min_distance", "region".
    std::string kind;
    std::size_t surface_a = 0;
    std::size_t surface_b = 0; // meaningful for pairwise kinds only
    // Signed slack; negative means violated. Units are meters for distance
    // constraints and a dot product (meters) for half-space constraints.
    double margin = 0.0;
};

struct ConstraintReport
{
    std::vector<ConstraintViolation> violations;

    bool feasible() const { return violations.empty(); }
    std::string describe() const;
};

// Slack applied when classifying a constraint as violated, so that poses
// sitting exactly on a constraint boundary (common in regular layouts)
// survive a round trip through floating point.
inline constexpr double kFeasibilityTol = 1e-9;

ConstraintReport check_constraints(const SiteGeometry &site);

// Outward normal of surface s in the global frame.
Vec3 surface_normal(const SiteGeometry &site, std::size_t s);

// Global position of element n of surface s.
Vec3 global_antenna_position(const SiteGeometry &site, std::size_t s, std::size_t n);

// Positions of every element of every surface, surface-major.
std::vector<Vec3> all_antenna_positions(const SiteGeometry &site);

// Returns `proposal` untouched when it is already feasible. Otherwise runs
// a small number of repair sweeps (clipping into the region, separating
// close centers, rotating surfaces away from whatever they face) and
// returns the first feasible result. Frozen poses are never moved. When no
// feasible repair is found the fallback is returned if provided, otherwise
// a std::runtime_error is thrown.
std::vector<SurfacePose> project_to_feasible(const SiteGeometry &site,
                                             const std::vector<SurfacePose> &proposal,
                                             const std::vector<SurfacePose> *fallback = nullptr);

} // namespace sixdma
