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

#include "sixdma/scenario.hpp"

#include <cstdint>
#include <vector>

namespace sixdma
{

// One drawn set of user channels with their transmit powers and the common
// receiver noise power, all in linear watts.
struct ChannelRealization
{
    std::vector<UserChannel> per_user;
    std::vector<double> user_powers;
    double noise_power = 1.0;
};

struct CapacityEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n_realizations = 0;
};

// Uplink multiple-access sum capacity log2 det(I + sigma^-2 sum_k p_k h_k h_k^H)
// in bits/s/Hz. Evaluated through the equivalent K x K Gram determinant.
// An empty realization has capacity zero.
double sum_capacity(const ChannelRealization &realization);

// Capacity from an already scaled K x K Gram matrix with entries
// sigma^-2 sqrt(p_k p_l) h_k^H h_l.
double sum_capacity_from_gram(const Eigen::MatrixXcd &gram);

// Synthesizes the channel matrix for a drawn user set against the given
// site and fills in the power bookkeeping.
ChannelRealization build_realization(const SiteGeometry &site, const ScenarioSpec &scenario,
                                     const UserRealization &users);

double capacity_of_realization(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const UserRealization &users);

// Mean and standard error of sum_capacity over n independent realizations.
// Realization i always uses substream i of master_seed and the reduction
// order is fixed, so the result is bit-identical for any worker count.
CapacityEstimate monte_carlo_capacity(const SiteGeometry &site, const ScenarioSpec &scenario,
                                      std::size_t n, std::uint64_t master_seed, int workers = 1);

// Mean/standard-error reduction used by monte_carlo_capacity, exposed for
// callers that already hold per-realization capacities.
CapacityEstimate summarize_capacities(const std::vector<double> &capacities);

} // namespace sixdma
