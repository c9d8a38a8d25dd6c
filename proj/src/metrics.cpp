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

#include "sixdma/metrics.hpp"

#include "sixdma/parallel.hpp"
#include "sixdma/summation.hpp"

#include <cmath>
#include <stdexcept>

namespace sixdma
{

double sum_capacity_from_gram(const Eigen::MatrixXcd &gram)
{
    if (gram.rows() != gram.cols())
        throw std::invalid_argument("sum_capacity_from_gram: gram matrix must be square");
    if (gram.rows() == 0)
        return 0.0;
    Eigen::MatrixXcd m = gram;
    m.diagonal().array() += 1.0;
    const Eigen::LLT<Eigen::MatrixXcd> llt(m);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("sum_capacity_from_gram: gram matrix is not positive definite");
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        log_det += std::log(llt.matrixLLT()(i, i).real());
    return 2.0 * log_det / std::log(2.0);
}

double sum_capacity(const ChannelRealization &realization)
{
    const std::size_t k = realization.per_user.size();
    if (realization.user_powers.size() != k)
        throw std::invalid_argument("sum_capacity: user_powers size does not match user count");
    if (!(realization.noise_power > 0.0))
        throw std::invalid_argument("sum_capacity: noise power must be positive");
    if (k == 0)
        return 0.0;

    const Eigen::Index dim = realization.per_user[0].coefficients.size();
    for (const UserChannel &ch : realization.per_user)
        if (ch.coefficients.size() != dim)
            throw std::invalid_argument("sum_capacity: channel vectors have mismatched lengths");
    for (double p : realization.user_powers)
        if (!(p > 0.0))
            throw std::invalid_argument("sum_capacity: user powers must be positive");

    // Scaled channel matrix A with column k = sqrt(p_k / sigma^2) h_k; the
    // capacity determinant identity reduces B*N x B*N to K x K.
    Eigen::MatrixXcd a(dim, static_cast<Eigen::Index>(k));
    for (std::size_t u = 0; u < k; ++u)
        a.col(static_cast<Eigen::Index>(u)) =
            std::sqrt(realization.user_powers[u] / realization.noise_power) *
            realization.per_user[u].coefficients;
    return sum_capacity_from_gram(a.adjoint() * a);
}

ChannelRealization build_realization(const SiteGeometry &site, const ScenarioSpec &scenario,
                                     const UserRealization &users)
{
    ChannelRealization real;
    real.noise_power = dbm_to_watts(scenario.noise_power_dbm);
    const double p = dbm_to_watts(scenario.user_power_dbm);
    real.per_user.reserve(users.user_count());
    real.user_powers.assign(users.user_count(), p);
    for (std::size_t u = 0; u < users.user_count(); ++u)
        real.per_user.push_back(
            synthesize_channel(site, users.paths[u], scenario.pattern, scenario.wavelength));
    return real;
}

double capacity_of_realization(const SiteGeometry &site, const ScenarioSpec &scenario,
                               const UserRealization &users)
{
    if (users.user_count() == 0)
        return 0.0;
    return sum_capacity(build_realization(site, scenario, users));
}

CapacityEstimate summarize_capacities(const std::vector<double> &capacities)
{
    if (capacities.empty())
        throw std::invalid_argument("summarize_capacities: need at least one value");
    CapacityEstimate est;
    est.n_realizations = capacities.size();
    const double n = static_cast<double>(capacities.size());
    est.mean = pairwise_sum(capacities) / n;
    if (capacities.size() == 1)
    {
        est.std_error = 0.0;
        return est;
    }
    std::vector<double> sq(capacities.size());
    for (std::size_t i = 0; i < capacities.size(); ++i)
    {
        const double d = capacities[i] - est.mean;
        sq[i] = d * d;
    }
    est.std_error = std::sqrt(pairwise_sum(sq) / (n - 1.0) / n);
    return est;
}

CapacityEstimate monte_carlo_capacity(const SiteGeometry &site, const ScenarioSpec &scenario,
                                      std::size_t n, std::uint64_t master_seed, int workers)
{
    if (n == 0)
        throw std::invalid_argument("monte_carlo_capacity: need at least one realization");
    validate(scenario);
    const ConstraintReport report = check_constraints(site);
    if (!report.feasible())
        throw std::invalid_argument("monte_carlo_capacity: infeasible site geometry: " + report.describe());

    std::vector<double> caps(n);
    parallel_for(n, workers, [&](std::size_t i) {
        const UserRealization users = sample_users(scenario, realization_stream(master_seed, i));
        caps[i] = capacity_of_realization(site, scenario, users);
    });
    return summarize_capacities(caps);
}

} // namespace sixdma
