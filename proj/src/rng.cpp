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

#include "sixdma/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sixdma
{

std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t derive_key(std::uint64_t parent_key, std::uint64_t tag)
{
    return mix64(parent_key ^ mix64(tag));
}

RngStream::RngStream(std::uint64_t key) : key_(key)
{
    std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                      static_cast<std::uint32_t>(mix64(key)), static_cast<std::uint32_t>(mix64(key) >> 32)};
    engine_.seed(seq);
}

RngStream RngStream::child(std::uint64_t tag) const
{
    return RngStream(derive_key(key_, tag));
}

RngStream RngStream::child(std::uint64_t tag_a, std::uint64_t tag_b) const
{
    return RngStream(derive_key(derive_key(key_, tag_a), tag_b));
}

double RngStream::uniform()
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RngStream::uniform(double lo, double hi)
{
    if (!(lo <= hi))
        throw std::invalid_argument("uniform: empty interval");
    if (lo == hi)
        return lo;
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RngStream::normal()
{
    return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

std::complex<double> RngStream::complex_normal(double variance)
{
    if (variance < 0.0)
        throw std::invalid_argument("complex_normal: negative variance");
    const double s = std::sqrt(variance * 0.5);
    const double re = s * normal();
    const double im = s * normal();
    return {re, im};
}

std::uint64_t RngStream::uniform_index(std::uint64_t n)
{
    if (n == 0)
        throw std::invalid_argument("uniform_index: n must be positive");
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
}

std::uint64_t RngStream::poisson(double mean)
{
    if (!(mean > 0.0))
        throw std::invalid_argument("poisson: mean must be positive");
    return static_cast<std::uint64_t>(std::poisson_distribution<long long>(mean)(engine_));
}

RngStream realization_stream(std::uint64_t master_seed, std::uint64_t index)
{
    return RngStream(master_seed).child(stream_tag::realization, index);
}

} // namespace sixdma
