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

#include <cstddef>
#include <vector>

namespace sixdma
{

// Pairwise (cascade) summation over a fixed index order. The reduction tree
// depends only on the element count, so results are bit-identical no matter
// how the values were produced, and rounding error grows as O(log n) rather
// than O(n).
inline double pairwise_sum(const double *values, std::size_t n)
{
    if (n == 0)
        return 0.0;
    if (n == 1)
        return values[0];
    if (n <= 8)
    {
        double acc = values[0];
        for (std::size_t i = 1; i < n; ++i)
            acc += values[i];
        return acc;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(values, half) + pairwise_sum(values + half, n - half);
}

inline double pairwise_sum(const std::vector<double> &values)
{
    return pairwise_sum(values.data(), values.size());
}

} // namespace sixdma
