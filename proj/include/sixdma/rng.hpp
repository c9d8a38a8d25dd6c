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

#include <complex>
#include <cstdint>
#include <random>

namespace sixdma
{

// Counter-based stream splitting. Every stream is identified by a 64-bit key;
// child keys are derived from the parent key and an integer tag with a
// SplitMix64-style mixer, never from the parent's draw position. Engines are
// seeded from the key alone, so the stream layout is a pure function of the
// master seed and the tag path, independent of evaluation order and worker
// count.
std::uint64_t mix64(std::uint64_t z);
std::uint64_t derive_key(std::uint64_t parent_key, std::uint64_t tag);

// Tags for the top-level substream families of a run.
namespace stream_tag
{
inline constexpr std::uint64_t realization = 1; // Monte-Carlo realization index
inline constexpr std::uint64_t user = 2;        // per-user path draws inside one realization
inline constexpr std::uint64_t candidates = 3;  // optimizer move proposals
inline constexpr std::uint64_t csm_sample = 4;  // training configurations
inline constexpr std::uint64_t csm_measure = 5; // noisy training measurements
inline constexpr std::uint64_t train = 6;       // pose-optimization objective realizations
inline constexpr std::uint64_t eval = 7;        // held-out evaluation realizations
} // namespace stream_tag

class RngStream
{
  public:
    explicit RngStream(std::uint64_t key);

    // Derive an independent substream. Safe to call at any time; the child
    // depends only on this stream's key and the tag.
    RngStream child(std::uint64_t tag) const;
    RngStream child(std::uint64_t tag_a, std::uint64_t tag_b) const;

    std::uint64_t key() const { return key_; }

    double uniform();                     // [0, 1)
    double uniform(double lo, double hi); // [lo, hi)
    double normal();                      // standard normal
    std::complex<double> complex_normal(double variance); // CN(0, variance)
    std::uint64_t uniform_index(std::uint64_t n);          // {0, ..., n-1}
    std::uint64_t poisson(double mean);

  private:
    std::uint64_t key_;
    std::mt19937_64 engine_;
};

// Realization substream shared by every consumer that draws Monte-Carlo
// realizations, so that paired comparisons see identical draws.
RngStream realization_stream(std::uint64_t master_seed, std::uint64_t index);

} // namespace sixdma
