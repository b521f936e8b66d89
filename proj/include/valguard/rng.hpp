/*
 * Copyright 2026 the valguard authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#ifndef VALGUARD_RNG_HPP
#define VALGUARD_RNG_HPP

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "valguard/matrix.hpp"

namespace valguard {

/// Deterministic random stream keyed by (seed, stream_id). Identical keys
/// produce identical sequences on every platform, and streams derived from
/// distinct tag paths are statistically independent, so work items can be
/// scheduled in any order (or in parallel) without changing results.
///
/// Generator: xoshiro256** with splitmix64 state expansion of the key.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Child stream whose id is a hash of this stream's id and the tags.
  /// Used to give every (repetition, fold, permutation) its own substream.
  RngStream derive(std::initializer_list<std::uint64_t> tags) const;
  RngStream derive(std::span<const std::uint64_t> tags) const;

  std::uint64_t next_u64();

  /// Uniform in [0, 1).
  double next_double();

  /// Standard normal deviate (Marsaglia polar method, internally cached pair).
  double next_normal();

  /// Unbiased uniform integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound);

  /// In-place Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(next_below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Uniform random permutation of {0, ..., n-1}.
  std::vector<std::size_t> permutation(std::size_t n);

private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::array<std::uint64_t, 4> s_{};
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

/// Matrix of i.i.d. standard normal entries; errors on zero dimensions.
Matrix standard_normal_matrix(RngStream& rng, std::size_t rows, std::size_t cols);

}  // namespace valguard

#endif
