/*
 * Copyright 2026 The dp-ocp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DPOCP_RANDOM_H_
#define DPOCP_RANDOM_H_

#include <cstdint>
#include <random>

#include "dpocp/types.h"

namespace dpocp {

// All randomness flows through this engine. Streams are reproducible per
// seed within one build; std::normal_distribution is implementation defined,
// so bit-identical output across standard libraries is not promised.
using Rng = std::mt19937_64;

// Derives an independent engine for (seed, stream). Used to give every trial
// and every mechanism its own stream so parallel and serial runs agree.
inline Rng MakeRng(std::uint64_t seed, std::uint64_t stream = 0) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32), 0x9e3779b9u};
  return Rng(seq);
}

// Draws N(0, stddev^2 I_dim).
inline Vector GaussianVector(Rng& rng, Eigen::Index dim, double stddev) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector out(dim);
  for (Eigen::Index i = 0; i < dim; ++i) out[i] = stddev * normal(rng);
  return out;
}

}  // namespace dpocp

#endif  // DPOCP_RANDOM_H_
