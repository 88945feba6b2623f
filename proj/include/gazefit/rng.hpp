/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: include/gazefit/rng.hpp
 *
 * Copyright 2026 The gazefit authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#ifndef GAZEFIT_RNG_HPP
#define GAZEFIT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace gazefit {

/**
 * @brief Deterministic random numbers on top of std::mt19937_64.
 *
 * The engine's bit stream is pinned by the standard, and the uniform/normal
 * transforms are written out here instead of using std::*_distribution
 * (whose outputs are implementation-defined), so seeded outputs are
 * reproducible bit-for-bit.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform double in [0, 1), 53 random bits.
    double uniform()
    {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two fresh uniforms per draw).
    double normal()
    {
        const double u1 = 1.0 - uniform(); // (0, 1]; keeps the log finite
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    double normal(double mean, double sigma) { return mean + sigma * normal(); }

private:
    std::mt19937_64 engine_;
};

/// Splitmix64 step; used to derive independent per-item seeds from one base seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index)
{
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace gazefit

#endif /* GAZEFIT_RNG_HPP */
