/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/support/oracles.hpp
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

#ifndef GAZEFIT_TESTS_ORACLES_HPP
#define GAZEFIT_TESTS_ORACLES_HPP

#include "gazefit/types.hpp"
#include "gazefit/vergence.hpp"

#include <utility>

namespace gazefit::testing {

struct BruteForceVergence
{
    Vec3d target;
    double distance;
    double k_left;
    double k_right;
};

/**
 * @brief Independent closest-point oracle: dense grid search over the two
 * ray parameters (k_left, k_right) minimising the connecting segment length,
 * refined by repeatedly zooming the grid onto the best cell. Never calls the
 * linear-algebra solver it's used to check. Test use only.
 */
inline BruteForceVergence brute_force_vergence(const GazeRayd& left, const GazeRayd& right,
                                               double range = 10.0, int steps = 61, int zoom_rounds = 24)
{
    auto segment_sq = [&](double kl, double kr) {
        const Vec3d a = left.origin + kl * left.direction;
        const Vec3d b = right.origin + kr * right.direction;
        return (a - b).squaredNorm();
    };

    double centre_l = 0.0, centre_r = 0.0;
    double window = range;
    double best_l = 0.0, best_r = 0.0;
    double best = segment_sq(0.0, 0.0);
    for (int round = 0; round < zoom_rounds; ++round)
    {
        for (int i = 0; i < steps; ++i)
        {
            const double kl = centre_l - window + 2.0 * window * i / (steps - 1);
            for (int j = 0; j < steps; ++j)
            {
                const double kr = centre_r - window + 2.0 * window * j / (steps - 1);
                const double value = segment_sq(kl, kr);
                if (value < best)
                {
                    best = value;
                    best_l = kl;
                    best_r = kr;
                }
            }
        }
        centre_l = best_l;
        centre_r = best_r;
        window = 4.0 * window / (steps - 1); // zoom onto +-2 cells around the best grid point
    }

    BruteForceVergence result;
    result.k_left = best_l;
    result.k_right = best_r;
    const Vec3d a = left.origin + best_l * left.direction;
    const Vec3d b = right.origin + best_r * right.direction;
    result.target = 0.5 * (a + b);
    result.distance = (a - b).norm();
    return result;
}

} // namespace gazefit::testing

#endif /* GAZEFIT_TESTS_ORACLES_HPP */
