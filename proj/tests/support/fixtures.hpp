/*
 * gazefit - model-based binocular gaze fitting with an eye-region morphable model.
 *
 * File: tests/support/fixtures.hpp
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

#ifndef GAZEFIT_TESTS_FIXTURES_HPP
#define GAZEFIT_TESTS_FIXTURES_HPP

#include "gazefit/camera.hpp"
#include "gazefit/rng.hpp"
#include "gazefit/scene.hpp"
#include "gazefit/synthetic_basis.hpp"

#include <vector>

namespace gazefit::testing {

inline const LinearBasis& fixture_basis()
{
    static const LinearBasis basis = synthetic_basis(SyntheticBasisConfig{}, 7);
    return basis;
}

inline CameraIntrinsics fixture_camera() { return {600.0, 600.0, 320.0, 240.0, 640, 480}; }

inline std::vector<SyntheticScene> fixture_scenes(int count, const NoiseSpec& noise, std::uint64_t seed)
{
    std::vector<SyntheticScene> scenes;
    scenes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
        scenes.push_back(generate_scene(fixture_basis(), fixture_camera(), SceneRanges{}, noise,
                                        derive_seed(seed, static_cast<std::uint64_t>(i))));
    return scenes;
}

} // namespace gazefit::testing

#endif /* GAZEFIT_TESTS_FIXTURES_HPP */
