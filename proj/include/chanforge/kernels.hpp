// SPDX-License-Identifier: Apache-2.0
//
// chanforge: MIMO channel synthesis from per-ray propagation data
// Copyright (C) 2026 The chanforge authors
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

// Inner loops of the two channel constructions. Each kernel has a serial reference version and an
// OpenMP version that splits the receive rows across threads. Both accumulate every entry over the
// terms in the same order, so their results are bitwise identical.

#include "chanforge/cmatrix.hpp"
#include "chanforge/geometry.hpp"

#include <span>
#include <vector>

namespace chanforge::kernels
{

// weight * a_rx * a_tx^H
struct DyadTerm
{
    Complex weight;
    std::vector<Complex> a_rx;
    std::vector<Complex> a_tx;
};

// Gamma^order * A(d) * exp(-j 2 pi d / lambda) with d = |tx_images[q] - rx_elements[p]|.
// A(d) = lambda / (4 pi d), or lambda / (4 pi center_length_m) in phase-only mode.
struct SphericalTerm
{
    Complex coeff;
    std::vector<Vec3> tx_images;
    double center_length_m = 0.0;
};

struct SphericalSettings
{
    double wavelength_m = 0.0;
    bool phase_only = false;
};

void geometric_serial(std::span<const DyadTerm> terms, CMatrix &h);
void geometric_omp(std::span<const DyadTerm> terms, CMatrix &h, int threads);

void spherical_serial(std::span<const SphericalTerm> terms, std::span<const Vec3> rx_elements,
                      const SphericalSettings &settings, CMatrix &h);
void spherical_omp(std::span<const SphericalTerm> terms, std::span<const Vec3> rx_elements,
                   const SphericalSettings &settings, CMatrix &h, int threads);

} // namespace chanforge::kernels
