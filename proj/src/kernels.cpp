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

#include "chanforge/kernels.hpp"

#include <cmath>

namespace chanforge::kernels
{

namespace
{

inline void geometric_row(std::span<const DyadTerm> terms, std::size_t p, std::span<Complex> row)
{
    for (const auto &t : terms)
    {
        const Complex wr = t.weight * t.a_rx[p];
        for (std::size_t q = 0; q < row.size(); ++q)
            row[q] += wr * std::conj(t.a_tx[q]);
    }
}

inline void spherical_row(std::span<const SphericalTerm> terms, const Vec3 &rx, const SphericalSettings &s,
                          std::span<Complex> row)
{
    const double lambda = s.wavelength_m;
    const double k0 = 2.0 * kPi / lambda;
    for (const auto &t : terms)
    {
        const double centre_amp = lambda / (4.0 * kPi * t.center_length_m);
        for (std::size_t q = 0; q < row.size(); ++q)
        {
            const double d = distance(t.tx_images[q], rx);
            const double amp = s.phase_only ? centre_amp : lambda / (4.0 * kPi * d);
            row[q] += t.coeff * std::polar(amp, -k0 * d);
        }
    }
}

} // namespace

// Serial versions walk terms in the outer loop (path-major); the OpenMP versions own one receive
// row per iteration and walk the terms inside it. Per entry the additions happen in term order in
// both, which is what makes the results identical.

void geometric_serial(std::span<const DyadTerm> terms, CMatrix &h)
{
    for (const auto &t : terms)
        for (std::size_t p = 0; p < h.rows(); ++p)
        {
            const Complex wr = t.weight * t.a_rx[p];
            auto row = h.row(p);
            for (std::size_t q = 0; q < h.cols(); ++q)
                row[q] += wr * std::conj(t.a_tx[q]);
        }
}

void geometric_omp(std::span<const DyadTerm> terms, CMatrix &h, int threads)
{
    const auto rows = static_cast<long long>(h.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long long p = 0; p < rows; ++p)
        geometric_row(terms, static_cast<std::size_t>(p), h.row(static_cast<std::size_t>(p)));
}

void spherical_serial(std::span<const SphericalTerm> terms, std::span<const Vec3> rx_elements,
                      const SphericalSettings &settings, CMatrix &h)
{
    const double lambda = settings.wavelength_m;
    const double k0 = 2.0 * kPi / lambda;
    for (const auto &t : terms)
    {
        const double centre_amp = lambda / (4.0 * kPi * t.center_length_m);
        for (std::size_t p = 0; p < h.rows(); ++p)
        {
            auto row = h.row(p);
            for (std::size_t q = 0; q < h.cols(); ++q)
            {
                const double d = distance(t.tx_images[q], rx_elements[p]);
                const double amp = settings.phase_only ? centre_amp : lambda / (4.0 * kPi * d);
                row[q] += t.coeff * std::polar(amp, -k0 * d);
            }
        }
    }
}

void spherical_omp(std::span<const SphericalTerm> terms, std::span<const Vec3> rx_elements,
                   const SphericalSettings &settings, CMatrix &h, int threads)
{
    const auto rows = static_cast<long long>(h.rows());
#pragma omp parallel for num_threads(threads) schedule(static)
    for (long long p = 0; p < rows; ++p)
    {
        const auto i = static_cast<std::size_t>(p);
        spherical_row(terms, rx_elements[i], settings, h.row(i));
    }
}

} // namespace chanforge::kernels
