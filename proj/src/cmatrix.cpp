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

#include "chanforge/cmatrix.hpp"

#include "chanforge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace chanforge
{

namespace
{
void require_same_shape(const CMatrix &a, const CMatrix &b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("matrix dimension mismatch");
}
} // namespace

CMatrix CMatrix::identity(std::size_t n)
{
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = 1.0;
    return m;
}

CMatrix CMatrix::adjoint() const
{
    CMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c)
            t(c, r) = std::conj((*this)(r, c));
    return t;
}

double CMatrix::frobenius_norm() const
{
    double sum = 0.0;
    for (const auto &v : data_)
        sum += std::norm(v);
    return std::sqrt(sum);
}

double CMatrix::max_abs() const
{
    double m = 0.0;
    for (const auto &v : data_)
        m = std::max(m, std::abs(v));
    return m;
}

CMatrix &CMatrix::operator+=(const CMatrix &o)
{
    require_same_shape(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] += o.data_[i];
    return *this;
}

CMatrix &CMatrix::operator-=(const CMatrix &o)
{
    require_same_shape(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i)
        data_[i] -= o.data_[i];
    return *this;
}

CMatrix &CMatrix::operator*=(Complex s)
{
    for (auto &v : data_)
        v *= s;
    return *this;
}

CMatrix multiply(const CMatrix &a, const CMatrix &b)
{
    if (a.cols() != b.rows())
        throw ValidationError("matrix dimension mismatch in multiply");
    CMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k)
        {
            const Complex aik = a(i, k);
            for (std::size_t j = 0; j < b.cols(); ++j)
                c(i, j) += aik * b(k, j);
        }
    return c;
}

CMatrix gram(const CMatrix &h)
{
    const std::size_t n = h.rows();
    CMatrix g(n, n);
    for (std::size_t i = 0; i < n; ++i)
    {
        for (std::size_t j = i; j < n; ++j)
        {
            Complex s{0.0, 0.0};
            for (std::size_t k = 0; k < h.cols(); ++k)
                s += h(i, k) * std::conj(h(j, k));
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
        g(i, i) = g(i, i).real();
    }
    return g;
}

Complex inner_product(const CMatrix &a, const CMatrix &b)
{
    require_same_shape(a, b);
    Complex s{0.0, 0.0};
    const auto av = a.values();
    const auto bv = b.values();
    for (std::size_t i = 0; i < av.size(); ++i)
        s += std::conj(av[i]) * bv[i];
    return s;
}

} // namespace chanforge
