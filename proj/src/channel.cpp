// SPDX-License-Identifier: Apache-2.0
//
// rsma-linklab - link-level simulation toolkit for rate-splitting downlink transceivers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rsma/channel.hpp"

#include <cmath>
#include <numbers>

namespace rsma {

void OneRingSpec::validate() const {
    if (n_tx == 0)
        throw std::invalid_argument("OneRingSpec: n_tx must be positive");
    if (n_users == 0)
        throw std::invalid_argument("OneRingSpec: n_users must be positive");
    if (n_tx < n_users)
        throw std::invalid_argument("OneRingSpec: array must not be overloaded (n_tx >= n_users)");
    if (!(delta > 0.0))
        throw std::invalid_argument("OneRingSpec: delta must be positive");
    if (!(delta <= std::numbers::pi / 2.0))
        throw std::invalid_argument("OneRingSpec: delta must not exceed pi/2");
    if (!std::isfinite(theta))
        throw std::invalid_argument("OneRingSpec: theta must be finite");
}

ComplexMatrix covariance_matrix(const OneRingSpec &spec, double quad_tol) {
    spec.validate();
    const std::size_t n = spec.n_tx;
    ComplexMatrix r(n, n);
    // Entry depends on the antenna index difference only; integrate once per
    // lag and fill the Hermitian Toeplitz structure.
    std::vector<cplx> lag(n);
    lag[0] = cplx(1.0, 0.0);
    // Normalize by the represented interval width, not the analytic 2*delta:
    // for tiny spreads the rounding gap between the two inflates every
    // off-diagonal magnitude past 1 and drags eigenvalues below the promised
    // -1e-10 floor.
    const double lo = spec.theta - spec.delta;
    const double hi = spec.theta + spec.delta;
    for (std::size_t d = 1; d < n; ++d) {
        const double dd = static_cast<double>(d);
        const auto integrand = [dd](double alpha) {
            const double arg = -std::numbers::pi * dd * std::sin(alpha);
            return cplx(std::cos(arg), std::sin(arg));
        };
        // Entry accuracy must sit well inside the eigenvalue floor once the
        // integral is normalized by the spread.
        lag[d] = integrate_1d(integrand, lo, hi, quad_tol * spec.delta * 1e-2) / (hi - lo);
    }
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k) {
            if (m >= k)
                r(m, k) = lag[m - k];
            else
                r(m, k) = std::conj(lag[k - m]);
        }
    return r;
}

KLFactor kl_factor(const ComplexMatrix &r, double eig_threshold) {
    if (r.rows() != r.cols() || r.rows() == 0)
        throw std::invalid_argument("kl_factor: covariance must be square");
    EigenDecomposition eig = hermitian_eigendecomposition(r);
    const double lead = eig.eigenvalues.empty() ? 0.0 : eig.eigenvalues[0];
    if (!(lead > 0.0))
        throw std::invalid_argument("kl_factor: covariance has no positive eigenvalue");
    std::size_t rank = 0;
    while (rank < eig.eigenvalues.size() && eig.eigenvalues[rank] > eig_threshold * lead)
        ++rank;
    KLFactor out;
    out.rank = rank;
    out.factor = ComplexMatrix(r.rows(), rank);
    for (std::size_t c = 0; c < rank; ++c) {
        const double s = std::sqrt(eig.eigenvalues[c]);
        for (std::size_t row = 0; row < r.rows(); ++row)
            out.factor(row, c) = eig.eigenvectors(row, c) * s;
    }
    return out;
}

ChannelRealization sample_channel(const KLFactor &factor, std::size_t k_users, SeededRng &rng) {
    const std::size_t n = factor.factor.rows();
    const std::size_t rank = factor.rank;
    if (rank == 0 || factor.factor.cols() != rank)
        throw std::invalid_argument("sample_channel: factor has no columns");
    ChannelRealization out;
    out.h.resize(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        cvec w = sample_complex_gaussian(rng, rank, 1.0);
        cvec h(n, cplx(0.0, 0.0));
        for (std::size_t c = 0; c < rank; ++c)
            for (std::size_t row = 0; row < n; ++row)
                h[row] += factor.factor(row, c) * w[c];
        out.h[k] = std::move(h);
    }
    return out;
}

} // namespace rsma
