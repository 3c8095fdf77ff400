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

#include "rsma/reference.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rsma::ref {

McEstimate cc_entropy_exact(const cvec &points, double noise_var, SeededRng &rng,
                            std::size_t n_noise) {
    const std::size_t m_points = points.size();
    if (m_points == 0) {
        throw std::invalid_argument("rates: empty point set");
    }
    if (!(noise_var > 0.0)) {
        throw std::invalid_argument("rates: noise variance must be positive");
    }
    if (n_noise == 0) {
        throw std::invalid_argument("rates: at least one noise draw required");
    }
    constexpr double ln2 = 0.6931471805599453;
    std::vector<cplx> diff(m_points * m_points);
    for (std::size_t m = 0; m < m_points; ++m) {
        for (std::size_t l = 0; l < m_points; ++l) {
            diff[m * m_points + l] = points[m] - points[l];
        }
    }
    const cvec noise = sample_complex_gaussian(rng, n_noise, noise_var);
    const double inv_var = 1.0 / noise_var;

    std::vector<double> per_draw(n_noise);
    for (std::size_t j = 0; j < n_noise; ++j) {
        const cplx nj = noise[j];
        double lse_sum = 0.0;
        for (std::size_t m = 0; m < m_points; ++m) {
            const cplx *row = diff.data() + m * m_points;
            double mx = -std::numeric_limits<double>::infinity();
            double acc = 0.0;
            for (std::size_t l = 0; l < m_points; ++l) {
                const cplx z = row[l] + nj;
                const double w = -(z.real() * z.real() + z.imag() * z.imag()) * inv_var;
                if (w > mx) {
                    acc = acc * std::exp(mx - w) + 1.0;
                    mx = w;
                } else {
                    acc += std::exp(w - mx);
                }
            }
            lse_sum += mx + std::log(acc);
        }
        per_draw[j] = lse_sum / static_cast<double>(m_points) / ln2 +
                      (nj.real() * nj.real() + nj.imag() * nj.imag()) * inv_var / ln2;
    }

    double mean = 0.0;
    for (double v : per_draw) {
        mean += v;
    }
    mean /= static_cast<double>(n_noise);
    double var = 0.0;
    for (double v : per_draw) {
        var += (v - mean) * (v - mean);
    }
    McEstimate est;
    est.value = mean;
    if (n_noise > 1) {
        var /= static_cast<double>(n_noise - 1);
        est.std_error = std::sqrt(var / static_cast<double>(n_noise));
    }
    return est;
}

} // namespace rsma::ref
