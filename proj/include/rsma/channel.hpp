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

#ifndef RSMA_CHANNEL_HPP
#define RSMA_CHANNEL_HPP

#include "rsma/numerics.hpp"

namespace rsma {

// Geometry of the scattering ring seen from a uniform linear array with
// half-wavelength spacing: all users share the center angle theta (radians)
// and angular spread delta (radians).
struct OneRingSpec {
    std::size_t n_tx = 4;
    double theta = 1.0471975511965976; // pi/3
    double delta = 0.3490658503988659; // pi/9
    std::size_t n_users = 2;

    void validate() const;
};

// Transmit-side correlation matrix. Entry (m, n) integrates the array phase
// response over the angular spread; Hermitian with unit diagonal by
// construction.
ComplexMatrix covariance_matrix(const OneRingSpec &spec, double quad_tol = 1e-9);

// Karhunen-Loeve factor: columns are the eigenvectors that survive the
// relative eigenvalue threshold, scaled by sqrt(eigenvalue), so that
// factor * factor^H reconstructs the covariance up to the discarded tail.
struct KLFactor {
    ComplexMatrix factor; // n_tx x rank
    std::size_t rank = 0;
};

KLFactor kl_factor(const ComplexMatrix &r, double eig_threshold = 1e-10);

struct ChannelRealization {
    std::vector<cvec> h; // one n_tx vector per user

    std::size_t n_users() const { return h.size(); }
    std::size_t n_tx() const { return h.empty() ? 0 : h[0].size(); }
};

// Draws each user's channel as factor * w with w iid unit complex Gaussian.
// Users consume the rng sequentially, so one stream yields one realization.
ChannelRealization sample_channel(const KLFactor &factor, std::size_t k_users, SeededRng &rng);

} // namespace rsma

#endif
