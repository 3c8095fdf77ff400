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

#ifndef RSMA_PRECODING_HPP
#define RSMA_PRECODING_HPP

#include "rsma/channel.hpp"

namespace rsma {

// Raised when the user channels are too close to collinear for zero-forcing.
class SingularChannelError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Unit-norm beam directions plus the power split. The common stream gets
// p_total * t and each of the K private streams p_total * (1 - t) / K.
struct PrecoderSet {
    cvec common_dir;
    std::vector<cvec> private_dirs;
    double t = 0.0;
    double p_total = 0.0;

    std::size_t n_users() const { return private_dirs.size(); }
    double common_power() const { return p_total * t; }
    double private_power() const {
        return private_dirs.empty() ? 0.0 : p_total * (1.0 - t) / static_cast<double>(n_users());
    }
    // Effective complex gains h^H p including the power scaling.
    cplx common_gain(const cvec &h) const;
    cplx private_gain(const cvec &h, std::size_t k) const;
};

// Zero-forcing directions: pseudo-inverse of the matrix of normalized user
// channels, columns re-normalized to unit norm. Throws SingularChannelError
// when the normalized channel matrix is ill conditioned (ratio of extreme
// singular values above 1e8).
std::vector<cvec> zf_directions(const ChannelRealization &channels);

// Common (multicast) direction. K=1 returns the normalized channel; K=2 uses
// the closed-form equal-gain maximizer in the span of the two normalized
// channels; K>=3 uses the dominant left singular vector of the normalized
// channel matrix. Deterministic phase: first significant entry real positive.
cvec common_direction(const ChannelRealization &channels);

// Maximum ratio transmission: each user's normalized channel.
std::vector<cvec> mrt_directions(const ChannelRealization &channels);

// Bundles directions with a power split; validates unit norms, t in [0, 1]
// and p_total >= 0.
PrecoderSet assemble(const cvec &common_dir, const std::vector<cvec> &private_dirs, double t,
                     double p_total);

} // namespace rsma

#endif
