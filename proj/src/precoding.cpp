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

#include "rsma/precoding.hpp"

#include <cmath>

namespace rsma {

namespace {

cvec normalized(const cvec &h, const char *who) {
    const double n = norm2(h);
    if (!(n > 0.0))
        throw std::invalid_argument(std::string(who) + ": zero channel vector");
    cvec out(h);
    for (cplx &z : out)
        z /= n;
    return out;
}

ComplexMatrix normalized_channel_matrix(const ChannelRealization &channels, const char *who) {
    if (channels.n_users() == 0)
        throw std::invalid_argument(std::string(who) + ": no users");
    const std::size_t n = channels.n_tx();
    ComplexMatrix hbar(n, channels.n_users());
    for (std::size_t k = 0; k < channels.n_users(); ++k) {
        if (channels.h[k].size() != n)
            throw std::invalid_argument(std::string(who) + ": inconsistent channel dimensions");
        hbar.set_column(k, normalized(channels.h[k], who));
    }
    return hbar;
}

void fix_phase(cvec &v) {
    for (const cplx &z : v) {
        if (std::abs(z) > 1e-12) {
            const cplx rot = std::conj(z) / std::abs(z);
            for (cplx &w : v)
                w *= rot;
            return;
        }
    }
}

// Solves (K x K Hermitian positive definite) G X = I by Gauss-Jordan with
// partial pivoting. K is at most the antenna count, so no blocking needed.
ComplexMatrix invert_small(ComplexMatrix g) {
    const std::size_t n = g.rows();
    ComplexMatrix inv = ComplexMatrix::identity(n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(g(r, col)) > std::abs(g(pivot, col)))
                pivot = r;
        if (std::abs(g(pivot, col)) <= 1e-300)
            throw SingularChannelError("zf_directions: singular normalized channel Gram matrix");
        if (pivot != col)
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(g(pivot, c), g(col, c));
                std::swap(inv(pivot, c), inv(col, c));
            }
        const cplx d = g(col, col);
        for (std::size_t c = 0; c < n; ++c) {
            g(col, c) /= d;
            inv(col, c) /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col)
                continue;
            const cplx f = g(r, col);
            if (f == cplx(0.0, 0.0))
                continue;
            for (std::size_t c = 0; c < n; ++c) {
                g(r, c) -= f * g(col, c);
                inv(r, c) -= f * inv(col, c);
            }
        }
    }
    return inv;
}

} // namespace

cplx PrecoderSet::common_gain(const cvec &h) const {
    if (common_dir.empty())
        return cplx(0.0, 0.0);
    return std::sqrt(common_power()) * inner_product(h, common_dir);
}

cplx PrecoderSet::private_gain(const cvec &h, std::size_t k) const {
    return std::sqrt(private_power()) * inner_product(h, private_dirs.at(k));
}

std::vector<cvec> zf_directions(const ChannelRealization &channels) {
    const std::size_t k_users = channels.n_users();
    ComplexMatrix hbar = normalized_channel_matrix(channels, "zf_directions");
    if (k_users > channels.n_tx())
        throw std::invalid_argument("zf_directions: more users than antennas");

    ComplexMatrix gram = hbar.adjoint() * hbar;
    // Condition check on the Gram spectrum: its eigenvalues are the squared
    // singular values of the normalized channel matrix.
    EigenDecomposition eig = hermitian_eigendecomposition(gram, 1e-8);
    const double lmax = eig.eigenvalues.front();
    const double lmin = eig.eigenvalues.back();
    if (!(lmin > 0.0) || std::sqrt(lmax / lmin) >= 1e8)
        throw SingularChannelError("zf_directions: channels are numerically collinear");

    ComplexMatrix p = hbar * invert_small(gram);
    std::vector<cvec> dirs(k_users);
    for (std::size_t k = 0; k < k_users; ++k) {
        cvec col = p.column(k);
        const double n = norm2(col);
        if (!(n > 0.0))
            throw SingularChannelError("zf_directions: degenerate pseudo-inverse column");
        for (cplx &z : col)
            z /= n;
        dirs[k] = std::move(col);
    }
    return dirs;
}

cvec common_direction(const ChannelRealization &channels) {
    const std::size_t k_users = channels.n_users();
    ComplexMatrix hbar = normalized_channel_matrix(channels, "common_direction");
    cvec dir;
    if (k_users == 1) {
        dir = hbar.column(0);
    } else if (k_users == 2) {
        // Equal-gain maximizer over the span of the two normalized channels:
        // phase-align the second channel onto the first and take the
        // normalized bisector. Nearly collinear channels fall back to the
        // first channel, which the bisector approaches anyway.
        const cvec h1 = hbar.column(0);
        const cvec h2 = hbar.column(1);
        const cplx rho = inner_product(h1, h2);
        const double a = std::abs(rho);
        if (a > 1.0 - 1e-10) {
            dir = h1;
        } else {
            const cplx rot = a > 0.0 ? std::conj(rho) / a : cplx(1.0, 0.0);
            dir.resize(h1.size());
            for (std::size_t i = 0; i < h1.size(); ++i)
                dir[i] = h1[i] + h2[i] * rot;
            const double n = norm2(dir);
            for (cplx &z : dir)
                z /= n;
        }
    } else {
        dir = dominant_left_singular_vector(hbar);
    }
    fix_phase(dir);
    return dir;
}

std::vector<cvec> mrt_directions(const ChannelRealization &channels) {
    std::vector<cvec> dirs(channels.n_users());
    for (std::size_t k = 0; k < channels.n_users(); ++k)
        dirs[k] = normalized(channels.h[k], "mrt_directions");
    return dirs;
}

PrecoderSet assemble(const cvec &common_dir, const std::vector<cvec> &private_dirs, double t,
                     double p_total) {
    if (!(t >= 0.0 && t <= 1.0))
        throw std::invalid_argument("assemble: t must lie in [0, 1]");
    if (!(p_total >= 0.0))
        throw std::invalid_argument("assemble: p_total must be non-negative");
    if (private_dirs.empty())
        throw std::invalid_argument("assemble: need at least one private direction");
    const auto check_unit = [](const cvec &v) {
        if (std::abs(norm2(v) - 1.0) > 1e-9)
            throw std::invalid_argument("assemble: directions must be unit norm");
    };
    if (!common_dir.empty())
        check_unit(common_dir);
    for (const cvec &v : private_dirs)
        check_unit(v);
    PrecoderSet out;
    out.common_dir = common_dir;
    out.private_dirs = private_dirs;
    out.t = t;
    out.p_total = p_total;
    return out;
}

} // namespace rsma
