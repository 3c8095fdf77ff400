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

#include "rsma/fec.hpp"

#include <algorithm>
#include <cmath>

namespace rsma {

namespace {

bool is_power_of_two(std::size_t n) { return n >= 2 && (n & (n - 1)) == 0; }

std::size_t log2_size(std::size_t n) {
    std::size_t l = 0;
    while ((std::size_t(1) << l) < n)
        ++l;
    return l;
}

// In-place kernel transform x = u F^{(x) n}, natural order: stage s combines
// pairs (i, i + 2^s) within blocks of 2^{s+1}.
void kernel_transform(std::vector<std::uint8_t> &v) {
    const std::size_t n = v.size();
    for (std::size_t span = 1; span < n; span <<= 1)
        for (std::size_t base = 0; base < n; base += span << 1)
            for (std::size_t k = 0; k < span; ++k)
                v[base + k] ^= v[base + k + span];
}

// Bhattacharyya profile of the input bits given per-coded-position initial
// parameters, using the erasure-channel combining rules stage by stage from
// the channel side toward the inputs.
std::vector<double> bhattacharyya_profile(std::vector<double> z) {
    const std::size_t n = z.size();
    for (std::size_t span = n >> 1; span >= 1; span >>= 1)
        for (std::size_t base = 0; base < n; base += span << 1)
            for (std::size_t k = 0; k < span; ++k) {
                const double a = z[base + k];
                const double b = z[base + k + span];
                z[base + k] = a + b - a * b;
                z[base + k + span] = a * b;
            }
    return z;
}

PolarCodeSpec build_spec(std::size_t mother, std::size_t k_info, std::size_t transmit,
                         RateMatchScheme scheme, double design_snr_db) {
    PolarCodeSpec spec;
    spec.mother_length = mother;
    spec.info_length = k_info;
    spec.transmit_length = transmit;
    spec.rate_match = scheme;
    spec.design_snr_db = design_snr_db;

    std::vector<double> z0(mother, std::exp(-std::pow(10.0, design_snr_db / 10.0)));
    const std::size_t removed = mother - transmit;
    if (removed > 0) {
        if (scheme == RateMatchScheme::shorten)
            for (std::size_t j = transmit; j < mother; ++j)
                z0[j] = 0.0; // decoder knows these coded bits exactly
        else
            for (std::size_t j = 0; j < removed; ++j)
                z0[j] = 1.0; // punctured: no channel information
    }
    const std::vector<double> z = bhattacharyya_profile(std::move(z0));

    std::vector<std::uint8_t> frozen(mother, 0);
    std::size_t n_frozen = mother - k_info;
    if (scheme == RateMatchScheme::shorten && removed > 0) {
        // Tail inputs must be frozen to pin the dropped coded bits to zero.
        for (std::size_t i = transmit; i < mother; ++i)
            frozen[i] = 1;
        if (n_frozen < removed)
            throw std::invalid_argument("polar construct: rate too high for shortening");
        n_frozen -= removed;
    }
    std::vector<std::uint32_t> order;
    order.reserve(mother);
    for (std::size_t i = 0; i < mother; ++i)
        if (!frozen[i])
            order.push_back(static_cast<std::uint32_t>(i));
    // Least reliable first; equal parameters freeze the smaller index.
    std::stable_sort(order.begin(), order.end(), [&z](std::uint32_t i, std::uint32_t j) {
        if (z[i] != z[j])
            return z[i] > z[j];
        return i < j;
    });
    for (std::size_t i = 0; i < n_frozen; ++i)
        frozen[order[i]] = 1;

    for (std::size_t i = 0; i < mother; ++i)
        if (frozen[i])
            spec.frozen_set.push_back(static_cast<std::uint32_t>(i));
    return spec;
}

} // namespace

bool PolarCodeSpec::is_frozen(std::size_t i) const {
    return std::binary_search(frozen_set.begin(), frozen_set.end(),
                              static_cast<std::uint32_t>(i));
}

PolarCodeSpec construct(std::size_t mother_length, std::size_t info_length, double design_snr_db) {
    if (!is_power_of_two(mother_length))
        throw std::invalid_argument("polar construct: mother length must be a power of two >= 2");
    if (info_length == 0 || info_length > mother_length)
        throw std::invalid_argument("polar construct: info length out of range");
    return build_spec(mother_length, info_length, mother_length, RateMatchScheme::shorten,
                      design_snr_db);
}

PolarCodeSpec construct_rate_matched(std::size_t transmit_length, double code_rate,
                                     double design_snr_db, RateMatchScheme scheme) {
    if (transmit_length < 2)
        throw std::invalid_argument("polar construct: transmit length too small");
    if (!(code_rate > 0.0 && code_rate < 1.0))
        throw std::invalid_argument("polar construct: code rate must lie in (0, 1)");
    const std::size_t k_info = static_cast<std::size_t>(
        std::llround(code_rate * static_cast<double>(transmit_length)));
    if (k_info == 0 || k_info >= transmit_length)
        throw std::invalid_argument("polar construct: degenerate rounded info length");
    std::size_t mother = 2;
    while (mother < transmit_length)
        mother <<= 1;
    return build_spec(mother, k_info, transmit_length, scheme, design_snr_db);
}

std::vector<std::uint8_t> encode(const PolarCodeSpec &spec,
                                 const std::vector<std::uint8_t> &info_bits) {
    if (info_bits.size() != spec.info_length)
        throw std::invalid_argument("polar encode: info length mismatch");
    std::vector<std::uint8_t> u(spec.mother_length, 0);
    std::size_t next = 0;
    std::size_t fi = 0;
    for (std::size_t i = 0; i < spec.mother_length; ++i) {
        if (fi < spec.frozen_set.size() && spec.frozen_set[fi] == i) {
            ++fi;
            continue;
        }
        u[i] = info_bits[next++] & 1u;
    }
    kernel_transform(u);
    if (spec.transmit_length == spec.mother_length)
        return u;
    const std::size_t removed = spec.mother_length - spec.transmit_length;
    if (spec.rate_match == RateMatchScheme::shorten)
        return std::vector<std::uint8_t>(u.begin(), u.begin() + spec.transmit_length);
    return std::vector<std::uint8_t>(u.begin() + removed, u.end());
}

namespace {

// Exact pairwise boxplus. The correction terms vanish below double precision
// once |a +- b| is large, which dominates after a few iterations.
inline double boxplus(double a, double b) {
    const double mag = std::min(std::abs(a), std::abs(b));
    double v = ((a < 0.0) != (b < 0.0)) ? -mag : mag;
    const double s = std::abs(a + b);
    const double d = std::abs(a - b);
    if (s < 37.0)
        v += std::log1p(std::exp(-s));
    if (d < 37.0)
        v -= std::log1p(std::exp(-d));
    return v;
}

inline double clipped(double v, double clip) { return std::clamp(v, -clip, clip); }

} // namespace

BpResult bp_decode(const PolarCodeSpec &spec, const LlrBlock &channel_llrs,
                   std::size_t max_iters) {
    const std::size_t n = spec.mother_length;
    const std::size_t stages = log2_size(n);
    if (channel_llrs.values.size() != spec.transmit_length)
        throw std::invalid_argument("bp_decode: channel LLR length mismatch");
    const double clip = channel_llrs.clip > 0.0 ? channel_llrs.clip : kLlrClip;

    // L and R beliefs on the (stages+1) x n graph; level 0 faces the input
    // bits, level `stages` faces the channel.
    std::vector<double> l((stages + 1) * n, 0.0);
    std::vector<double> r((stages + 1) * n, 0.0);
    auto L = [&l, n](std::size_t s, std::size_t i) -> double & { return l[s * n + i]; };
    auto R = [&r, n](std::size_t s, std::size_t i) -> double & { return r[s * n + i]; };

    const std::size_t removed = n - spec.transmit_length;
    for (std::size_t i = 0; i < n; ++i) {
        double v;
        if (spec.rate_match == RateMatchScheme::shorten) {
            v = i < spec.transmit_length ? channel_llrs.values[i] : clip;
        } else {
            v = i < removed ? 0.0 : channel_llrs.values[i - removed];
        }
        L(stages, i) = clipped(v, clip);
    }
    std::vector<std::uint8_t> frozen_mask(n, 0);
    for (std::uint32_t i : spec.frozen_set) {
        R(0, i) = clip;
        frozen_mask[i] = 1;
    }

    std::vector<std::uint8_t> u_hat(n, 0), x_hat(n, 0), y_hard(n, 0), u_prev(n, 0);
    BpResult out;
    std::size_t stable_count = 0;
    const std::size_t stall_window = 8;

    for (std::size_t iter = 1; iter <= max_iters; ++iter) {
        // Left pass: channel level toward input level.
        for (std::size_t s = stages; s-- > 0;) {
            const std::size_t span = std::size_t(1) << s;
            for (std::size_t base = 0; base < n; base += span << 1)
                for (std::size_t k = 0; k < span; ++k) {
                    const std::size_t up = base + k;
                    const std::size_t lo = up + span;
                    const double lu = L(s + 1, up);
                    const double ll = L(s + 1, lo);
                    const double ru = R(s, up);
                    const double rl = R(s, lo);
                    L(s, up) = clipped(boxplus(lu, ll + rl), clip);
                    L(s, lo) = clipped(boxplus(lu, ru) + ll, clip);
                }
        }
        // Right pass: input level toward channel level.
        for (std::size_t s = 0; s < stages; ++s) {
            const std::size_t span = std::size_t(1) << s;
            for (std::size_t base = 0; base < n; base += span << 1)
                for (std::size_t k = 0; k < span; ++k) {
                    const std::size_t up = base + k;
                    const std::size_t lo = up + span;
                    const double lu = L(s + 1, up);
                    const double ll = L(s + 1, lo);
                    const double ru = R(s, up);
                    const double rl = R(s, lo);
                    R(s + 1, up) = clipped(boxplus(ru, ll + rl), clip);
                    R(s + 1, lo) = clipped(boxplus(ru, lu) + rl, clip);
                }
        }
        out.iterations = iter;

        for (std::size_t i = 0; i < n; ++i) {
            u_hat[i] = frozen_mask[i] ? 0 : (L(0, i) + R(0, i) < 0.0 ? 1 : 0);
            y_hard[i] = (L(stages, i) + R(stages, i) < 0.0) ? 1 : 0;
        }
        x_hat = u_hat;
        kernel_transform(x_hat);
        if (x_hat == y_hard) {
            out.converged = true;
            break;
        }
        // Stalled beliefs stop changing hard decisions long before max_iters;
        // cutting them short does not alter the decoded output.
        if (iter > 1 && u_hat == u_prev) {
            if (++stable_count >= stall_window)
                break;
        } else {
            stable_count = 0;
        }
        u_prev = u_hat;
    }

    out.info_llrs.clip = clip;
    out.coded_llrs.clip = clip;
    out.info_llrs.values.reserve(spec.info_length);
    out.hard_info.reserve(spec.info_length);
    for (std::size_t i = 0; i < n; ++i) {
        if (frozen_mask[i])
            continue;
        const double v = clipped(L(0, i) + R(0, i), clip);
        out.info_llrs.values.push_back(v);
        out.hard_info.push_back(v < 0.0 ? 1 : 0);
    }
    out.coded_llrs.values.resize(spec.transmit_length);
    for (std::size_t i = 0; i < spec.transmit_length; ++i) {
        const std::size_t j = spec.rate_match == RateMatchScheme::shorten ? i : i + removed;
        out.coded_llrs.values[i] = clipped(L(stages, j) + R(stages, j), clip);
    }
    return out;
}

} // namespace rsma
