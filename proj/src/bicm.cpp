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

#include "rsma/bicm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace rsma {

namespace {

std::uint32_t gray_to_binary(std::uint32_t g) {
    std::uint32_t b = g;
    while (g >>= 1)
        b ^= g;
    return b;
}

// Amplitude of one axis from its MSB-first bit group: the group is read as a
// reflected Gray code whose all-zero word is the most positive level.
double axis_amplitude(std::uint32_t axis_bits, std::uint32_t levels) {
    const std::uint32_t idx = gray_to_binary(axis_bits);
    return static_cast<double>(levels - 1) - 2.0 * static_cast<double>(idx);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

inline double clip_llr(double v, double clip) {
    if (std::isnan(v))
        return 0.0;
    return std::clamp(v, -clip, clip);
}

// Streaming log-sum-exp accumulator (exact mode) or running max (max-log).
struct LlrAccumulator {
    double max_term = kNegInf;
    double sum = 0.0; // sum of exp(term - max_term)

    void add(double term, bool max_log) {
        if (term == kNegInf)
            return;
        if (max_log) {
            max_term = std::max(max_term, term);
            return;
        }
        if (term <= max_term) {
            sum += std::exp(term - max_term);
        } else {
            sum = sum * std::exp(max_term - term) + 1.0;
            max_term = term;
        }
    }
    double value(bool max_log) const {
        if (max_term == kNegInf)
            return kNegInf;
        return max_log ? max_term : max_term + std::log(sum);
    }
};

double finish_llr(const LlrAccumulator &n0, const LlrAccumulator &n1, bool max_log, double clip) {
    const double v0 = n0.value(max_log);
    const double v1 = n1.value(max_log);
    if (v0 == kNegInf && v1 == kNegInf)
        return 0.0;
    if (v0 == kNegInf)
        return -clip;
    if (v1 == kNegInf)
        return clip;
    return clip_llr(v0 - v1, clip);
}

} // namespace

Constellation::Constellation(std::string name, std::size_t bits) : name_(std::move(name)), bits_(bits) {
    const std::size_t m = std::size_t(1) << bits;
    const std::size_t half = bits / 2;
    const std::uint32_t levels = std::uint32_t(1) << half;
    // Exact unit-energy scale: per-axis mean square is (levels^2 - 1) / 3.
    const double scale =
        1.0 / std::sqrt(2.0 * (static_cast<double>(levels) * levels - 1.0) / 3.0);
    points_.resize(m);
    for (std::size_t label = 0; label < m; ++label) {
        std::uint32_t ibits = 0, qbits = 0;
        for (std::size_t l = 0; l < bits; ++l) {
            const std::uint32_t bit = (label >> (bits - 1 - l)) & 1u;
            if (l % 2 == 0)
                ibits = (ibits << 1) | bit;
            else
                qbits = (qbits << 1) | bit;
        }
        points_[label] = scale * cplx(axis_amplitude(ibits, levels), axis_amplitude(qbits, levels));
    }
}

const Constellation &Constellation::qpsk() {
    static const Constellation c("qpsk", 2);
    return c;
}
const Constellation &Constellation::qam16() {
    static const Constellation c("16qam", 4);
    return c;
}
const Constellation &Constellation::qam64() {
    static const Constellation c("64qam", 6);
    return c;
}
const Constellation &Constellation::qam256() {
    static const Constellation c("256qam", 8);
    return c;
}

const Constellation &Constellation::by_name(const std::string &name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    if (low == "qpsk" || low == "4qam")
        return qpsk();
    if (low == "16qam")
        return qam16();
    if (low == "64qam")
        return qam64();
    if (low == "256qam")
        return qam256();
    throw std::invalid_argument("Constellation::by_name: unknown constellation '" + name + "'");
}

std::vector<std::uint32_t> interleaver_permutation(std::size_t n, std::uint64_t seed) {
    if (n == 0)
        throw std::invalid_argument("interleaver_permutation: empty block");
    std::vector<std::uint32_t> perm(n);
    for (std::size_t i = 0; i < n; ++i)
        perm[i] = static_cast<std::uint32_t>(i);
    SeededRng rng(seed, 0x496e746cULL); // dedicated interleaver stream tag
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::uint64_t j = rng.next_below(i + 1);
        std::swap(perm[i], perm[j]);
    }
    return perm;
}

namespace {

template <class T>
std::vector<T> apply_forward(const std::vector<T> &in, std::uint64_t seed) {
    const auto perm = interleaver_permutation(in.size(), seed);
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[i] = in[perm[i]];
    return out;
}

template <class T>
std::vector<T> apply_inverse(const std::vector<T> &in, std::uint64_t seed) {
    const auto perm = interleaver_permutation(in.size(), seed);
    std::vector<T> out(in.size());
    for (std::size_t i = 0; i < in.size(); ++i)
        out[perm[i]] = in[i];
    return out;
}

} // namespace

std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t> &bits, std::uint64_t seed) {
    return apply_forward(bits, seed);
}
std::vector<double> interleave(const std::vector<double> &values, std::uint64_t seed) {
    return apply_forward(values, seed);
}
std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t> &bits, std::uint64_t seed) {
    return apply_inverse(bits, seed);
}
std::vector<double> deinterleave(const std::vector<double> &llrs, std::uint64_t seed) {
    return apply_inverse(llrs, seed);
}

cvec map_symbols(const std::vector<std::uint8_t> &bits, const Constellation &c) {
    const std::size_t m = c.bits_per_symbol();
    if (bits.size() % m != 0)
        throw std::invalid_argument("map_symbols: bit count not divisible by bits per symbol");
    cvec out(bits.size() / m);
    for (std::size_t s = 0; s < out.size(); ++s) {
        std::size_t label = 0;
        for (std::size_t l = 0; l < m; ++l)
            label = (label << 1) | (bits[s * m + l] & 1u);
        out[s] = c.point(label);
    }
    return out;
}

std::vector<double> demap_marginal(cplx y, cplx gain, double eff_noise_var, const Constellation &c,
                                   bool max_log, double clip) {
    if (!(eff_noise_var > 0.0))
        throw std::invalid_argument("demap_marginal: noise variance must be positive");
    const std::size_t m = c.bits_per_symbol();
    const std::size_t npoints = c.size();
    double metric[256];
    for (std::size_t x = 0; x < npoints; ++x)
        metric[x] = -std::norm(y - gain * c.point(x)) / eff_noise_var;
    std::vector<double> llrs(m);
    for (std::size_t l = 0; l < m; ++l) {
        LlrAccumulator n0, n1;
        const std::size_t shift = m - 1 - l;
        for (std::size_t x = 0; x < npoints; ++x) {
            if ((x >> shift) & 1u)
                n1.add(metric[x], max_log);
            else
                n0.add(metric[x], max_log);
        }
        llrs[l] = finish_llr(n0, n1, max_log, clip);
    }
    return llrs;
}

JointLlrs demap_joint(cplx y, cplx g_c, cplx g_p, const Constellation &xc, const Constellation &xp,
                      double noise_var, const std::vector<double> &common_priors,
                      JointTarget target, bool max_log, double clip) {
    if (!(noise_var > 0.0))
        throw std::invalid_argument("demap_joint: noise variance must be positive");
    const std::size_t mc = xc.size();
    const std::size_t mp = xp.size();
    std::vector<double> log_prior;
    if (!common_priors.empty()) {
        if (common_priors.size() != mc)
            throw std::invalid_argument("demap_joint: prior size must match common alphabet");
        double sum = 0.0;
        for (double p : common_priors) {
            if (!(p >= 0.0))
                throw std::invalid_argument("demap_joint: negative prior mass");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("demap_joint: priors must sum to 1");
        log_prior.resize(mc);
        for (std::size_t a = 0; a < mc; ++a)
            log_prior[a] = common_priors[a] > 0.0 ? std::log(common_priors[a]) : kNegInf;
    }

    // Weight table over the joint alphabet; reused by both marginalizations.
    thread_local std::vector<double> w;
    w.resize(mc * mp);
    for (std::size_t a = 0; a < mc; ++a) {
        const cplx yc = y - g_c * xc.point(a);
        const double lp = log_prior.empty() ? 0.0 : log_prior[a];
        double *row = w.data() + a * mp;
        if (lp == kNegInf) {
            for (std::size_t u = 0; u < mp; ++u)
                row[u] = kNegInf;
            continue;
        }
        for (std::size_t u = 0; u < mp; ++u)
            row[u] = -std::norm(yc - g_p * xp.point(u)) / noise_var + lp;
    }

    JointLlrs out;
    if (target == JointTarget::common || target == JointTarget::both) {
        const std::size_t bits = xc.bits_per_symbol();
        out.common.resize(bits);
        for (std::size_t l = 0; l < bits; ++l) {
            LlrAccumulator n0, n1;
            const std::size_t shift = bits - 1 - l;
            for (std::size_t a = 0; a < mc; ++a) {
                LlrAccumulator &acc = ((a >> shift) & 1u) ? n1 : n0;
                const double *row = w.data() + a * mp;
                for (std::size_t u = 0; u < mp; ++u)
                    acc.add(row[u], max_log);
            }
            out.common[l] = finish_llr(n0, n1, max_log, clip);
        }
    }
    if (target == JointTarget::private_stream || target == JointTarget::both) {
        const std::size_t bits = xp.bits_per_symbol();
        out.private_bits.resize(bits);
        for (std::size_t l = 0; l < bits; ++l) {
            LlrAccumulator n0, n1;
            const std::size_t shift = bits - 1 - l;
            for (std::size_t u = 0; u < mp; ++u) {
                LlrAccumulator &acc = ((u >> shift) & 1u) ? n1 : n0;
                for (std::size_t a = 0; a < mc; ++a)
                    acc.add(w[a * mp + u], max_log);
            }
            out.private_bits[l] = finish_llr(n0, n1, max_log, clip);
        }
    }
    return out;
}

std::vector<double> demap_vs_cloud(cplx y, cplx g_d, const Constellation &xd,
                                   const cvec &interference_points, double noise_var, bool max_log,
                                   double clip) {
    if (!(noise_var > 0.0))
        throw std::invalid_argument("demap_vs_cloud: noise variance must be positive");
    if (interference_points.empty())
        throw std::invalid_argument("demap_vs_cloud: empty interference cloud");
    const std::size_t bits = xd.bits_per_symbol();
    std::vector<double> llrs(bits);
    for (std::size_t l = 0; l < bits; ++l) {
        LlrAccumulator n0, n1;
        const std::size_t shift = bits - 1 - l;
        for (std::size_t x = 0; x < xd.size(); ++x) {
            LlrAccumulator &acc = ((x >> shift) & 1u) ? n1 : n0;
            const cplx yd = y - g_d * xd.point(x);
            for (const cplx &v : interference_points)
                acc.add(-std::norm(yd - v) / noise_var, max_log);
        }
        llrs[l] = finish_llr(n0, n1, max_log, clip);
    }
    return llrs;
}

namespace {

// Shared per-symbol posterior composition from independent bit beliefs.
template <class Visitor>
void for_each_symbol_distribution(const std::vector<double> &coded_llrs, const Constellation &c,
                                  Visitor &&visit) {
    const std::size_t m = c.bits_per_symbol();
    if (coded_llrs.size() % m != 0)
        throw std::invalid_argument("bit LLR count not divisible by bits per symbol");
    const std::size_t n_symbols = coded_llrs.size() / m;
    const std::size_t npoints = c.size();
    std::vector<double> p0(m);
    std::vector<double> prob(npoints);
    for (std::size_t s = 0; s < n_symbols; ++s) {
        for (std::size_t l = 0; l < m; ++l)
            p0[l] = 1.0 / (1.0 + std::exp(-coded_llrs[s * m + l]));
        for (std::size_t x = 0; x < npoints; ++x) {
            double p = 1.0;
            for (std::size_t l = 0; l < m; ++l) {
                const bool bit = (x >> (m - 1 - l)) & 1u;
                p *= bit ? (1.0 - p0[l]) : p0[l];
            }
            prob[x] = p;
        }
        visit(s, prob);
    }
}

} // namespace

std::vector<SoftSymbolStats> soft_symbols(const std::vector<double> &coded_llrs,
                                          const Constellation &c) {
    std::vector<SoftSymbolStats> out(coded_llrs.size() / c.bits_per_symbol());
    for_each_symbol_distribution(coded_llrs, c, [&](std::size_t s, const std::vector<double> &prob) {
        cplx mean(0.0, 0.0);
        double energy = 0.0;
        for (std::size_t x = 0; x < prob.size(); ++x) {
            mean += prob[x] * c.point(x);
            energy += prob[x] * std::norm(c.point(x));
        }
        out[s].mean = mean;
        out[s].variance = std::max(0.0, energy - std::norm(mean));
    });
    return out;
}

std::vector<double> symbol_priors(const std::vector<double> &coded_llrs, const Constellation &c) {
    const std::size_t npoints = c.size();
    std::vector<double> out((coded_llrs.size() / c.bits_per_symbol()) * npoints);
    for_each_symbol_distribution(coded_llrs, c, [&](std::size_t s, const std::vector<double> &prob) {
        std::copy(prob.begin(), prob.end(), out.begin() + s * npoints);
    });
    return out;
}

} // namespace rsma
