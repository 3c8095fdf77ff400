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

#ifndef RSMA_BICM_HPP
#define RSMA_BICM_HPP

#include "rsma/numerics.hpp"

#include <cstdint>

namespace rsma {

// Natural-log LLR magnitudes are clipped here throughout the chain.
inline constexpr double kLlrClip = 30.0;

// Square Gray-labeled constellation with unit average energy. Labels are the
// point indices read MSB-first: bit 0 selects the real-part sign, bit 1 the
// imaginary-part sign, and later bit pairs refine each axis recursively
// (reflected Gray per axis). The all-zero label is the most positive corner,
// so QPSK label 00 maps to (1+j)/sqrt(2).
class Constellation {
  public:
    static const Constellation &qpsk();
    static const Constellation &qam16();
    static const Constellation &qam64();
    static const Constellation &qam256();
    static const Constellation &by_name(const std::string &name); // case-insensitive

    const std::string &name() const { return name_; }
    std::size_t size() const { return points_.size(); }
    std::size_t bits_per_symbol() const { return bits_; }
    const cvec &points() const { return points_; }
    cplx point(std::size_t label) const { return points_[label]; }

  private:
    Constellation(std::string name, std::size_t bits);

    std::string name_;
    std::size_t bits_ = 0;
    cvec points_;
};

// Seeded uniform random permutation (Fisher-Yates over a counter-based
// stream; integer arithmetic only, so identical on every platform).
std::vector<std::uint32_t> interleaver_permutation(std::size_t n, std::uint64_t seed);

// interleave: out[i] = in[perm[i]]; deinterleave applies the inverse map.
std::vector<std::uint8_t> interleave(const std::vector<std::uint8_t> &bits, std::uint64_t seed);
std::vector<double> interleave(const std::vector<double> &values, std::uint64_t seed);
std::vector<std::uint8_t> deinterleave(const std::vector<std::uint8_t> &bits, std::uint64_t seed);
std::vector<double> deinterleave(const std::vector<double> &llrs, std::uint64_t seed);

// Consecutive groups of log2 M bits (MSB first) become one symbol each.
cvec map_symbols(const std::vector<std::uint8_t> &bits, const Constellation &c);

// Per-symbol marginal de-mapper: bit l gets
//   log sum_{x in X_l^0} e^{-|y-g x|^2/sigma^2} - log sum_{x in X_l^1} ...
// with max-log replacing each log-sum by its max term. Natural-log LLRs,
// clipped to +-clip.
std::vector<double> demap_marginal(cplx y, cplx gain, double eff_noise_var, const Constellation &c,
                                   bool max_log, double clip = kLlrClip);

enum class JointTarget { common, private_stream, both };

struct JointLlrs {
    std::vector<double> common;
    std::vector<double> private_bits;
};

// MAP de-mapper over the joint alphabet X_c x X_p observed as
// y = g_c x_c + g_p x_p + n. Priors, if nonempty, give P(x_c) per common
// label (must sum to 1 within 1e-9); the private symbols stay uniform.
// `target` selects which stream's bit LLRs are produced.
JointLlrs demap_joint(cplx y, cplx g_c, cplx g_p, const Constellation &xc, const Constellation &xp,
                      double noise_var, const std::vector<double> &common_priors,
                      JointTarget target, bool max_log, double clip = kLlrClip);

// Same marginalization with an explicit interference point cloud (gains
// already applied, uniform weights). Used by joint detection against
// composite interferers where no label structure exists.
std::vector<double> demap_vs_cloud(cplx y, cplx g_d, const Constellation &xd,
                                   const cvec &interference_points, double noise_var, bool max_log,
                                   double clip = kLlrClip);

struct SoftSymbolStats {
    cplx mean;
    double variance = 0.0;
};

// Per-symbol moments from independent bit posteriors p(bit=0) = 1/(1+e^-LLR).
std::vector<SoftSymbolStats> soft_symbols(const std::vector<double> &coded_llrs,
                                          const Constellation &c);

// Full per-symbol distributions over the constellation, concatenated as M
// values per symbol (same bit-independence composition as soft_symbols).
std::vector<double> symbol_priors(const std::vector<double> &coded_llrs, const Constellation &c);

} // namespace rsma

#endif
