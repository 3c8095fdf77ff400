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

#ifndef RSMA_RATES_HPP
#define RSMA_RATES_HPP

#include "rsma/bicm.hpp"
#include "rsma/precoding.hpp"

namespace rsma {

// Raised when inputs violate an analytic precondition (e.g. the sum-rate
// formulas assume zero-forcing private directions).
class ContractViolationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Terms of the closed-form Gaussian power split: a_k is user k's private
// SNR at t=0, b the common-vs-private gain difference at the weakest user.
struct GaussianAllocationTerms {
    std::vector<double> a;
    double b = 0.0;
    std::size_t k_prime = 0;
};

// argmin over users of (common power gain) / (1 + private SNR); ties break
// to the smaller index.
std::size_t weakest_user(const ChannelRealization &channels, const PrecoderSet &precoders);

GaussianAllocationTerms gaussian_allocation_terms(const ChannelRealization &channels,
                                                  const PrecoderSet &precoders);

// Gaussian-input sum rate of the power split t given zero-forcing private
// directions. Throws ContractViolationError when cross-user leakage of the
// normalized directions exceeds 1e-6.
double gaussian_sum_rate(const ChannelRealization &channels, const PrecoderSet &precoders,
                         double t);

// Maximizer of the Gaussian sum rate over t in [0, 1]: boundary tests on the
// derivative, otherwise bisection on the derivative sign (the objective is
// concave), tolerance 1e-12.
double closed_form_t_star(const GaussianAllocationTerms &terms);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Conditional entropy (bits) of a uniformly used point set observed in
// complex Gaussian noise, estimated by Monte Carlo over the noise; the
// returned standard error is over the per-draw averages. Consumes exactly
// n_noise draws from rng.
McEstimate cc_entropy_exact(const cvec &points, double noise_var, SeededRng &rng,
                            std::size_t n_noise);

// Deterministic surrogate of the conditional entropy (exponentials at half
// the noise variance, no noise average); clamped to [0, log2 M].
double cc_entropy_approx(const cvec &points, double noise_var);

enum class SicMode { sic, non_sic };
enum class RateMethod { exact_mc, approx };

struct EntropyMcSettings {
    std::size_t n_noise = 10000;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0; // base stream; entropy roles offset from here
};

struct CcRateReport {
    double common_rate = 0.0;              // min over users, clamped >= 0
    std::vector<double> private_rates;     // per user, clamped >= 0
    double sum = 0.0;
    SicMode mode = SicMode::sic;
    RateMethod method = RateMethod::approx;
    double common_std_error = 0.0;         // exact-MC only, else 0
    std::vector<double> private_std_errors;
    double sum_std_error = 0.0;
};

// Constellation-constrained rates from per-user effective gains (powers
// already applied): user k sees y = g_common[k] s_c + g_private[k] s_k + n.
CcRateReport cc_sum_rate_from_gains(const cvec &g_common, const cvec &g_private,
                                    const Constellation &xc,
                                    const std::vector<const Constellation *> &xk,
                                    double noise_var, SicMode mode, RateMethod method,
                                    const EntropyMcSettings &mc = {});

// Same rates from channels + assembled precoders; validates the
// zero-forcing leakage contract on the normalized directions.
CcRateReport cc_sum_rate(const ChannelRealization &channels, const PrecoderSet &precoders,
                         const Constellation &xc, const std::vector<const Constellation *> &xk,
                         SicMode mode, RateMethod method, const EntropyMcSettings &mc = {},
                         double noise_var = 1.0);

enum class AllocationObjective { gaussian, cc_sic, cc_non_sic };

// Grid argmax of the selected objective; the constellation-constrained
// objectives use the deterministic surrogate rates. Ties break toward the
// smaller t. xc/xp may be null for the gaussian objective; the private
// constellation is shared across users (the evaluated scenarios do).
double power_allocation_search(const ChannelRealization &channels, const cvec &common_dir,
                               const std::vector<cvec> &private_dirs, double p_total,
                               AllocationObjective objective, const std::vector<double> &grid,
                               const Constellation *xc = nullptr,
                               const Constellation *xp = nullptr);

} // namespace rsma

#endif
