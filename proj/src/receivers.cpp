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

#include "rsma/receivers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace rsma {

bool is_sic_type(ReceiverKind kind) {
    switch (kind) {
    case ReceiverKind::hard_cwic:
    case ReceiverKind::soft_cwic1:
    case ReceiverKind::soft_cwic2:
        return true;
    default:
        return false;
    }
}

std::string receiver_kind_name(ReceiverKind kind) {
    switch (kind) {
    case ReceiverKind::hard_cwic:
        return "hard-cwic";
    case ReceiverKind::soft_cwic1:
        return "soft-cwic1";
    case ReceiverKind::soft_cwic2:
        return "soft-cwic2";
    case ReceiverKind::joint_demapper:
        return "joint-demapper";
    case ReceiverKind::soft_slic:
        return "soft-slic";
    case ReceiverKind::sdma_single_user:
        return "sdma-single-user";
    case ReceiverKind::sdma_joint:
        return "sdma-joint";
    }
    throw std::invalid_argument("receivers: unknown kind");
}

ReceiverKind receiver_kind_by_name(const std::string &name) {
    std::string low(name);
    std::transform(low.begin(), low.end(), low.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    for (ReceiverKind kind :
         {ReceiverKind::hard_cwic, ReceiverKind::soft_cwic1, ReceiverKind::soft_cwic2,
          ReceiverKind::joint_demapper, ReceiverKind::soft_slic, ReceiverKind::sdma_single_user,
          ReceiverKind::sdma_joint}) {
        if (receiver_kind_name(kind) == low) {
            return kind;
        }
    }
    throw std::invalid_argument("receivers: unknown kind name '" + name + "'");
}

namespace {

bool is_sdma(ReceiverKind kind) {
    return kind == ReceiverKind::sdma_single_user || kind == ReceiverKind::sdma_joint;
}

void check_codec(const StreamCodec &codec, std::size_t block_len, const char *which) {
    if (codec.constellation == nullptr) {
        throw std::invalid_argument(std::string("receivers: ") + which +
                                    " codec has no constellation");
    }
    const std::size_t need = block_len * codec.constellation->bits_per_symbol();
    if (codec.code.transmit_length != need) {
        throw std::invalid_argument(std::string("receivers: ") + which +
                                    " code length does not match block");
    }
}

// sigma^2 plus the power of every stream always treated as noise. skip_first
// leaves interferer 0 out (the sdma_joint de-mapper handles it explicitly).
std::vector<double> base_noise_per_symbol(const ReceiveInput &input, bool skip_first) {
    const std::size_t n = input.y.size();
    std::vector<double> base(n, input.noise_var);
    for (std::size_t i = skip_first ? 1 : 0; i < input.interferer_gains.size(); ++i) {
        const cvec &g = input.interferer_gains[i];
        if (g.size() != n) {
            throw std::invalid_argument("receivers: interferer gains must cover the block");
        }
        for (std::size_t s = 0; s < n; ++s) {
            base[s] += std::norm(g[s]);
        }
    }
    return base;
}

StreamResult decode_stream(const StreamCodec &codec, const std::vector<double> &tx_order_llrs,
                           std::size_t max_iters, BpResult *full = nullptr) {
    const std::vector<double> deint = deinterleave(tx_order_llrs, codec.interleaver_seed);
    BpResult bp = bp_decode(codec.code, LlrBlock{deint, kLlrClip}, max_iters);
    StreamResult out;
    out.info_bits = bp.hard_info;
    out.info_llrs = bp.info_llrs.values;
    out.decoder_iterations = bp.iterations;
    out.decoder_converged = bp.converged;
    if (full != nullptr) {
        *full = std::move(bp);
    }
    return out;
}

std::vector<std::size_t> labels_from_bits(const std::vector<std::uint8_t> &tx_bits,
                                          const Constellation &c) {
    const std::size_t m = c.bits_per_symbol();
    std::vector<std::size_t> labels(tx_bits.size() / m);
    for (std::size_t s = 0; s < labels.size(); ++s) {
        std::size_t label = 0;
        for (std::size_t l = 0; l < m; ++l) {
            label = (label << 1) | (tx_bits[s * m + l] & 1u);
        }
        labels[s] = label;
    }
    return labels;
}

// Decoder coded-bit posteriors re-interleaved into transmit order, the
// common-stream soft knowledge every soft SIC variant starts from.
std::vector<double> tx_order_posteriors(const StreamCodec &codec, const BpResult &bp) {
    return interleave(bp.coded_llrs.values, codec.interleaver_seed);
}

} // namespace

DecodedStreams receive(ReceiverKind kind, const ReceiveInput &input,
                       const StreamCodec *common_codec, const StreamCodec &private_codec,
                       std::size_t max_decoder_iters) {
    const std::size_t block = input.y.size();
    if (block == 0) {
        throw std::invalid_argument("receivers: empty block");
    }
    if (input.private_gain.size() != block) {
        throw std::invalid_argument("receivers: private gains must cover the block");
    }
    if (!(input.noise_var > 0.0)) {
        throw std::invalid_argument("receivers: noise variance must be positive");
    }
    check_codec(private_codec, block, "private");
    const Constellation &xp = *private_codec.constellation;

    if (is_sdma(kind)) {
        if (common_codec != nullptr) {
            throw std::invalid_argument("receivers: SDMA kinds take no common codec");
        }
        DecodedStreams out;
        std::vector<double> llrs;
        llrs.reserve(block * xp.bits_per_symbol());
        if (kind == ReceiverKind::sdma_single_user) {
            const std::vector<double> base = base_noise_per_symbol(input, false);
            for (std::size_t s = 0; s < block; ++s) {
                const std::vector<double> l = demap_marginal(
                    input.y[s], input.private_gain[s], base[s], xp, input.max_log);
                llrs.insert(llrs.end(), l.begin(), l.end());
            }
        } else {
            if (input.interferer_gains.empty() || input.interferer_constellation == nullptr) {
                throw std::invalid_argument(
                    "receivers: sdma-joint needs an interferer and its constellation");
            }
            const Constellation &xi = *input.interferer_constellation;
            const std::vector<double> base = base_noise_per_symbol(input, true);
            cvec cloud(xi.size());
            for (std::size_t s = 0; s < block; ++s) {
                const cplx gi = input.interferer_gains[0][s];
                for (std::size_t x = 0; x < xi.size(); ++x) {
                    cloud[x] = gi * xi.point(x);
                }
                const std::vector<double> l = demap_vs_cloud(
                    input.y[s], input.private_gain[s], xp, cloud, base[s], input.max_log);
                llrs.insert(llrs.end(), l.begin(), l.end());
            }
        }
        out.private_stream = decode_stream(private_codec, llrs, max_decoder_iters);
        return out;
    }

    if (common_codec == nullptr) {
        throw std::invalid_argument("receivers: this kind needs a common codec");
    }
    if (input.common_gain.size() != block) {
        throw std::invalid_argument("receivers: common gains must cover the block");
    }
    check_codec(*common_codec, block, "common");
    const Constellation &xc = *common_codec->constellation;
    const std::size_t mc_bits = xc.bits_per_symbol();
    const std::vector<double> base = base_noise_per_symbol(input, false);
    if (input.genie_common_labels != nullptr && input.genie_common_labels->size() != block) {
        throw std::invalid_argument("receivers: genie labels must cover the block");
    }

    DecodedStreams out;
    out.common_present = true;
    std::vector<double> common_llrs;  // transmit order
    std::vector<double> private_llrs; // transmit order
    common_llrs.reserve(block * mc_bits);
    private_llrs.reserve(block * xp.bits_per_symbol());

    switch (kind) {
    case ReceiverKind::hard_cwic: {
        for (std::size_t s = 0; s < block; ++s) {
            const double eff = base[s] + std::norm(input.private_gain[s]);
            const std::vector<double> l =
                demap_marginal(input.y[s], input.common_gain[s], eff, xc, input.max_log);
            common_llrs.insert(common_llrs.end(), l.begin(), l.end());
        }
        out.common = decode_stream(*common_codec, common_llrs, max_decoder_iters);
        std::vector<std::size_t> labels;
        if (input.genie_common_labels != nullptr) {
            labels = *input.genie_common_labels;
        } else {
            const std::vector<std::uint8_t> coded = encode(common_codec->code, out.common.info_bits);
            labels = labels_from_bits(interleave(coded, common_codec->interleaver_seed), xc);
        }
        for (std::size_t s = 0; s < block; ++s) {
            const cplx cancelled = input.y[s] - input.common_gain[s] * xc.point(labels[s]);
            const std::vector<double> l =
                demap_marginal(cancelled, input.private_gain[s], base[s], xp, input.max_log);
            private_llrs.insert(private_llrs.end(), l.begin(), l.end());
        }
        break;
    }
    case ReceiverKind::soft_cwic1: {
        for (std::size_t s = 0; s < block; ++s) {
            const JointLlrs j =
                demap_joint(input.y[s], input.common_gain[s], input.private_gain[s], xc, xp,
                            base[s], {}, JointTarget::common, input.max_log);
            common_llrs.insert(common_llrs.end(), j.common.begin(), j.common.end());
        }
        BpResult bp;
        out.common = decode_stream(*common_codec, common_llrs, max_decoder_iters, &bp);
        std::vector<double> priors;
        if (input.genie_common_labels == nullptr) {
            priors = symbol_priors(tx_order_posteriors(*common_codec, bp), xc);
        }
        std::vector<double> prior_slice(xc.size());
        for (std::size_t s = 0; s < block; ++s) {
            if (input.genie_common_labels != nullptr) {
                std::fill(prior_slice.begin(), prior_slice.end(), 0.0);
                prior_slice[(*input.genie_common_labels)[s]] = 1.0;
            } else {
                std::copy(priors.begin() + static_cast<std::ptrdiff_t>(s * xc.size()),
                          priors.begin() + static_cast<std::ptrdiff_t>((s + 1) * xc.size()),
                          prior_slice.begin());
            }
            const JointLlrs j =
                demap_joint(input.y[s], input.common_gain[s], input.private_gain[s], xc, xp,
                            base[s], prior_slice, JointTarget::private_stream, input.max_log);
            private_llrs.insert(private_llrs.end(), j.private_bits.begin(),
                                j.private_bits.end());
        }
        break;
    }
    case ReceiverKind::soft_cwic2: {
        for (std::size_t s = 0; s < block; ++s) {
            const double eff = base[s] + std::norm(input.private_gain[s]);
            const std::vector<double> l =
                demap_marginal(input.y[s], input.common_gain[s], eff, xc, input.max_log);
            common_llrs.insert(common_llrs.end(), l.begin(), l.end());
        }
        BpResult bp;
        out.common = decode_stream(*common_codec, common_llrs, max_decoder_iters, &bp);
        std::vector<SoftSymbolStats> stats;
        if (input.genie_common_labels == nullptr) {
            stats = soft_symbols(tx_order_posteriors(*common_codec, bp), xc);
        }
        for (std::size_t s = 0; s < block; ++s) {
            cplx mean;
            double variance = 0.0;
            if (input.genie_common_labels != nullptr) {
                mean = xc.point((*input.genie_common_labels)[s]);
            } else {
                mean = stats[s].mean;
                variance = stats[s].variance;
            }
            const cplx cancelled = input.y[s] - input.common_gain[s] * mean;
            const double eff = base[s] + std::norm(input.common_gain[s]) * variance;
            const std::vector<double> l =
                demap_marginal(cancelled, input.private_gain[s], eff, xp, input.max_log);
            private_llrs.insert(private_llrs.end(), l.begin(), l.end());
        }
        break;
    }
    case ReceiverKind::joint_demapper: {
        // One pass; the private path consumes de-mapper products only.
        for (std::size_t s = 0; s < block; ++s) {
            const JointLlrs j =
                demap_joint(input.y[s], input.common_gain[s], input.private_gain[s], xc, xp,
                            base[s], {}, JointTarget::both, input.max_log);
            common_llrs.insert(common_llrs.end(), j.common.begin(), j.common.end());
            private_llrs.insert(private_llrs.end(), j.private_bits.begin(),
                                j.private_bits.end());
        }
        out.common = decode_stream(*common_codec, common_llrs, max_decoder_iters);
        break;
    }
    case ReceiverKind::soft_slic: {
        // Soft symbols come straight from the common de-mapper, no decoder
        // feedback on the private path.
        for (std::size_t s = 0; s < block; ++s) {
            const double eff = base[s] + std::norm(input.private_gain[s]);
            const std::vector<double> l =
                demap_marginal(input.y[s], input.common_gain[s], eff, xc, input.max_log);
            common_llrs.insert(common_llrs.end(), l.begin(), l.end());
        }
        const std::vector<SoftSymbolStats> stats = soft_symbols(common_llrs, xc);
        for (std::size_t s = 0; s < block; ++s) {
            const cplx cancelled = input.y[s] - input.common_gain[s] * stats[s].mean;
            const double eff = base[s] + std::norm(input.common_gain[s]) * stats[s].variance;
            const std::vector<double> l =
                demap_marginal(cancelled, input.private_gain[s], eff, xp, input.max_log);
            private_llrs.insert(private_llrs.end(), l.begin(), l.end());
        }
        out.common = decode_stream(*common_codec, common_llrs, max_decoder_iters);
        break;
    }
    default:
        throw std::invalid_argument("receivers: unknown kind");
    }

    out.private_stream = decode_stream(private_codec, private_llrs, max_decoder_iters);
    return out;
}

ComplexityReport complexity_report(ReceiverKind kind, std::size_t xc_size, std::size_t xp_size,
                                   std::size_t llr_bits, std::size_t block_len) {
    if (xp_size == 0 || block_len == 0) {
        throw std::invalid_argument("receivers: complexity report needs valid sizes");
    }
    if (kind != ReceiverKind::sdma_single_user && xc_size == 0) {
        throw std::invalid_argument("receivers: complexity report needs valid sizes");
    }
    const auto log2_size = [](std::size_t m) {
        std::size_t b = 0;
        while ((std::size_t{1} << (b + 1)) <= m) {
            ++b;
        }
        return b;
    };
    ComplexityReport report;
    switch (kind) {
    case ReceiverKind::hard_cwic:
        report.distance_evals_per_symbol = xc_size + xp_size;
        report.extra_buffer_bits = block_len * log2_size(xc_size);
        report.extra_delay_label = "interleaving & mapping";
        break;
    case ReceiverKind::soft_cwic1:
        report.distance_evals_per_symbol = xc_size * xp_size;
        report.extra_buffer_bits = llr_bits * block_len * log2_size(xc_size);
        report.extra_delay_label = "interleaving & mapping";
        break;
    case ReceiverKind::soft_cwic2:
        report.distance_evals_per_symbol = xc_size + xp_size;
        report.extra_buffer_bits = llr_bits * block_len * log2_size(xc_size);
        report.extra_delay_label = "interleaving & mapping";
        break;
    case ReceiverKind::joint_demapper:
        report.distance_evals_per_symbol = xc_size * xp_size;
        report.extra_buffer_bits = 0;
        report.extra_delay_label = "-";
        break;
    case ReceiverKind::soft_slic:
        report.distance_evals_per_symbol = xc_size + xp_size;
        report.extra_buffer_bits = 0;
        report.extra_delay_label = "-";
        break;
    case ReceiverKind::sdma_single_user:
        report.distance_evals_per_symbol = xp_size;
        report.extra_buffer_bits = 0;
        report.extra_delay_label = "-";
        break;
    case ReceiverKind::sdma_joint:
        report.distance_evals_per_symbol = xc_size * xp_size;
        report.extra_buffer_bits = 0;
        report.extra_delay_label = "-";
        break;
    }
    return report;
}

} // namespace rsma
