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

#ifndef RSMA_RECEIVERS_HPP
#define RSMA_RECEIVERS_HPP

#include "rsma/fec.hpp"

#include <string>

namespace rsma {

enum class ReceiverKind {
    hard_cwic,
    soft_cwic1,
    soft_cwic2,
    joint_demapper,
    soft_slic,
    sdma_single_user,
    sdma_joint,
};

// Interference-cancelling kinds: their private decode consumes the common
// decoder's output. The remaining kinds never read it.
bool is_sic_type(ReceiverKind kind);

std::string receiver_kind_name(ReceiverKind kind);
ReceiverKind receiver_kind_by_name(const std::string &name); // case-insensitive

// Code, modulation and bit-interleaver of one stream.
struct StreamCodec {
    PolarCodeSpec code;
    const Constellation *constellation = nullptr;
    std::uint64_t interleaver_seed = 0;
};

// One user's observation of one symbol block. Gains are per symbol (block
// fading repeats values). Streams listed in interferer_gains are folded
// into the effective noise power, except that sdma_joint de-maps the first
// one against interferer_constellation.
struct ReceiveInput {
    cvec y;
    cvec common_gain;                 // empty for the SDMA kinds
    cvec private_gain;
    std::vector<cvec> interferer_gains;
    const Constellation *interferer_constellation = nullptr;
    double noise_var = 1.0;
    bool max_log = false;
    // Testing hook: true common symbol labels in transmit order. When set,
    // SIC-type pipelines cancel with exact knowledge (delta priors / exact
    // re-modulation) instead of the decoder estimate.
    const std::vector<std::size_t> *genie_common_labels = nullptr;
};

struct StreamResult {
    std::vector<std::uint8_t> info_bits;
    std::vector<double> info_llrs;
    std::size_t decoder_iterations = 0;
    bool decoder_converged = false;
};

struct DecodedStreams {
    bool common_present = false;
    StreamResult common;
    StreamResult private_stream;
};

// Runs one receiver pipeline over a symbol block. common_codec must be null
// exactly for the SDMA kinds. Throws std::invalid_argument on codec/block
// mismatches.
DecodedStreams receive(ReceiverKind kind, const ReceiveInput &input,
                       const StreamCodec *common_codec, const StreamCodec &private_codec,
                       std::size_t max_decoder_iters = 60);

struct ComplexityReport {
    std::size_t distance_evals_per_symbol = 0;
    std::size_t extra_buffer_bits = 0;
    std::string extra_delay_label;
};

// Per-symbol de-mapping cost, extra buffering and extra delay of each kind.
// llr_bits is the stored width of one LLR, block_len the symbols per block.
ComplexityReport complexity_report(ReceiverKind kind, std::size_t xc_size, std::size_t xp_size,
                                   std::size_t llr_bits, std::size_t block_len);

} // namespace rsma

#endif
