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

#ifndef RSMA_FEC_HPP
#define RSMA_FEC_HPP

#include "rsma/bicm.hpp"

#include <cstdint>

namespace rsma {

struct LlrBlock {
    std::vector<double> values; // natural-log LLRs, positive means bit 0
    double clip = kLlrClip;
};

enum class RateMatchScheme { shorten, puncture };

// Polar code over the n-fold binary kernel in natural bit order (no
// bit-reversal anywhere). Shortening drops tail coded positions; the
// transform is lower triangular, so freezing the matching tail input bits
// pins those coded bits to zero.
struct PolarCodeSpec {
    std::size_t mother_length = 0;   // N, power of two
    std::size_t info_length = 0;     // k_info
    std::vector<std::uint32_t> frozen_set; // sorted input-bit indices
    std::size_t transmit_length = 0; // coded bits on air
    RateMatchScheme rate_match = RateMatchScheme::shorten;
    double design_snr_db = 2.0;

    double realized_rate() const {
        return static_cast<double>(info_length) / static_cast<double>(transmit_length);
    }
    bool is_frozen(std::size_t i) const;
};

// Frozen set from the Bhattacharyya-parameter recursion at the design SNR.
// No rate matching: transmit_length == mother_length.
PolarCodeSpec construct(std::size_t mother_length, std::size_t info_length,
                        double design_snr_db = 2.0);

// Rate-matched construction for arbitrary transmit lengths and rates. The
// mother code is the next power of two; k_info = round(rate * transmit
// length). Shortened tail positions enter the reliability recursion as
// perfect channels and their input bits are force-frozen; punctured head
// positions enter as useless channels.
PolarCodeSpec construct_rate_matched(std::size_t transmit_length, double code_rate,
                                     double design_snr_db = 2.0,
                                     RateMatchScheme scheme = RateMatchScheme::shorten);

// info bits fill the non-frozen input positions in ascending index order.
std::vector<std::uint8_t> encode(const PolarCodeSpec &spec,
                                 const std::vector<std::uint8_t> &info_bits);

struct BpResult {
    LlrBlock info_llrs;       // k_info values, non-frozen positions ascending
    LlrBlock coded_llrs;      // transmit_length posterior values
    std::vector<std::uint8_t> hard_info;
    std::size_t iterations = 0;
    bool converged = false; // hard decisions re-encode consistently
};

// Belief propagation over the polar factor graph: full left-right sweeps with
// the exact boxplus, early exit on re-encode consistency, stall exit when the
// hard decisions stop changing. channel_llrs must have transmit_length
// values; rate matching is inverted internally (+clip for shortened, 0 for
// punctured).
BpResult bp_decode(const PolarCodeSpec &spec, const LlrBlock &channel_llrs,
                   std::size_t max_iters = 60);

} // namespace rsma

#endif
