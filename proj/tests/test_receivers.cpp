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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rsma/receivers.hpp"

using namespace rsma;

namespace {

constexpr std::size_t kSymbols = 64;

struct TxStream {
    std::vector<std::uint8_t> info;
    std::vector<std::size_t> labels; // transmit order
    cvec symbols;
};

std::vector<std::uint8_t> random_bits(SeededRng &rng, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (auto &b : bits)
        b = static_cast<std::uint8_t>(rng.next_below(2));
    return bits;
}

StreamCodec make_codec(const Constellation &c, double rate, std::uint64_t il_seed) {
    StreamCodec codec;
    codec.code = construct_rate_matched(kSymbols * c.bits_per_symbol(), rate);
    codec.constellation = &c;
    codec.interleaver_seed = il_seed;
    return codec;
}

TxStream transmit(const StreamCodec &codec, SeededRng &rng) {
    TxStream tx;
    tx.info = random_bits(rng, codec.code.info_length);
    std::vector<std::uint8_t> on_air = interleave(encode(codec.code, tx.info),
                                                  codec.interleaver_seed);
    tx.symbols = map_symbols(on_air, *codec.constellation);
    const std::size_t bits = codec.constellation->bits_per_symbol();
    for (std::size_t s = 0; s < tx.symbols.size(); ++s) {
        std::size_t label = 0;
        for (std::size_t b = 0; b < bits; ++b)
            label = (label << 1) | on_air[s * bits + b];
        tx.labels.push_back(label);
    }
    return tx;
}

} // namespace

TEST_CASE("receiver kinds are named and classified") {
    const ReceiverKind kinds[] = {
        ReceiverKind::hard_cwic,   ReceiverKind::soft_cwic1,
        ReceiverKind::soft_cwic2,  ReceiverKind::joint_demapper,
        ReceiverKind::soft_slic,   ReceiverKind::sdma_single_user,
        ReceiverKind::sdma_joint,
    };
    for (ReceiverKind k : kinds)
        CHECK(receiver_kind_by_name(receiver_kind_name(k)) == k);
    CHECK_THROWS_AS(receiver_kind_by_name("turbo"), std::invalid_argument);

    CHECK(is_sic_type(ReceiverKind::hard_cwic));
    CHECK(is_sic_type(ReceiverKind::soft_cwic1));
    CHECK(is_sic_type(ReceiverKind::soft_cwic2));
    CHECK_FALSE(is_sic_type(ReceiverKind::joint_demapper));
    CHECK_FALSE(is_sic_type(ReceiverKind::soft_slic));
    CHECK_FALSE(is_sic_type(ReceiverKind::sdma_single_user));
    CHECK_FALSE(is_sic_type(ReceiverKind::sdma_joint));
}

TEST_CASE("every superposed-stream pipeline decodes a clean block") {
    SeededRng rng(91, 0);
    const Constellation &q = Constellation::qpsk();
    StreamCodec common = make_codec(q, 0.5, 11);
    StreamCodec priv = make_codec(Constellation::qam16(), 0.4, 12);

    TxStream txc = transmit(common, rng);
    TxStream txp = transmit(priv, rng);

    ReceiveInput input;
    // The marginal-first receivers treat the other stream as noise, so the
    // common stage needs a real SINR margin (|gc|^2 / |gp|^2 ~ 16 dB here);
    // only then does every architecture clear a noiseless block.
    input.common_gain.assign(kSymbols, cplx(7.0, 1.0));
    input.private_gain.assign(kSymbols, cplx(0.7, -0.8));
    input.noise_var = 1e-12;
    input.max_log = true;
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.common_gain[s] * txc.symbols[s] +
                          input.private_gain[s] * txp.symbols[s]);

    for (ReceiverKind kind : {ReceiverKind::hard_cwic, ReceiverKind::soft_cwic1,
                              ReceiverKind::soft_cwic2, ReceiverKind::joint_demapper,
                              ReceiverKind::soft_slic}) {
        CAPTURE(receiver_kind_name(kind));
        DecodedStreams out = receive(kind, input, &common, priv);
        CHECK(out.common_present);
        CHECK(out.common.info_bits == txc.info);
        CHECK(out.private_stream.info_bits == txp.info);
    }
}

TEST_CASE("single-user pipeline equals the hand-built receive chain") {
    SeededRng rng(92, 0);
    const Constellation &q16 = Constellation::qam16();
    StreamCodec priv = make_codec(q16, 0.54, 21);
    TxStream tx = transmit(priv, rng);

    ReceiveInput input;
    input.private_gain.assign(kSymbols, cplx(0.9, 0.2));
    input.noise_var = 0.2;
    input.max_log = true;
    cvec interferer(kSymbols, cplx(0.3, -0.1));
    input.interferer_gains.push_back(interferer);
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.private_gain[s] * tx.symbols[s] +
                          interferer[s] * q16.point(rng.next_below(16)) +
                          rng.next_complex_gaussian(input.noise_var));

    DecodedStreams out = receive(ReceiverKind::sdma_single_user, input, nullptr, priv);
    CHECK_FALSE(out.common_present);

    // Oracle: marginal de-map with the interferer folded into the noise,
    // deinterleave, decode.
    const double eff = input.noise_var + std::norm(interferer[0]);
    std::vector<double> llrs;
    for (std::size_t s = 0; s < kSymbols; ++s) {
        std::vector<double> l =
            demap_marginal(input.y[s], input.private_gain[s], eff, q16, true);
        llrs.insert(llrs.end(), l.begin(), l.end());
    }
    LlrBlock block;
    block.values = deinterleave(llrs, priv.interleaver_seed);
    BpResult expect = bp_decode(priv.code, block);
    CHECK(out.private_stream.info_bits == expect.hard_info);
    CHECK(out.private_stream.info_llrs == expect.info_llrs.values);
}

TEST_CASE("joint interferer pipeline decodes a clean two-stream block") {
    SeededRng rng(93, 0);
    const Constellation &q = Constellation::qpsk();
    StreamCodec priv = make_codec(q, 0.5, 31);
    TxStream tx = transmit(priv, rng);

    ReceiveInput input;
    input.private_gain.assign(kSymbols, cplx(0.8, 0.1));
    input.noise_var = 1e-12;
    input.max_log = true;
    input.interferer_constellation = &q;
    cvec ig(kSymbols, cplx(-0.5, 0.6));
    input.interferer_gains.push_back(ig);
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.private_gain[s] * tx.symbols[s] +
                          ig[s] * q.point(rng.next_below(4)));

    DecodedStreams out = receive(ReceiverKind::sdma_joint, input, nullptr, priv);
    CHECK(out.private_stream.info_bits == tx.info);
}

TEST_CASE("genie-aided cancellation is identical across the cancelling kinds") {
    SeededRng rng(94, 0);
    const Constellation &q = Constellation::qpsk();
    StreamCodec common = make_codec(q, 0.7, 41);
    StreamCodec priv = make_codec(q, 0.3, 42);

    TxStream txc = transmit(common, rng);
    TxStream txp = transmit(priv, rng);

    ReceiveInput input;
    input.common_gain.assign(kSymbols, cplx(1.2, -0.3));
    input.private_gain.assign(kSymbols, cplx(0.4, 0.5));
    input.noise_var = 0.4; // noisy enough that estimates would differ
    input.max_log = true;
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.common_gain[s] * txc.symbols[s] +
                          input.private_gain[s] * txp.symbols[s] +
                          rng.next_complex_gaussian(input.noise_var));
    input.genie_common_labels = &txc.labels;

    DecodedStreams hard = receive(ReceiverKind::hard_cwic, input, &common, priv);
    DecodedStreams soft1 = receive(ReceiverKind::soft_cwic1, input, &common, priv);
    DecodedStreams soft2 = receive(ReceiverKind::soft_cwic2, input, &common, priv);

    CHECK(hard.private_stream.info_bits == soft1.private_stream.info_bits);
    CHECK(hard.private_stream.info_llrs == soft1.private_stream.info_llrs);
    CHECK(hard.private_stream.info_bits == soft2.private_stream.info_bits);
    CHECK(hard.private_stream.info_llrs == soft2.private_stream.info_llrs);
}

TEST_CASE("non-cancelling kinds ignore the genie hook") {
    SeededRng rng(95, 0);
    const Constellation &q = Constellation::qpsk();
    StreamCodec common = make_codec(q, 0.6, 51);
    StreamCodec priv = make_codec(q, 0.4, 52);

    TxStream txc = transmit(common, rng);
    TxStream txp = transmit(priv, rng);

    ReceiveInput input;
    input.common_gain.assign(kSymbols, cplx(1.0, 0.2));
    input.private_gain.assign(kSymbols, cplx(0.5, -0.6));
    input.noise_var = 0.5;
    input.max_log = true;
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.common_gain[s] * txc.symbols[s] +
                          input.private_gain[s] * txp.symbols[s] +
                          rng.next_complex_gaussian(input.noise_var));

    for (ReceiverKind kind : {ReceiverKind::joint_demapper, ReceiverKind::soft_slic}) {
        ReceiveInput plain = input;
        plain.genie_common_labels = nullptr;
        ReceiveInput aided = input;
        aided.genie_common_labels = &txc.labels;
        DecodedStreams a = receive(kind, plain, &common, priv);
        DecodedStreams b = receive(kind, aided, &common, priv);
        CHECK(a.private_stream.info_bits == b.private_stream.info_bits);
        CHECK(a.private_stream.info_llrs == b.private_stream.info_llrs);
    }
}

TEST_CASE("repeat calls are deterministic") {
    SeededRng rng(96, 0);
    const Constellation &q = Constellation::qpsk();
    StreamCodec common = make_codec(q, 0.5, 61);
    StreamCodec priv = make_codec(q, 0.5, 62);
    TxStream txc = transmit(common, rng);
    TxStream txp = transmit(priv, rng);

    ReceiveInput input;
    input.common_gain.assign(kSymbols, cplx(1.0, 0.0));
    input.private_gain.assign(kSymbols, cplx(0.6, 0.3));
    input.noise_var = 0.8;
    input.max_log = false;
    for (std::size_t s = 0; s < kSymbols; ++s)
        input.y.push_back(input.common_gain[s] * txc.symbols[s] +
                          input.private_gain[s] * txp.symbols[s] +
                          rng.next_complex_gaussian(input.noise_var));

    DecodedStreams a = receive(ReceiverKind::soft_cwic2, input, &common, priv);
    DecodedStreams b = receive(ReceiverKind::soft_cwic2, input, &common, priv);
    CHECK(a.private_stream.info_bits == b.private_stream.info_bits);
    CHECK(a.private_stream.info_llrs == b.private_stream.info_llrs);
    CHECK(a.common.info_llrs == b.common.info_llrs);
}

TEST_CASE("pipelines validate their inputs") {
    const Constellation &q = Constellation::qpsk();
    StreamCodec common = make_codec(q, 0.5, 71);
    StreamCodec priv = make_codec(q, 0.5, 72);

    ReceiveInput input;
    input.common_gain.assign(kSymbols, cplx(1, 0));
    input.private_gain.assign(kSymbols, cplx(1, 0));
    input.y.assign(kSymbols, cplx(0, 0));

    // A cancelling kind needs the common codec; SDMA kinds must not get one.
    CHECK_THROWS_AS(receive(ReceiverKind::hard_cwic, input, nullptr, priv),
                    std::invalid_argument);
    CHECK_THROWS_AS(receive(ReceiverKind::sdma_single_user, input, &common, priv),
                    std::invalid_argument);

    // Block length mismatch.
    ReceiveInput bad = input;
    bad.y.pop_back();
    CHECK_THROWS_AS(receive(ReceiverKind::joint_demapper, bad, &common, priv),
                    std::invalid_argument);
}

TEST_CASE("per-symbol cost, buffering and delay per receiver kind") {
    auto check_row = [](ReceiverKind kind, std::size_t evals, std::size_t buffer,
                        const std::string &delay) {
        ComplexityReport r = complexity_report(kind, 4, 4, 8, 512);
        CHECK(r.distance_evals_per_symbol == evals);
        CHECK(r.extra_buffer_bits == buffer);
        CHECK(r.extra_delay_label == delay);
    };
    check_row(ReceiverKind::hard_cwic, 8, 1024, "interleaving & mapping");
    check_row(ReceiverKind::soft_cwic1, 16, 8192, "interleaving & mapping");
    check_row(ReceiverKind::soft_cwic2, 8, 8192, "interleaving & mapping");
    check_row(ReceiverKind::joint_demapper, 16, 0, "-");
    check_row(ReceiverKind::soft_slic, 8, 0, "-");
    check_row(ReceiverKind::sdma_single_user, 4, 0, "-");
    check_row(ReceiverKind::sdma_joint, 16, 0, "-");

    // Asymmetric constellations: 16QAM common, QPSK private.
    ComplexityReport r = complexity_report(ReceiverKind::soft_cwic1, 16, 4, 8, 512);
    CHECK(r.distance_evals_per_symbol == 64);
    CHECK(r.extra_buffer_bits == 8 * 512 * 4);
}
