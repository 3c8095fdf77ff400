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

#include "rsma/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rsma {

namespace {

using nlohmann::json;

// RNG stream layout: (block 26 bits | snr index 6 bits | purpose 4 bits |
// sub 28 bits). Draw sequences depend only on these coordinates, never on
// worker count or scheme order, which makes every run replayable.
enum : std::uint64_t {
    kPurposeChannel = 0,
    kPurposeCommonBits = 1,
    kPurposePrivateBits = 2,
    kPurposeNoise = 3,
    kPurposeEntropy = 4,
    kPurposeInterleaver = 5,
};

std::uint64_t pack_stream(std::uint64_t block, std::uint64_t snr_idx, std::uint64_t purpose,
                          std::uint64_t sub) {
    return (block << 38) | (snr_idx << 32) | (purpose << 28) | sub;
}

constexpr std::uint64_t kGroupStride = 256; // sub-slots reserved per transmit group

const Constellation &constellation_ref(const std::string &name) {
    return Constellation::by_name(name);
}

bool valid_choice(const std::string &v, std::initializer_list<const char *> allowed) {
    for (const char *a : allowed) {
        if (v == a) {
            return true;
        }
    }
    return false;
}

// ---------------------------------------------------------------- schemes

struct TxGroup {
    std::vector<std::size_t> scheme_idx; // schemes sharing this transmission
    bool is_rsma = true;
    AllocationObjective objective = AllocationObjective::gaussian;
    bool mrt = false; // sdma direction design
    std::optional<double> delta;
    const Constellation *xc = nullptr;
    const Constellation *xp = nullptr;
    PolarCodeSpec common_code;
    PolarCodeSpec private_code;
    std::uint64_t il_common = 0;
    std::uint64_t il_private_base = 0; // + user index
};

std::string tx_signature(const SchemeConfig &s) {
    std::ostringstream os;
    os.precision(17);
    os << s.family << '|';
    if (s.family == "rsma") {
        os << s.allocation << '|' << s.common_mcs.constellation << ':' << s.common_mcs.code_rate
           << '|';
    } else {
        os << s.precoder << '|';
    }
    os << s.private_mcs.constellation << ':' << s.private_mcs.code_rate;
    if (s.delta.has_value()) {
        os << "|d:" << *s.delta;
    }
    return os.str();
}

// Channel geometry of one transmit group (the per-scheme spread override
// applied to the global spec), with its Karhunen-Loeve factor.
struct GroupContext {
    OneRingSpec spec;
    KLFactor factor;
};

std::vector<GroupContext> make_contexts(const SimulationConfig &cfg,
                                        const std::vector<TxGroup> &groups) {
    std::vector<GroupContext> ctx;
    ctx.reserve(groups.size());
    for (const TxGroup &g : groups) {
        GroupContext c;
        c.spec = cfg.channel;
        if (g.delta.has_value()) {
            c.spec.delta = *g.delta;
        }
        c.spec.validate();
        c.factor = kl_factor(covariance_matrix(c.spec));
        ctx.push_back(std::move(c));
    }
    return ctx;
}

AllocationObjective objective_of(const std::string &allocation) {
    if (allocation == "gaussian") {
        return AllocationObjective::gaussian;
    }
    if (allocation == "cc-sic") {
        return AllocationObjective::cc_sic;
    }
    return AllocationObjective::cc_non_sic;
}

std::vector<TxGroup> build_groups(const SimulationConfig &cfg, bool with_codes) {
    std::vector<TxGroup> groups;
    std::vector<std::string> signatures;
    for (std::size_t i = 0; i < cfg.schemes.size(); ++i) {
        const SchemeConfig &s = cfg.schemes[i];
        const std::string sig = tx_signature(s);
        std::size_t g = signatures.size();
        for (std::size_t j = 0; j < signatures.size(); ++j) {
            if (signatures[j] == sig) {
                g = j;
                break;
            }
        }
        if (g == signatures.size()) {
            signatures.push_back(sig);
            TxGroup group;
            group.is_rsma = s.family == "rsma";
            group.objective = objective_of(s.allocation);
            group.mrt = s.precoder == "mrt";
            group.delta = s.delta;
            group.xp = &constellation_ref(s.private_mcs.constellation);
            if (group.is_rsma) {
                group.xc = &constellation_ref(s.common_mcs.constellation);
            }
            if (with_codes) {
                const std::size_t tp = cfg.block_symbols * group.xp->bits_per_symbol();
                group.private_code = construct_rate_matched(tp, s.private_mcs.code_rate);
                if (group.is_rsma) {
                    const std::size_t tc = cfg.block_symbols * group.xc->bits_per_symbol();
                    group.common_code = construct_rate_matched(tc, s.common_mcs.code_rate);
                }
                group.il_common = pack_stream(0, 0, kPurposeInterleaver, g * kGroupStride);
                group.il_private_base =
                    pack_stream(0, 0, kPurposeInterleaver, g * kGroupStride + 1);
            }
            groups.push_back(std::move(group));
        }
        groups[g].scheme_idx.push_back(i);
    }
    return groups;
}

// ------------------------------------------------------------- tx helpers

std::vector<std::uint8_t> random_bits(SeededRng &rng, std::size_t n) {
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n; ++i) {
        bits[i] = static_cast<std::uint8_t>(rng.next_u64() & 1u);
    }
    return bits;
}

// One channel draw accepted by every scheme family: redraw while the
// zero-forcing system is numerically singular so all transmit groups see
// the same realization sequence.
struct AcceptedDraw {
    ChannelRealization channels;
    std::vector<cvec> zf;
};

AcceptedDraw draw_channel(const KLFactor &factor, std::size_t k_users, SeededRng &rng) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        AcceptedDraw draw;
        draw.channels = sample_channel(factor, k_users, rng);
        try {
            draw.zf = zf_directions(draw.channels);
            return draw;
        } catch (const SingularChannelError &) {
            continue;
        }
    }
    throw SingularChannelError("sim: channel draws persistently singular");
}

double power_from_snr(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

double pick_t(const TxGroup &group, const ChannelRealization &channels, const cvec &cdir,
              const std::vector<cvec> &pdirs, double p_total, const std::vector<double> &grid) {
    if (!group.is_rsma) {
        return 0.0;
    }
    if (group.objective == AllocationObjective::gaussian) {
        PrecoderSet ps;
        ps.common_dir = cdir;
        ps.private_dirs = pdirs;
        ps.t = 0.0;
        ps.p_total = p_total;
        return closed_form_t_star(gaussian_allocation_terms(channels, ps));
    }
    return power_allocation_search(channels, cdir, pdirs, p_total, group.objective, grid,
                                   group.xc, group.xp);
}

// ------------------------------------------------------------------ BER

struct BerSlot {
    std::uint64_t common_errors = 0;
    std::uint64_t common_bits = 0;
    std::uint64_t private_errors = 0;
    std::uint64_t private_bits = 0;
};

std::uint64_t count_bit_errors(const std::vector<std::uint8_t> &a,
                               const std::vector<std::uint8_t> &b) {
    std::uint64_t e = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        e += (a[i] ^ b[i]) & 1u;
    }
    return e;
}

void run_ber_group(const SimulationConfig &cfg, const KLFactor &factor, std::size_t g,
                   const TxGroup &group, std::size_t si, std::vector<BerSlot> &slots) {
    const std::size_t k_users = cfg.channel.n_users;
    const std::size_t block = cfg.block_symbols;
    const double p_total = power_from_snr(cfg.snr_db[si]);
    const std::size_t coherence =
        cfg.fading == FadingKind::fast ? 1 : cfg.coherence;
    const std::size_t n_real = block / coherence;
    const std::size_t n_schemes = group.scheme_idx.size();

    const std::int64_t n_blocks = static_cast<std::int64_t>(cfg.n_blocks);
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t bi = 0; bi < n_blocks; ++bi) {
        const std::uint64_t b = static_cast<std::uint64_t>(bi);
        SeededRng ch_rng(cfg.seed, pack_stream(b, si, kPurposeChannel, 0));

        // Per-user, per-symbol effective gains.
        std::vector<cvec> cgain(k_users, cvec(block));
        std::vector<std::vector<cvec>> pgain(k_users,
                                             std::vector<cvec>(k_users, cvec(block)));
        for (std::size_t r = 0; r < n_real; ++r) {
            AcceptedDraw draw = draw_channel(factor, k_users, ch_rng);
            std::vector<cvec> pdirs = group.is_rsma || !group.mrt
                                          ? draw.zf
                                          : mrt_directions(draw.channels);
            cvec cdir;
            double t = 0.0;
            if (group.is_rsma) {
                cdir = common_direction(draw.channels);
                t = pick_t(group, draw.channels, cdir, pdirs, p_total, cfg.t_grid);
            }
            const double sc = std::sqrt(p_total * t);
            const double sp =
                std::sqrt(p_total * (1.0 - t) / static_cast<double>(k_users));
            for (std::size_t k = 0; k < k_users; ++k) {
                const cplx gc =
                    group.is_rsma ? sc * inner_product(draw.channels.h[k], cdir) : cplx{};
                for (std::size_t s = r * coherence; s < (r + 1) * coherence; ++s) {
                    cgain[k][s] = gc;
                }
                for (std::size_t j = 0; j < k_users; ++j) {
                    const cplx gp = sp * inner_product(draw.channels.h[k], pdirs[j]);
                    for (std::size_t s = r * coherence; s < (r + 1) * coherence; ++s) {
                        pgain[k][j][s] = gp;
                    }
                }
            }
        }

        // Transmit both codewords across the block.
        std::vector<std::uint8_t> common_info;
        cvec sc_symbols;
        if (group.is_rsma) {
            SeededRng bits_rng(cfg.seed,
                               pack_stream(b, si, kPurposeCommonBits, g * kGroupStride));
            common_info = random_bits(bits_rng, group.common_code.info_length);
            sc_symbols = map_symbols(
                interleave(encode(group.common_code, common_info), group.il_common),
                *group.xc);
        }
        std::vector<std::vector<std::uint8_t>> private_info(k_users);
        std::vector<cvec> sp_symbols(k_users);
        for (std::size_t k = 0; k < k_users; ++k) {
            SeededRng bits_rng(cfg.seed,
                               pack_stream(b, si, kPurposePrivateBits, g * kGroupStride + k));
            private_info[k] = random_bits(bits_rng, group.private_code.info_length);
            sp_symbols[k] = map_symbols(
                interleave(encode(group.private_code, private_info[k]),
                           group.il_private_base + k),
                *group.xp);
        }

        for (std::size_t k = 0; k < k_users; ++k) {
            SeededRng noise_rng(cfg.seed, pack_stream(b, si, kPurposeNoise, k));
            cvec y = sample_complex_gaussian(noise_rng, block, cfg.noise_var);
            for (std::size_t s = 0; s < block; ++s) {
                if (group.is_rsma) {
                    y[s] += cgain[k][s] * sc_symbols[s];
                }
                for (std::size_t j = 0; j < k_users; ++j) {
                    y[s] += pgain[k][j][s] * sp_symbols[j][s];
                }
            }

            ReceiveInput input;
            input.y = std::move(y);
            if (group.is_rsma) {
                input.common_gain = cgain[k];
            }
            input.private_gain = pgain[k][k];
            for (std::size_t j = 0; j < k_users; ++j) {
                if (j != k) {
                    input.interferer_gains.push_back(pgain[k][j]);
                }
            }
            input.interferer_constellation = group.xp;
            input.noise_var = cfg.noise_var;
            input.max_log = cfg.max_log;

            StreamCodec priv;
            priv.code = group.private_code;
            priv.constellation = group.xp;
            priv.interleaver_seed = group.il_private_base + k;
            StreamCodec common;
            if (group.is_rsma) {
                common.code = group.common_code;
                common.constellation = group.xc;
                common.interleaver_seed = group.il_common;
            }

            for (std::size_t m = 0; m < n_schemes; ++m) {
                const SchemeConfig &scheme = cfg.schemes[group.scheme_idx[m]];
                const ReceiverKind kind = receiver_kind_by_name(scheme.receiver);
                const DecodedStreams out =
                    receive(kind, input, group.is_rsma ? &common : nullptr, priv);
                BerSlot &slot = slots[static_cast<std::size_t>(bi) * n_schemes + m];
                if (out.common_present) {
                    slot.common_errors += count_bit_errors(out.common.info_bits, common_info);
                    slot.common_bits += common_info.size();
                }
                slot.private_errors +=
                    count_bit_errors(out.private_stream.info_bits, private_info[k]);
                slot.private_bits += private_info[k].size();
            }
        }
    }
}

// ---------------------------------------------------------------- rates

// Constellation-constrained sum rate of an SDMA transmission: every stream
// is private, user k de-maps its own stream against the full discrete
// interference cloud (log2 M - H(all) + H(interferers)).
struct SdmaRate {
    double sum = 0.0;
    double private_sum = 0.0;
};

SdmaRate sdma_cc_rate(const ChannelRealization &channels, const std::vector<cvec> &dirs,
                      double p_total, const Constellation &xp, const std::string &method,
                      double noise_var, const EntropyMcSettings &mc, std::uint64_t sub_base) {
    const std::size_t k_users = channels.h.size();
    const double scale = std::sqrt(p_total / static_cast<double>(k_users));
    const double log2_m = std::log2(static_cast<double>(xp.size()));
    const std::size_t m = xp.size();

    SdmaRate out;
    for (std::size_t k = 0; k < k_users; ++k) {
        cvec gains(k_users);
        for (std::size_t j = 0; j < k_users; ++j) {
            gains[j] = scale * inner_product(channels.h[k], dirs[j]);
        }
        // Enumerate the joint alphabet of all streams, then of interferers.
        std::size_t full_size = 1;
        for (std::size_t j = 0; j < k_users; ++j) {
            full_size *= m;
        }
        cvec full(full_size);
        for (std::size_t idx = 0; idx < full_size; ++idx) {
            std::size_t rem = idx;
            cplx p{};
            for (std::size_t j = 0; j < k_users; ++j) {
                p += gains[j] * xp.point(rem % m);
                rem /= m;
            }
            full[idx] = p;
        }
        const std::size_t int_size = full_size / m;
        cvec interf(int_size);
        for (std::size_t idx = 0; idx < int_size; ++idx) {
            std::size_t rem = idx;
            cplx p{};
            for (std::size_t j = 0; j < k_users; ++j) {
                if (j == k) {
                    continue;
                }
                p += gains[j] * xp.point(rem % m);
                rem /= m;
            }
            interf[idx] = p;
        }
        double h_full = 0.0;
        double h_int = 0.0;
        if (method == "approx") {
            h_full = cc_entropy_approx(full, noise_var);
            h_int = cc_entropy_approx(interf, noise_var);
        } else {
            SeededRng rng_full(mc.seed, mc.stream + sub_base + k * 4);
            SeededRng rng_int(mc.seed, mc.stream + sub_base + k * 4 + 1);
            h_full = cc_entropy_exact(full, noise_var, rng_full, mc.n_noise).value;
            h_int = cc_entropy_exact(interf, noise_var, rng_int, mc.n_noise).value;
        }
        const double rk = std::max(0.0, log2_m - h_full + h_int);
        out.private_sum += rk;
    }
    out.sum = out.private_sum;
    return out;
}

struct RateSlot {
    double sum = 0.0;
    double common = 0.0;
    double private_sum = 0.0;
};

// ------------------------------------------------------------------ emit

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

} // namespace

void SimulationConfig::validate() const {
    channel.validate();
    if (block_symbols == 0) {
        throw std::invalid_argument("config: block_symbols must be positive");
    }
    if (fading == FadingKind::block) {
        if (coherence == 0 || block_symbols % coherence != 0) {
            throw std::invalid_argument("config: coherence must divide block_symbols");
        }
    }
    if (n_blocks == 0 || n_blocks >= (std::uint64_t{1} << 26)) {
        throw std::invalid_argument("config: n_blocks out of range");
    }
    if (snr_db.empty() || snr_db.size() > 64) {
        throw std::invalid_argument("config: snr_db needs 1 to 64 entries");
    }
    for (double s : snr_db) {
        if (!std::isfinite(s)) {
            throw std::invalid_argument("config: snr_db entries must be finite");
        }
    }
    if (!(noise_var > 0.0) || !std::isfinite(noise_var)) {
        throw std::invalid_argument("config: noise_var must be positive");
    }
    if (t_grid.empty()) {
        throw std::invalid_argument("config: t_grid must not be empty");
    }
    for (double t : t_grid) {
        if (!(t >= 0.0 && t <= 1.0)) {
            throw std::invalid_argument("config: t_grid entries must lie in [0, 1]");
        }
    }
    if (rate_method != "approx" && rate_method != "exact") {
        throw std::invalid_argument("config: rate_method must be approx or exact");
    }
    if (entropy_draws < 2) {
        throw std::invalid_argument("config: entropy_draws must be at least 2");
    }
    if (schemes.empty()) {
        throw std::invalid_argument("config: at least one scheme required");
    }
    std::set<std::string> ids;
    for (const SchemeConfig &s : schemes) {
        if (s.id.empty()) {
            throw std::invalid_argument("config: scheme id must not be empty");
        }
        if (!ids.insert(s.id).second) {
            throw std::invalid_argument("config: duplicate scheme id '" + s.id + "'");
        }
        if (!valid_choice(s.family, {"rsma", "sdma"})) {
            throw std::invalid_argument("config: family must be rsma or sdma");
        }
        if (!valid_choice(s.allocation, {"gaussian", "cc-sic", "cc-nonsic"})) {
            throw std::invalid_argument("config: unknown allocation '" + s.allocation + "'");
        }
        if (!valid_choice(s.precoder, {"zf", "mrt"})) {
            throw std::invalid_argument("config: precoder must be zf or mrt");
        }
        if (!valid_choice(s.rate_mode, {"sic", "non-sic"})) {
            throw std::invalid_argument("config: rate_mode must be sic or non-sic");
        }
        const ReceiverKind kind = receiver_kind_by_name(s.receiver);
        const bool sdma_kind =
            kind == ReceiverKind::sdma_single_user || kind == ReceiverKind::sdma_joint;
        if ((s.family == "sdma") != sdma_kind) {
            throw std::invalid_argument("config: receiver '" + s.receiver +
                                        "' does not fit family '" + s.family + "'");
        }
        constellation_ref(s.private_mcs.constellation);
        if (!(s.private_mcs.code_rate > 0.0 && s.private_mcs.code_rate < 1.0)) {
            throw std::invalid_argument("config: private code rate must lie in (0, 1)");
        }
        if (s.family == "rsma") {
            constellation_ref(s.common_mcs.constellation);
            if (!(s.common_mcs.code_rate > 0.0 && s.common_mcs.code_rate < 1.0)) {
                throw std::invalid_argument("config: common code rate must lie in (0, 1)");
            }
        }
        if (experiment == ExperimentKind::tstar_cdf && s.family != "rsma") {
            throw std::invalid_argument("config: t* CDF runs take rsma schemes only");
        }
        if (s.delta.has_value()) {
            OneRingSpec probe = channel;
            probe.delta = *s.delta;
            probe.validate();
        }
    }
}

namespace {

void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed,
                         const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *a : allowed) {
            if (it.key() == a) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw std::invalid_argument("config: unknown key '" + it.key() + "' in " + where);
        }
    }
}

McsConfig parse_mcs(const json &j, const std::string &where) {
    reject_unknown_keys(j, {"constellation", "code_rate"}, where);
    McsConfig mcs;
    if (j.contains("constellation")) {
        mcs.constellation = j.at("constellation").get<std::string>();
    }
    if (j.contains("code_rate")) {
        mcs.code_rate = j.at("code_rate").get<double>();
    }
    return mcs;
}

} // namespace

SimulationConfig parse_config(const std::string &json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception &e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw std::invalid_argument("config: top level must be an object");
    }
    reject_unknown_keys(j,
                        {"scenario", "experiment", "channel", "fading", "coherence", "snr_db",
                         "noise_var", "block_symbols", "n_blocks", "seed", "t_grid",
                         "rate_method", "entropy_draws", "max_log", "schemes"},
                        "top level");
    SimulationConfig cfg;
    if (j.contains("scenario")) {
        cfg.scenario = j.at("scenario").get<std::string>();
    }
    if (j.contains("experiment")) {
        const std::string e = j.at("experiment").get<std::string>();
        if (e == "rates") {
            cfg.experiment = ExperimentKind::rates;
        } else if (e == "cdf") {
            cfg.experiment = ExperimentKind::tstar_cdf;
        } else if (e == "ber") {
            cfg.experiment = ExperimentKind::ber;
        } else {
            throw std::invalid_argument("config: experiment must be rates, cdf or ber");
        }
    }
    if (j.contains("channel")) {
        const json &c = j.at("channel");
        reject_unknown_keys(c, {"n_tx", "theta", "delta", "n_users"}, "channel");
        if (c.contains("n_tx")) {
            cfg.channel.n_tx = c.at("n_tx").get<std::size_t>();
        }
        if (c.contains("theta")) {
            cfg.channel.theta = c.at("theta").get<double>();
        }
        if (c.contains("delta")) {
            cfg.channel.delta = c.at("delta").get<double>();
        }
        if (c.contains("n_users")) {
            cfg.channel.n_users = c.at("n_users").get<std::size_t>();
        }
    }
    if (j.contains("fading")) {
        const std::string f = j.at("fading").get<std::string>();
        if (f == "fast") {
            cfg.fading = FadingKind::fast;
        } else if (f == "block") {
            cfg.fading = FadingKind::block;
        } else {
            throw std::invalid_argument("config: fading must be fast or block");
        }
    }
    if (j.contains("coherence")) {
        cfg.coherence = j.at("coherence").get<std::size_t>();
    }
    if (j.contains("snr_db")) {
        cfg.snr_db = j.at("snr_db").get<std::vector<double>>();
    }
    if (j.contains("noise_var")) {
        cfg.noise_var = j.at("noise_var").get<double>();
    }
    if (j.contains("block_symbols")) {
        cfg.block_symbols = j.at("block_symbols").get<std::size_t>();
    }
    if (j.contains("n_blocks")) {
        cfg.n_blocks = j.at("n_blocks").get<std::size_t>();
    }
    if (j.contains("seed")) {
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("t_grid")) {
        cfg.t_grid = j.at("t_grid").get<std::vector<double>>();
    }
    if (j.contains("rate_method")) {
        cfg.rate_method = j.at("rate_method").get<std::string>();
    }
    if (j.contains("entropy_draws")) {
        cfg.entropy_draws = j.at("entropy_draws").get<std::size_t>();
    }
    if (j.contains("max_log")) {
        cfg.max_log = j.at("max_log").get<bool>();
    }
    if (j.contains("schemes")) {
        if (!j.at("schemes").is_array()) {
            throw std::invalid_argument("config: schemes must be an array");
        }
        for (const json &s : j.at("schemes")) {
            reject_unknown_keys(s,
                                {"id", "family", "allocation", "receiver", "precoder",
                                 "rate_mode", "common", "private", "delta"},
                                "scheme");
            SchemeConfig sc;
            if (s.contains("id")) {
                sc.id = s.at("id").get<std::string>();
            }
            if (s.contains("family")) {
                sc.family = s.at("family").get<std::string>();
            }
            if (s.contains("allocation")) {
                sc.allocation = s.at("allocation").get<std::string>();
            }
            if (s.contains("receiver")) {
                sc.receiver = s.at("receiver").get<std::string>();
            }
            if (s.contains("precoder")) {
                sc.precoder = s.at("precoder").get<std::string>();
            }
            if (s.contains("rate_mode")) {
                sc.rate_mode = s.at("rate_mode").get<std::string>();
            }
            if (s.contains("common")) {
                sc.common_mcs = parse_mcs(s.at("common"), "scheme common MCS");
            }
            if (s.contains("private")) {
                sc.private_mcs = parse_mcs(s.at("private"), "scheme private MCS");
            }
            if (s.contains("delta")) {
                sc.delta = s.at("delta").get<double>();
            }
            cfg.schemes.push_back(std::move(sc));
        }
    }
    cfg.validate();
    return cfg;
}

std::string config_to_json(const SimulationConfig &cfg) {
    json j;
    j["scenario"] = cfg.scenario;
    j["experiment"] = cfg.experiment == ExperimentKind::rates
                          ? "rates"
                          : (cfg.experiment == ExperimentKind::tstar_cdf ? "cdf" : "ber");
    j["channel"] = {{"n_tx", cfg.channel.n_tx},
                    {"theta", cfg.channel.theta},
                    {"delta", cfg.channel.delta},
                    {"n_users", cfg.channel.n_users}};
    j["fading"] = cfg.fading == FadingKind::fast ? "fast" : "block";
    j["coherence"] = cfg.coherence;
    j["snr_db"] = cfg.snr_db;
    j["noise_var"] = cfg.noise_var;
    j["block_symbols"] = cfg.block_symbols;
    j["n_blocks"] = cfg.n_blocks;
    j["seed"] = cfg.seed;
    j["t_grid"] = cfg.t_grid;
    j["rate_method"] = cfg.rate_method;
    j["entropy_draws"] = cfg.entropy_draws;
    j["max_log"] = cfg.max_log;
    j["schemes"] = json::array();
    for (const SchemeConfig &s : cfg.schemes) {
        json js;
        js["id"] = s.id;
        js["family"] = s.family;
        js["receiver"] = s.receiver;
        js["private"] = {{"constellation", s.private_mcs.constellation},
                         {"code_rate", s.private_mcs.code_rate}};
        if (s.family == "rsma") {
            js["allocation"] = s.allocation;
            js["rate_mode"] = s.rate_mode;
            js["common"] = {{"constellation", s.common_mcs.constellation},
                            {"code_rate", s.common_mcs.code_rate}};
        } else {
            js["precoder"] = s.precoder;
        }
        if (s.delta.has_value()) {
            js["delta"] = *s.delta;
        }
        j["schemes"].push_back(std::move(js));
    }
    return j.dump(2) + "\n";
}

bool operator==(const Record &a, const Record &b) {
    return a.scheme == b.scheme && a.snr_db == b.snr_db && a.stream == b.stream &&
           a.metric == b.metric && a.value == b.value && a.trials == b.trials &&
           a.seed == b.seed;
}

std::vector<Record> run_rate_curves(const SimulationConfig &cfg) {
    cfg.validate();
    const std::size_t k_users = cfg.channel.n_users;
    const std::vector<TxGroup> groups = build_groups(cfg, false);
    const std::vector<GroupContext> ctx = make_contexts(cfg, groups);
    const std::size_t n_schemes = cfg.schemes.size();

    // Map scheme index -> group index for per-scheme evaluation.
    std::vector<std::size_t> group_of(n_schemes);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t idx : groups[g].scheme_idx) {
            group_of[idx] = g;
        }
    }

    std::vector<Record> records;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double p_total = power_from_snr(cfg.snr_db[si]);
        std::vector<RateSlot> slots(cfg.n_blocks * n_schemes);
        const std::int64_t n_blocks = static_cast<std::int64_t>(cfg.n_blocks);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t bi = 0; bi < n_blocks; ++bi) {
            const std::uint64_t b = static_cast<std::uint64_t>(bi);
            // Groups with equal geometry replay the same draws: the stream
            // depends only on (block, SNR index).
            std::vector<std::unique_ptr<AcceptedDraw>> draws(groups.size());
            const auto draw_for = [&](std::size_t g) -> const AcceptedDraw & {
                if (!draws[g]) {
                    SeededRng ch_rng(cfg.seed, pack_stream(b, si, kPurposeChannel, 0));
                    draws[g] = std::make_unique<AcceptedDraw>(
                        draw_channel(ctx[g].factor, k_users, ch_rng));
                }
                return *draws[g];
            };
            EntropyMcSettings mc;
            mc.n_noise = cfg.entropy_draws;
            mc.seed = cfg.seed;
            mc.stream = pack_stream(b, si, kPurposeEntropy, 0);

            for (std::size_t m = 0; m < n_schemes; ++m) {
                const SchemeConfig &scheme = cfg.schemes[m];
                const TxGroup &group = groups[group_of[m]];
                const AcceptedDraw &draw = draw_for(group_of[m]);
                RateSlot &slot = slots[static_cast<std::size_t>(bi) * n_schemes + m];
                if (group.is_rsma) {
                    const cvec cdir = common_direction(draw.channels);
                    const double t = pick_t(group, draw.channels, cdir, draw.zf, p_total,
                                            cfg.t_grid);
                    const double sc = std::sqrt(p_total * t);
                    const double sp =
                        std::sqrt(p_total * (1.0 - t) / static_cast<double>(k_users));
                    cvec g_common(k_users);
                    cvec g_private(k_users);
                    for (std::size_t k = 0; k < k_users; ++k) {
                        g_common[k] = sc * inner_product(draw.channels.h[k], cdir);
                        g_private[k] = sp * inner_product(draw.channels.h[k], draw.zf[k]);
                    }
                    std::vector<const Constellation *> xk(k_users, group.xp);
                    const CcRateReport report = cc_sum_rate_from_gains(
                        g_common, g_private, *group.xc, xk, cfg.noise_var,
                        scheme.rate_mode == "sic" ? SicMode::sic : SicMode::non_sic,
                        cfg.rate_method == "approx" ? RateMethod::approx
                                                    : RateMethod::exact_mc,
                        mc);
                    slot.sum = report.sum;
                    slot.common = report.common_rate;
                    slot.private_sum = report.sum - report.common_rate;
                } else {
                    const SdmaRate r = sdma_cc_rate(
                        draw.channels,
                        group.mrt ? mrt_directions(draw.channels) : draw.zf, p_total,
                        *group.xp, cfg.rate_method, cfg.noise_var, mc, 64);
                    slot.sum = r.sum;
                    slot.private_sum = r.private_sum;
                }
            }
        }

        for (std::size_t m = 0; m < n_schemes; ++m) {
            RateSlot total;
            for (std::size_t bi = 0; bi < cfg.n_blocks; ++bi) {
                const RateSlot &s = slots[bi * n_schemes + m];
                total.sum += s.sum;
                total.common += s.common;
                total.private_sum += s.private_sum;
            }
            const double inv = 1.0 / static_cast<double>(cfg.n_blocks);
            const SchemeConfig &scheme = cfg.schemes[m];
            records.push_back({scheme.id, cfg.snr_db[si], "aggregate", "cc_sum_rate",
                               total.sum * inv, cfg.n_blocks, cfg.seed});
            if (scheme.family == "rsma") {
                records.push_back({scheme.id, cfg.snr_db[si], "common", "cc_common_rate",
                                   total.common * inv, cfg.n_blocks, cfg.seed});
            }
            records.push_back({scheme.id, cfg.snr_db[si], "private", "cc_private_sum",
                               total.private_sum * inv, cfg.n_blocks, cfg.seed});
        }
    }
    return records;
}

std::vector<Record> run_tstar_cdf(const SimulationConfig &cfg) {
    cfg.validate();
    const std::size_t k_users = cfg.channel.n_users;
    const std::vector<TxGroup> groups = build_groups(cfg, false);
    const std::vector<GroupContext> ctx = make_contexts(cfg, groups);
    const std::size_t n_schemes = cfg.schemes.size();
    std::vector<std::size_t> group_of(n_schemes);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (std::size_t idx : groups[g].scheme_idx) {
            group_of[idx] = g;
        }
    }

    std::vector<Record> records;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        const double p_total = power_from_snr(cfg.snr_db[si]);
        std::vector<double> tstar(cfg.n_blocks * n_schemes);
        const std::int64_t n_blocks = static_cast<std::int64_t>(cfg.n_blocks);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t bi = 0; bi < n_blocks; ++bi) {
            const std::uint64_t b = static_cast<std::uint64_t>(bi);
            std::vector<std::unique_ptr<AcceptedDraw>> draws(groups.size());
            for (std::size_t m = 0; m < n_schemes; ++m) {
                const std::size_t g = group_of[m];
                const TxGroup &group = groups[g];
                if (!draws[g]) {
                    SeededRng ch_rng(cfg.seed, pack_stream(b, si, kPurposeChannel, 0));
                    draws[g] = std::make_unique<AcceptedDraw>(
                        draw_channel(ctx[g].factor, k_users, ch_rng));
                }
                const AcceptedDraw &draw = *draws[g];
                const cvec cdir = common_direction(draw.channels);
                // Every objective, including the Gaussian one, is searched
                // on the configured grid so CDFs share their support.
                tstar[static_cast<std::size_t>(bi) * n_schemes + m] =
                    power_allocation_search(draw.channels, cdir, draw.zf, p_total,
                                            group.objective, cfg.t_grid, group.xc, group.xp);
            }
        }
        for (std::size_t m = 0; m < n_schemes; ++m) {
            for (std::size_t bi = 0; bi < cfg.n_blocks; ++bi) {
                records.push_back({cfg.schemes[m].id, cfg.snr_db[si], "aggregate", "t_star",
                                   tstar[bi * n_schemes + m], cfg.n_blocks, cfg.seed});
            }
        }
    }
    return records;
}

std::vector<Record> run_ber(const SimulationConfig &cfg) {
    cfg.validate();
    const std::vector<TxGroup> groups = build_groups(cfg, true);
    const std::vector<GroupContext> ctx = make_contexts(cfg, groups);

    std::vector<Record> records;
    for (std::size_t si = 0; si < cfg.snr_db.size(); ++si) {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            const TxGroup &group = groups[g];
            const std::size_t n_schemes = group.scheme_idx.size();
            std::vector<BerSlot> slots(cfg.n_blocks * n_schemes);
            run_ber_group(cfg, ctx[g].factor, g, group, si, slots);

            for (std::size_t m = 0; m < n_schemes; ++m) {
                BerSlot total;
                for (std::size_t bi = 0; bi < cfg.n_blocks; ++bi) {
                    const BerSlot &s = slots[bi * n_schemes + m];
                    total.common_errors += s.common_errors;
                    total.common_bits += s.common_bits;
                    total.private_errors += s.private_errors;
                    total.private_bits += s.private_bits;
                }
                const SchemeConfig &scheme = cfg.schemes[group.scheme_idx[m]];
                if (total.common_bits > 0) {
                    records.push_back({scheme.id, cfg.snr_db[si], "common", "ber",
                                       static_cast<double>(total.common_errors) /
                                           static_cast<double>(total.common_bits),
                                       cfg.n_blocks, cfg.seed});
                }
                records.push_back({scheme.id, cfg.snr_db[si], "private", "ber",
                                   static_cast<double>(total.private_errors) /
                                       static_cast<double>(total.private_bits),
                                   cfg.n_blocks, cfg.seed});
                const std::uint64_t all_bits = total.common_bits + total.private_bits;
                records.push_back({scheme.id, cfg.snr_db[si], "aggregate", "ber",
                                   static_cast<double>(total.common_errors +
                                                       total.private_errors) /
                                       static_cast<double>(all_bits),
                                   cfg.n_blocks, cfg.seed});
            }
        }
    }
    return records;
}

std::vector<Record> run_experiment(const SimulationConfig &cfg) {
    switch (cfg.experiment) {
    case ExperimentKind::rates:
        return run_rate_curves(cfg);
    case ExperimentKind::tstar_cdf:
        return run_tstar_cdf(cfg);
    case ExperimentKind::ber:
        return run_ber(cfg);
    }
    throw std::invalid_argument("config: unknown experiment");
}

void emit(const std::vector<Record> &records, const std::string &path, OutputFormat format) {
    if (records.empty()) {
        throw std::invalid_argument("emit: no records");
    }
    std::vector<Record> sorted(records);
    std::stable_sort(sorted.begin(), sorted.end(), [](const Record &a, const Record &b) {
        if (a.scheme != b.scheme) {
            return a.scheme < b.scheme;
        }
        if (a.snr_db != b.snr_db) {
            return a.snr_db < b.snr_db;
        }
        if (a.stream != b.stream) {
            return a.stream < b.stream;
        }
        return a.metric < b.metric;
    });

    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("emit: cannot open '" + path + "' for writing");
    }
    if (format == OutputFormat::csv) {
        out << "scheme,snr_db,stream,metric,value,trials,seed\n";
        for (const Record &r : sorted) {
            out << r.scheme << ',' << format_double(r.snr_db) << ',' << r.stream << ','
                << r.metric << ',' << format_double(r.value) << ',' << r.trials << ','
                << r.seed << '\n';
        }
    } else {
        json arr = json::array();
        for (const Record &r : sorted) {
            arr.push_back({{"scheme", r.scheme},
                           {"snr_db", r.snr_db},
                           {"stream", r.stream},
                           {"metric", r.metric},
                           {"value", r.value},
                           {"trials", r.trials},
                           {"seed", r.seed}});
        }
        out << arr.dump(2) << '\n';
    }
    out.flush();
    if (!out) {
        throw std::runtime_error("emit: write to '" + path + "' failed");
    }
}

std::vector<Record> read_records_json(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read: cannot open '" + path + "'");
    }
    json arr;
    try {
        in >> arr;
    } catch (const json::exception &e) {
        throw std::runtime_error("read: invalid JSON in '" + path + "': " + e.what());
    }
    std::vector<Record> records;
    for (const json &r : arr) {
        records.push_back({r.at("scheme").get<std::string>(), r.at("snr_db").get<double>(),
                           r.at("stream").get<std::string>(), r.at("metric").get<std::string>(),
                           r.at("value").get<double>(), r.at("trials").get<std::uint64_t>(),
                           r.at("seed").get<std::uint64_t>()});
    }
    return records;
}

} // namespace rsma
