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

#include "rsma/presets.hpp"

#include <stdexcept>

namespace rsma {

namespace {

constexpr double kPi = 3.141592653589793;

SchemeConfig rsma_scheme(std::string id, std::string allocation, std::string receiver,
                         std::string xc, double rc, std::string xp, double rp,
                         std::string rate_mode = "sic") {
    SchemeConfig s;
    s.id = std::move(id);
    s.family = "rsma";
    s.allocation = std::move(allocation);
    s.receiver = std::move(receiver);
    s.rate_mode = std::move(rate_mode);
    s.common_mcs = {std::move(xc), rc};
    s.private_mcs = {std::move(xp), rp};
    return s;
}

SchemeConfig sdma_scheme(std::string id, std::string precoder, std::string receiver,
                         std::string xp, double rp) {
    SchemeConfig s;
    s.id = std::move(id);
    s.family = "sdma";
    s.precoder = std::move(precoder);
    s.receiver = std::move(receiver);
    s.private_mcs = {std::move(xp), rp};
    return s;
}

SimulationConfig base_config(std::string scenario, ExperimentKind experiment) {
    SimulationConfig cfg;
    cfg.scenario = std::move(scenario);
    cfg.experiment = experiment;
    cfg.channel.n_tx = 4;
    cfg.channel.theta = kPi / 3.0;
    cfg.channel.delta = kPi / 9.0;
    cfg.channel.n_users = 2;
    cfg.seed = 1;
    return cfg;
}

// The five receiver designs on one matched transmission.
void add_receiver_sweep(SimulationConfig &cfg, double common_rate_cwic,
                        double common_rate_non_sic, double private_rate) {
    cfg.schemes.push_back(rsma_scheme("hard-cwic", "gaussian", "hard-cwic", "qpsk",
                                      common_rate_cwic, "qpsk", private_rate));
    cfg.schemes.push_back(rsma_scheme("soft-cwic1", "gaussian", "soft-cwic1", "qpsk",
                                      common_rate_cwic, "qpsk", private_rate));
    cfg.schemes.push_back(rsma_scheme("soft-cwic2", "gaussian", "soft-cwic2", "qpsk",
                                      common_rate_cwic, "qpsk", private_rate));
    cfg.schemes.push_back(rsma_scheme("joint-demapper", "gaussian", "joint-demapper", "qpsk",
                                      common_rate_non_sic, "qpsk", private_rate));
    cfg.schemes.push_back(rsma_scheme("soft-slic", "gaussian", "soft-slic", "qpsk",
                                      common_rate_non_sic, "qpsk", private_rate));
}

// The four precoder-design/receiver-class pairings evaluated in the BER
// campaigns: "finite" marks allocation by constellation-constrained rates,
// "gaussian" allocation by the Gaussian-signalling sum rate.
void add_design_comparison(SimulationConfig &cfg, const std::string &xc, const std::string &xp,
                           double sc1_finite_c, double sc1_finite_p, double jd_finite_c,
                           double jd_finite_p, double sc1_gauss_c, double sc1_gauss_p,
                           double jd_gauss_c, double jd_gauss_p) {
    cfg.schemes.push_back(rsma_scheme("soft-cwic1-finite", "cc-sic", "soft-cwic1", xc,
                                      sc1_finite_c, xp, sc1_finite_p));
    cfg.schemes.push_back(rsma_scheme("joint-demapper-finite", "cc-nonsic", "joint-demapper",
                                      xc, jd_finite_c, xp, jd_finite_p, "non-sic"));
    cfg.schemes.push_back(rsma_scheme("soft-cwic1-gaussian", "gaussian", "soft-cwic1", xc,
                                      sc1_gauss_c, xp, sc1_gauss_p));
    cfg.schemes.push_back(rsma_scheme("joint-demapper-gaussian", "gaussian", "joint-demapper",
                                      xc, jd_gauss_c, xp, jd_gauss_p, "non-sic"));
}

SimulationConfig make_smoke() {
    SimulationConfig cfg = base_config("smoke", ExperimentKind::ber);
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 64;
    cfg.n_blocks = 8;
    cfg.seed = 7;
    cfg.snr_db = {2.0, 6.0};
    cfg.schemes.push_back(
        rsma_scheme("rsma-soft-cwic1", "gaussian", "soft-cwic1", "qpsk", 0.54, "qpsk", 0.3));
    cfg.schemes.push_back(sdma_scheme("sdma-zf", "zf", "sdma-single-user", "qpsk", 0.75));
    return cfg;
}

SimulationConfig make_fig8a() {
    SimulationConfig cfg = base_config("fig8a", ExperimentKind::rates);
    cfg.channel.delta = kPi / 18.0;
    cfg.n_blocks = 200;
    cfg.snr_db = {5.0, 10.0, 15.0};
    cfg.schemes.push_back(
        rsma_scheme("rsma-finite-sic", "cc-sic", "soft-cwic1", "qpsk", 0.5, "qpsk", 0.5, "sic"));
    cfg.schemes.push_back(rsma_scheme("rsma-finite-nonsic", "cc-nonsic", "joint-demapper",
                                      "qpsk", 0.5, "qpsk", 0.5, "non-sic"));
    cfg.schemes.push_back(rsma_scheme("rsma-gaussian-sic", "gaussian", "soft-cwic1", "qpsk",
                                      0.5, "qpsk", 0.5, "sic"));
    cfg.schemes.push_back(rsma_scheme("rsma-gaussian-nonsic", "gaussian", "joint-demapper",
                                      "qpsk", 0.5, "qpsk", 0.5, "non-sic"));
    cfg.schemes.push_back(sdma_scheme("sdma-zf", "zf", "sdma-single-user", "qpsk", 0.5));
    cfg.schemes.push_back(sdma_scheme("sdma-mrt", "mrt", "sdma-joint", "qpsk", 0.5));
    return cfg;
}

SimulationConfig make_fig10(const std::string &name, double snr, const std::string &mod) {
    SimulationConfig cfg = base_config(name, ExperimentKind::tstar_cdf);
    cfg.n_blocks = 500;
    cfg.snr_db = {snr};
    cfg.schemes.push_back(
        rsma_scheme("objective-gaussian", "gaussian", "soft-cwic1", mod, 0.5, mod, 0.5));
    cfg.schemes.push_back(
        rsma_scheme("objective-cc-sic", "cc-sic", "soft-cwic1", mod, 0.5, mod, 0.5));
    cfg.schemes.push_back(rsma_scheme("objective-cc-nonsic", "cc-nonsic", "joint-demapper", mod,
                                      0.5, mod, 0.5, "non-sic"));
    return cfg;
}

SimulationConfig make_fig11a() {
    SimulationConfig cfg = base_config("fig11a", ExperimentKind::ber);
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 512;
    cfg.n_blocks = 2000;
    // The window brackets every receiver's private waterfall: the CWIC
    // family crosses 1e-3 near 8.5 dB, the joint de-mapper near 10 and the
    // soft SLIC near 10.5.
    cfg.snr_db = {8.0, 9.0, 10.0, 11.0};
    add_receiver_sweep(cfg, 0.54, 0.54, 0.3);
    return cfg;
}

SimulationConfig make_fig11b() {
    SimulationConfig cfg = base_config("fig11b", ExperimentKind::ber);
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 512;
    cfg.n_blocks = 2000;
    cfg.snr_db = {10.0};
    // One overloaded common rate for every receiver: the common stage fails
    // on a third to a half of the blocks here, which is exactly the regime
    // that separates hard cancellation from the soft variants.
    add_receiver_sweep(cfg, 0.74, 0.74, 0.3);
    return cfg;
}

SimulationConfig make_fig12a() {
    SimulationConfig cfg = base_config("fig12a", ExperimentKind::ber);
    cfg.channel.delta = kPi / 18.0;
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 512;
    cfg.n_blocks = 2000;
    cfg.snr_db = {4.0, 6.0, 8.0, 10.0, 12.0};
    add_design_comparison(cfg, "qpsk", "qpsk", 0.81, 0.345, 0.85, 0.325, 0.815, 0.3425, 0.82,
                          0.34);
    cfg.schemes.push_back(sdma_scheme("sdma-zf-qpsk", "zf", "sdma-single-user", "qpsk", 0.75));
    cfg.schemes.push_back(sdma_scheme("sdma-mrt-qpsk", "mrt", "sdma-joint", "qpsk", 0.75));
    return cfg;
}

SimulationConfig make_fig12b() {
    SimulationConfig cfg = base_config("fig12b", ExperimentKind::ber);
    cfg.channel.delta = kPi / 18.0;
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 512;
    cfg.n_blocks = 2000;
    cfg.snr_db = {10.0, 12.0, 14.0, 16.0, 18.0};
    add_design_comparison(cfg, "16qam", "16qam", 0.75, 0.375, 0.78, 0.36, 0.7, 0.4, 0.75,
                          0.375);
    cfg.schemes.push_back(
        sdma_scheme("sdma-zf-16qam", "zf", "sdma-single-user", "16qam", 0.75));
    cfg.schemes.push_back(sdma_scheme("sdma-mrt-16qam", "mrt", "sdma-joint", "16qam", 0.75));
    return cfg;
}

SimulationConfig make_fig12c() {
    SimulationConfig cfg = base_config("fig12c", ExperimentKind::ber);
    cfg.channel.delta = kPi / 18.0;
    cfg.fading = FadingKind::block;
    cfg.coherence = 32;
    cfg.block_symbols = 4096;
    cfg.n_blocks = 500;
    cfg.snr_db = {8.0, 10.0, 12.0, 14.0, 16.0};
    add_design_comparison(cfg, "qpsk", "qpsk", 0.88, 0.46, 0.94, 0.43, 0.8, 0.5, 0.8, 0.5);
    cfg.schemes.push_back(sdma_scheme("sdma-zf-qpsk", "zf", "sdma-single-user", "qpsk", 0.9));
    return cfg;
}

SimulationConfig make_fig12d() {
    SimulationConfig cfg = base_config("fig12d", ExperimentKind::ber);
    cfg.channel.n_users = 3;
    cfg.fading = FadingKind::block;
    cfg.coherence = 32;
    cfg.block_symbols = 4096;
    cfg.n_blocks = 500;
    cfg.snr_db = {10.0, 12.0, 14.0, 16.0, 18.0};
    add_design_comparison(cfg, "16qam", "qpsk", 0.78, 0.4, 0.855, 0.35, 0.66, 0.48, 0.69,
                          0.46);
    cfg.schemes.push_back(sdma_scheme("sdma-zf-qpsk", "zf", "sdma-single-user", "qpsk", 0.92));
    cfg.schemes.push_back(
        sdma_scheme("sdma-zf-16qam", "zf", "sdma-single-user", "16qam", 0.46));
    return cfg;
}

SimulationConfig make_fig13() {
    SimulationConfig cfg = base_config("fig13", ExperimentKind::ber);
    cfg.fading = FadingKind::fast;
    cfg.block_symbols = 512;
    cfg.n_blocks = 2000;
    cfg.snr_db = {4.0, 6.0, 8.0, 10.0, 12.0};
    // One RSMA/SDMA pair per angular spread; rates keep 3 bits/symbol.
    struct Case {
        const char *tag;
        double delta;
        double rc;
        double rp;
    };
    const Case cases[] = {{"pi18", kPi / 18.0, 0.8, 0.35},
                          {"pi9", kPi / 9.0, 0.7, 0.4},
                          {"pi6", kPi / 6.0, 0.6, 0.45}};
    for (const Case &c : cases) {
        SchemeConfig r = rsma_scheme(std::string("rsma-") + c.tag, "cc-sic", "soft-cwic1",
                                     "qpsk", c.rc, "qpsk", c.rp);
        r.delta = c.delta;
        cfg.schemes.push_back(std::move(r));
        SchemeConfig s = sdma_scheme(std::string("sdma-zf-") + c.tag, "zf",
                                     "sdma-single-user", "qpsk", 0.75);
        s.delta = c.delta;
        cfg.schemes.push_back(std::move(s));
    }
    return cfg;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"smoke",  "fig8a",  "fig10a", "fig10b", "fig10c", "fig11a",
            "fig11b", "fig12a", "fig12b", "fig12c", "fig12d", "fig13"};
}

SimulationConfig preset_config(const std::string &name) {
    if (name == "smoke") {
        return make_smoke();
    }
    if (name == "fig8a") {
        return make_fig8a();
    }
    if (name == "fig10a") {
        return make_fig10("fig10a", 5.0, "qpsk");
    }
    if (name == "fig10b") {
        return make_fig10("fig10b", 10.0, "qpsk");
    }
    if (name == "fig10c") {
        return make_fig10("fig10c", 10.0, "16qam");
    }
    if (name == "fig11a") {
        return make_fig11a();
    }
    if (name == "fig11b") {
        return make_fig11b();
    }
    if (name == "fig12a") {
        return make_fig12a();
    }
    if (name == "fig12b") {
        return make_fig12b();
    }
    if (name == "fig12c") {
        return make_fig12c();
    }
    if (name == "fig12d") {
        return make_fig12d();
    }
    if (name == "fig13") {
        return make_fig13();
    }
    throw std::invalid_argument("presets: unknown preset '" + name + "'");
}

} // namespace rsma
