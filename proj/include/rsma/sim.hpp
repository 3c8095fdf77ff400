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

#ifndef RSMA_SIM_HPP
#define RSMA_SIM_HPP

#include "rsma/rates.hpp"
#include "rsma/receivers.hpp"

#include <optional>
#include <string>

namespace rsma {

enum class ExperimentKind { rates, tstar_cdf, ber };
enum class FadingKind { fast, block };
enum class OutputFormat { csv, json };

struct McsConfig {
    std::string constellation = "qpsk";
    double code_rate = 0.5;
};

// One transmission scheme plus the receiver evaluating it. family "rsma"
// uses the closed-form common direction with zero-forcing private
// directions and splits power by `allocation`; family "sdma" sends private
// streams only (t = 0) through `precoder` directions.
struct SchemeConfig {
    std::string id;
    std::string family = "rsma";        // rsma | sdma
    std::string allocation = "gaussian"; // rsma: gaussian | cc-sic | cc-nonsic
    std::string receiver = "soft-cwic1";
    std::string precoder = "zf";        // sdma: zf | mrt
    std::string rate_mode = "sic";      // rate curves: sic | non-sic
    McsConfig common_mcs;               // rsma only
    McsConfig private_mcs;
    std::optional<double> delta;        // per-scheme angular spread override
};

struct SimulationConfig {
    std::string scenario = "custom";
    ExperimentKind experiment = ExperimentKind::ber;
    OneRingSpec channel;
    FadingKind fading = FadingKind::fast;
    std::size_t coherence = 32;          // symbols, block fading only
    std::vector<double> snr_db = {10.0}; // SNR dB = 10 log10 P_T at noise_var 1
    double noise_var = 1.0;              // receiver noise power (1e-12 ~ noiseless)
    std::size_t block_symbols = 512;
    std::size_t n_blocks = 100;
    std::uint64_t seed = 1;
    std::vector<double> t_grid = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    std::string rate_method = "approx";  // rates experiment: approx | exact
    std::size_t entropy_draws = 10000;   // exact method only
    bool max_log = true;                 // de-mapper mode for BER runs
    std::vector<SchemeConfig> schemes;

    void validate() const;
};

// Parses the JSON mirror of SimulationConfig. Unknown keys anywhere are
// rejected.
SimulationConfig parse_config(const std::string &json_text);
std::string config_to_json(const SimulationConfig &cfg);

struct Record {
    std::string scheme;
    double snr_db = 0.0;
    std::string stream; // common | private | aggregate
    std::string metric;
    double value = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

bool operator==(const Record &a, const Record &b);

std::vector<Record> run_rate_curves(const SimulationConfig &cfg);
std::vector<Record> run_tstar_cdf(const SimulationConfig &cfg);
std::vector<Record> run_ber(const SimulationConfig &cfg);
std::vector<Record> run_experiment(const SimulationConfig &cfg); // dispatch on cfg.experiment

// Writes records sorted by (scheme, snr_db, stream, metric), stable within
// equal keys. CSV starts with the exact header
// `scheme,snr_db,stream,metric,value,trials,seed`; floats use 9 significant
// digits. Throws std::invalid_argument on empty records, std::runtime_error
// with the path on I/O failure.
void emit(const std::vector<Record> &records, const std::string &path, OutputFormat format);

std::vector<Record> read_records_json(const std::string &path);

} // namespace rsma

#endif
