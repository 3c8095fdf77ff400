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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "rsma/presets.hpp"
#include "rsma/sim.hpp"

namespace {

struct RunOptions {
    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    int workers = 0;
    std::optional<std::uint64_t> seed;
};

void add_run_options(CLI::App *cmd, RunOptions &opt) {
    cmd->add_option("--config", opt.config_path, "simulation config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opt.out_path, "output records path")->required();
    cmd->add_option("--format", opt.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--workers", opt.workers, "worker thread count (0 = runtime default)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", opt.seed, "override the config seed");
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open config file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int execute(const RunOptions &opt, std::optional<rsma::ExperimentKind> forced) {
    rsma::SimulationConfig cfg = rsma::parse_config(read_file(opt.config_path));
    if (forced) {
        cfg.experiment = *forced;
    }
    if (opt.seed) {
        cfg.seed = *opt.seed;
    }
    if (opt.workers > 0) {
        omp_set_num_threads(opt.workers);
    }
    cfg.validate();
    std::vector<rsma::Record> records = rsma::run_experiment(cfg);
    rsma::OutputFormat fmt =
        opt.format == "json" ? rsma::OutputFormat::json : rsma::OutputFormat::csv;
    rsma::emit(records, opt.out_path, fmt);
    std::cout << records.size() << " records -> " << opt.out_path << "\n";
    return 0;
}

int run_preset(bool list, const std::string &name, const std::string &out_path) {
    if (list) {
        for (const std::string &n : rsma::preset_names()) {
            std::cout << n << "\n";
        }
        return 0;
    }
    if (name.empty()) {
        std::cerr << "preset: need --list or --name\n";
        return 1;
    }
    std::string text = rsma::config_to_json(rsma::preset_config(name));
    if (out_path.empty()) {
        std::cout << text;
        return 0;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write: " + out_path);
    }
    out << text;
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"rsma-linklab: link-level simulator for rate-splitting downlink"};
    app.require_subcommand(1);

    RunOptions run_opt;
    CLI::App *run = app.add_subcommand("run", "run the experiment named in the config");
    add_run_options(run, run_opt);

    RunOptions rates_opt;
    CLI::App *rates = app.add_subcommand("rates", "run ergodic rate curves");
    add_run_options(rates, rates_opt);

    RunOptions cdf_opt;
    CLI::App *cdf = app.add_subcommand("cdf", "run power-split CDF sampling");
    add_run_options(cdf, cdf_opt);

    RunOptions ber_opt;
    CLI::App *ber = app.add_subcommand("ber", "run coded BER curves");
    add_run_options(ber, ber_opt);

    bool preset_list = false;
    std::string preset_name;
    std::string preset_out;
    CLI::App *preset = app.add_subcommand("preset", "emit a ready-made config");
    preset->add_flag("--list", preset_list, "list preset names");
    preset->add_option("--name", preset_name, "preset to emit");
    preset->add_option("--out", preset_out, "write config here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return execute(run_opt, std::nullopt);
        }
        if (rates->parsed()) {
            return execute(rates_opt, rsma::ExperimentKind::rates);
        }
        if (cdf->parsed()) {
            return execute(cdf_opt, rsma::ExperimentKind::tstar_cdf);
        }
        if (ber->parsed()) {
            return execute(ber_opt, rsma::ExperimentKind::ber);
        }
        return run_preset(preset_list, preset_name, preset_out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
