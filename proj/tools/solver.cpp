// Copyright 2026 The gpedd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// solver: command-line front end for the experiment runner.
//
//   solver run <config.json>... [--output-dir DIR] [--jobs N] [--seed S]
//   solver <mode> [--n N] [--d D] ... [--output-dir DIR]
//
// Diagnostics go to stderr at the level named by SOLVER_LOG
// (error | info | debug); results are files plus one line per run on stdout.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "gpedd/experiment.hpp"

namespace {

std::shared_ptr<spdlog::logger> make_logger() {
    auto logger = spdlog::stderr_color_mt("solver");
    logger->set_pattern("[%l] %v");
    const char *env = std::getenv("SOLVER_LOG");
    const std::string level = env != nullptr ? env : "error";
    if (level == "debug") {
        logger->set_level(spdlog::level::debug);
    } else if (level == "info") {
        logger->set_level(spdlog::level::info);
    } else {
        logger->set_level(spdlog::level::err);
    }
    return logger;
}

gpedd::Logger bridge(const std::shared_ptr<spdlog::logger> &logger, const std::string &tag) {
    return [logger, tag](gpedd::LogLevel level, const std::string &msg) {
        switch (level) {
        case gpedd::LogLevel::error:
            logger->error("{}{}", tag, msg);
            break;
        case gpedd::LogLevel::info:
            logger->info("{}{}", tag, msg);
            break;
        case gpedd::LogLevel::debug:
            logger->debug("{}{}", tag, msg);
            break;
        }
    };
}

struct Job {
    std::string name;
    gpedd::ExperimentConfig config;
};

std::mutex stdout_mutex;

int run_jobs(const std::vector<Job> &jobs, int num_threads,
             const std::shared_ptr<spdlog::logger> &logger) {
    std::vector<int> codes(jobs.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const std::string tag = jobs.size() > 1 ? "[" + jobs[i].name + "] " : "";
            const auto outcome = gpedd::run_experiment(jobs[i].config, bridge(logger, tag));
            codes[i] = outcome.exit_code;
            std::lock_guard lock(stdout_mutex);
            std::cout << (outcome.exit_code == 0 ? "ok " : "failed ") << jobs[i].config.output_dir
                      << "/summary.json\n";
        }
    };
    const int n = std::clamp(num_threads, 1, static_cast<int>(jobs.size()));
    {
        std::vector<std::jthread> pool;
        for (int t = 1; t < n; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }
    return *std::max_element(codes.begin(), codes.end());
}

// Inline flags for the per-mode subcommands; unset flags fall back to the
// config defaults.
struct InlineFlags {
    int n = 7;
    std::optional<int> d;
    std::optional<int> d_local;
    std::optional<double> kappa;
    std::optional<int> sweeps;
    std::optional<std::string> local_budget;
    std::optional<int> max_full_iters;
    std::optional<double> cost_ratio;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_dir;
    std::optional<bool> warm_start;
    std::optional<int> variance_samples;
    std::optional<int> variance_n_min;
    bool record_wall_time = false;
    std::optional<int> threads;

    nlohmann::json to_json(const std::string &mode) const {
        nlohmann::json j{{"mode", mode}, {"n", n}};
        auto put = [&j](const char *key, const auto &opt) {
            if (opt) {
                j[key] = *opt;
            }
        };
        put("d", d);
        put("d_local", d_local);
        put("kappa", kappa);
        put("sweeps", sweeps);
        put("max_full_iters", max_full_iters);
        put("cost_ratio", cost_ratio);
        put("seed", seed);
        put("output_dir", output_dir);
        put("warm_start", warm_start);
        put("variance_samples", variance_samples);
        put("variance_n_min", variance_n_min);
        put("threads", threads);
        if (local_budget) {
            if (*local_budget == "converge") {
                j["local_budget"] = "converge";
            } else {
                try {
                    j["local_budget"] = std::stoi(*local_budget);
                } catch (const std::exception &) {
                    throw gpedd::ConfigError("--local-budget must be an integer or 'converge'");
                }
            }
        }
        if (record_wall_time) {
            j["record_wall_time"] = true;
        }
        return j;
    }
};

void add_inline_flags(CLI::App *cmd, InlineFlags &f) {
    cmd->add_option("--n", f.n, "Grid qubit count");
    cmd->add_option("--d", f.d, "Full-domain circuit depth");
    cmd->add_option("--d-local", f.d_local, "Subdomain circuit depth (d/2 or d)");
    cmd->add_option("--kappa", f.kappa, "Interaction strength");
    cmd->add_option("--sweeps", f.sweeps, "Domain-decomposition sweeps");
    cmd->add_option("--local-budget", f.local_budget,
                    "BFGS iterations per subdomain update, or 'converge'");
    cmd->add_option("--max-full-iters", f.max_full_iters, "Full-domain BFGS iterations");
    cmd->add_option("--cost-ratio", f.cost_ratio, "Full vs local iteration cost ratio");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--output-dir", f.output_dir, "Output directory");
    cmd->add_option("--warm-start", f.warm_start, "Reuse subdomain parameters across sweeps");
    cmd->add_option("--variance-samples", f.variance_samples, "Samples per qubit count");
    cmd->add_option("--variance-n-min", f.variance_n_min, "Smallest qubit count of the scan");
    cmd->add_flag("--record-wall-time", f.record_wall_time, "Fill the wall_time_s CSV column");
    cmd->add_option("--threads", f.threads, "Threads for the variance sampler");
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Variational and classical ground-state solver with domain decomposition"};
    app.require_subcommand(1);

    std::vector<std::string> config_paths;
    std::optional<std::string> output_dir;
    int jobs = 1;
    std::optional<std::uint64_t> seed;
    auto *run = app.add_subcommand("run", "Run one or more JSON experiment configs");
    run->add_option("configs", config_paths, "Config files")->required()->check(CLI::ExistingFile);
    run->add_option("--output-dir", output_dir, "Override the output directory");
    run->add_option("--jobs", jobs, "Configs to run in parallel")->check(CLI::PositiveNumber);
    run->add_option("--seed", seed, "Override the seed");

    InlineFlags flags;
    std::vector<std::pair<std::string, CLI::App *>> mode_cmds;
    for (auto [mode, name] : gpedd::kModeNames) {
        auto *cmd = app.add_subcommand(std::string(name), "Run the " + std::string(name) +
                                                              " experiment from inline flags");
        add_inline_flags(cmd, flags);
        mode_cmds.emplace_back(std::string(name), cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : gpedd::kExitConfig;
    }

    auto logger = make_logger();
    std::vector<Job> job_list;
    try {
        if (run->parsed()) {
            for (const auto &path : config_paths) {
                Job job{std::filesystem::path(path).stem().string(), gpedd::load_config(path)};
                if (output_dir) {
                    job.config.output_dir =
                        config_paths.size() == 1
                            ? *output_dir
                            : (std::filesystem::path(*output_dir) / job.name).string();
                }
                if (seed) {
                    job.config.seed = *seed;
                }
                job_list.push_back(std::move(job));
            }
        } else {
            for (const auto &[name, cmd] : mode_cmds) {
                if (cmd->parsed()) {
                    job_list.push_back({name, gpedd::config_from_json(flags.to_json(name))});
                }
            }
        }
    } catch (const gpedd::ConfigError &e) {
        logger->error("{}", e.what());
        return gpedd::kExitConfig;
    }
    return run_jobs(job_list, jobs, logger);
}
