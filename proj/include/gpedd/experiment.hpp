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

/**
 * @file experiment.hpp
 * Experiment orchestration for every mode. Each run writes into its own
 * output directory and always leaves a summary.json behind.
 */
#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"
#include "dla.hpp"
#include "domain_decomposition.hpp"
#include "io.hpp"
#include "reference_newton.hpp"
#include "spectral_grid.hpp"
#include "vqa_global.hpp"

namespace gpedd {

enum class LogLevel { error = 0, info = 1, debug = 2 };

using Logger = std::function<void(LogLevel, const std::string &)>;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;
inline constexpr int kExitIo = 4;

inline constexpr double kNewtonTol = 1e-12;
inline constexpr int kNewtonMaxIters = 100;

struct RunOutcome {
    int exit_code = kExitOk;
    nlohmann::json summary;
};

namespace detail {

inline nlohmann::json json_number(double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

/// Final-state figures of merit of one training run.
struct RunFigures {
    double final_energy = 0.0;
    double energy_error = 0.0;
    double l2_error = 0.0;
    long iterations = 0;
    std::vector<std::string> terminations;

    [[nodiscard]] nlohmann::json to_json() const {
        return {{"final_energy", json_number(final_energy)},
                {"energy_error", json_number(energy_error)},
                {"l2_error", json_number(l2_error)},
                {"iterations", iterations},
                {"terminations", terminations}};
    }
};

inline RunFigures figures(const Wavefunction &psi, const ProblemSpec &prob,
                          const Reference &ref) {
    RunFigures f;
    f.final_energy = energy(psi, prob);
    f.energy_error = std::abs(f.final_energy - ref.energy);
    f.l2_error = l2_error(psi, ref.psi);
    return f;
}

class Experiment {
  public:
    Experiment(ExperimentConfig cfg, Logger log) : cfg_(std::move(cfg)), log_(std::move(log)) {
        out_ = cfg_.output_dir;
    }

    void run(nlohmann::json &summary) {
        std::error_code ec;
        std::filesystem::create_directories(out_, ec);
        if (ec) {
            throw IoError("cannot create output directory " + out_.string() + ": " +
                          ec.message());
        }
        switch (cfg_.mode) {
        case Mode::newton:
            run_newton(summary);
            break;
        case Mode::full:
            run_full(summary);
            break;
        case Mode::dd:
            run_dd_mode(summary, false);
            break;
        case Mode::classical_dd:
            run_dd_mode(summary, true);
            break;
        case Mode::compare:
            run_compare(summary);
            break;
        case Mode::dla:
            run_dla(summary);
            break;
        case Mode::variance:
            run_variance(summary);
            break;
        }
    }

    [[nodiscard]] const std::filesystem::path &output_dir() const { return out_; }

  private:
    void info(const std::string &msg) const {
        if (log_) {
            log_(LogLevel::info, msg);
        }
    }
    void debug(const std::string &msg) const {
        if (log_) {
            log_(LogLevel::debug, msg);
        }
    }

    [[nodiscard]] ProblemSpec problem() const { return make_problem(cfg_.n, cfg_.kappa); }

    void write_json(const std::string &name, const nlohmann::json &j) const {
        write_text_file(out_ / name, j.dump(2) + "\n");
    }

    // Wall time is kept out of the CSV unless requested so reruns are byte-identical.
    void write_trace(const std::string &name, TrainingTrace trace) const {
        if (trace.empty()) {
            info("trace " + name + " is empty; not written");
            return;
        }
        if (!cfg_.record_wall_time) {
            for (auto &r : trace) {
                r.wall_time_s = 0.0;
            }
        }
        emit_trace(trace, out_ / name);
    }

    void write_plots(const std::vector<PlotSeries> &series, const std::string &suffix) const {
        for (const auto &s : series) {
            if (s.trace->empty()) {
                return;
            }
        }
        for (PlotKind k : {PlotKind::energy_error, PlotKind::l2_error, PlotKind::rel_change}) {
            emit_plot(series, k, out_ / (to_string(k) + suffix + ".svg"));
        }
    }

    static void write_sweeps(const std::filesystem::path &path, const DdResult &res,
                             const Reference &ref) {
        std::string text = "sweep,energy,energy_error\n";
        for (std::size_t s = 0; s < res.sweep_energies.size(); ++s) {
            const double e = res.sweep_energies[s];
            text += std::to_string(s) + ',' + format_double(e) + ',' +
                    format_double(std::abs(e - ref.energy)) + '\n';
        }
        write_text_file(path, text);
    }

    Reference reference(const ProblemSpec &prob, nlohmann::json &summary) const {
        info("computing Newton reference (n=" + std::to_string(cfg_.n) + ")");
        const NewtonResult nr = newton_ground_state(prob, kNewtonTol, kNewtonMaxIters);
        summary["e_newton"] = nr.energy;
        summary["newton_residual"] = nr.residual_norm;
        debug("E_Newton = " + format_double(nr.energy));
        return Reference{nr.energy, nr.psi_ref};
    }

    void run_newton(nlohmann::json &summary) const {
        const ProblemSpec prob = problem();
        const NewtonResult nr = newton_ground_state(prob, kNewtonTol, kNewtonMaxIters);
        summary["e_newton"] = nr.energy;
        summary["final_energy"] = nr.energy;
        summary["energy_error"] = 0.0;
        summary["l2_error"] = 0.0;
        summary["total_iterations"] = nr.iterations;
        nlohmann::json j{{"n", cfg_.n},
                         {"kappa", cfg_.kappa},
                         {"energy", nr.energy},
                         {"lambda", nr.lambda},
                         {"residual_norm", nr.residual_norm},
                         {"iterations", nr.iterations},
                         {"residual_history", nr.residual_history}};
        write_json("newton.json", j);
        std::string text = "j,x,psi\n";
        for (std::size_t i = 0; i < prob.grid.N; ++i) {
            text += std::to_string(i) + ',' + format_double(prob.grid.nodes[i]) + ',' +
                    format_double(nr.psi_ref[i].real()) + '\n';
        }
        write_text_file(out_ / "newton_state.csv", text);
    }

    FullDomainResult full_run(const ProblemSpec &prob, const Reference &ref) const {
        const GlobalVqaProblem p{prob, AnsatzSpec{cfg_.n, cfg_.d}, ref};
        OptimizerConfig oc;
        oc.max_iters = cfg_.max_full_iters;
        info("full-domain training: n=" + std::to_string(cfg_.n) + " d=" + std::to_string(cfg_.d) +
             " params=" + std::to_string(p.spec.num_params()));
        return train_full_domain(p, ones_parameters(p.spec), oc);
    }

    DdResult dd_run(const ProblemSpec &prob, const Reference &ref, int sweeps,
                    bool classical) const {
        const DdProblem p{prob, ref};
        const SubdomainLayout layout = build_layout(cfg_.n);
        const DdSchedule schedule{sweeps, cfg_.local_budget};
        info(std::string(classical ? "classical" : "VQA") +
             " domain decomposition: n=" + std::to_string(cfg_.n) +
             " sweeps=" + std::to_string(sweeps) +
             (classical ? std::string() : " d_local=" + std::to_string(cfg_.d_local)));
        if (classical) {
            return run_classical_dd(p, layout, schedule);
        }
        return run_dd(p, layout, local_ansatz(layout, cfg_.d_local), schedule, cfg_.warm_start);
    }

    static std::vector<std::string> names(const std::vector<Termination> &ts) {
        std::vector<std::string> out;
        for (auto t : ts) {
            out.push_back(to_string(t));
        }
        return out;
    }

    static void fill_summary(nlohmann::json &summary, const RunFigures &f) {
        summary["final_energy"] = json_number(f.final_energy);
        summary["energy_error"] = json_number(f.energy_error);
        summary["l2_error"] = json_number(f.l2_error);
        summary["total_iterations"] = f.iterations;
        summary["terminations"] = f.terminations;
    }

    void run_full(nlohmann::json &summary) const {
        const ProblemSpec prob = problem();
        const Reference ref = reference(prob, summary);
        const FullDomainResult r = full_run(prob, ref);
        RunFigures f = figures(r.psi_final, prob, ref);
        f.iterations = r.opt.iterations_run;
        f.terminations = {to_string(r.opt.termination_reason)};
        fill_summary(summary, f);
        write_trace("trace_full.csv", r.trace);
        write_plots({{"full n=" + std::to_string(cfg_.n), &r.trace}}, "_full");
    }

    void run_dd_mode(nlohmann::json &summary, bool classical) const {
        const ProblemSpec prob = problem();
        const Reference ref = reference(prob, summary);
        const DdResult r = dd_run(prob, ref, cfg_.sweeps, classical);
        RunFigures f = figures(r.psi, prob, ref);
        f.iterations = r.local_iterations;
        f.terminations = names(r.terminations);
        fill_summary(summary, f);
        summary["sweep_energies"] = r.sweep_energies;
        const std::string tag = classical ? "classical_dd" : "dd";
        write_trace("trace_" + tag + ".csv", r.trace);
        write_sweeps(out_ / ("sweeps_" + tag + ".csv"), r, ref);
        write_plots({{tag + " n=" + std::to_string(cfg_.n), &r.trace}}, "_" + tag);
    }

    void run_compare(nlohmann::json &summary) const {
        const ProblemSpec prob = problem();
        const Reference ref = reference(prob, summary);
        const int sweeps = budget_match(cfg_.max_full_iters, *cfg_.local_budget,
                                        kNumSubdomains, cfg_.cost_ratio);
        const FullDomainResult full = full_run(prob, ref);
        const DdResult dd = dd_run(prob, ref, sweeps, false);
        RunFigures ff = figures(full.psi_final, prob, ref);
        ff.iterations = full.opt.iterations_run;
        ff.terminations = {to_string(full.opt.termination_reason)};
        RunFigures fd = figures(dd.psi, prob, ref);
        fd.iterations = dd.local_iterations;
        fd.terminations = names(dd.terminations);
        nlohmann::json j{{"n", cfg_.n},
                         {"kappa", cfg_.kappa},
                         {"e_newton", ref.energy},
                         {"full_iters", cfg_.max_full_iters},
                         {"sweeps", sweeps},
                         {"local_budget", *cfg_.local_budget},
                         {"cost_ratio", cfg_.cost_ratio},
                         {"full", ff.to_json()},
                         {"dd", fd.to_json()}};
        write_json("compare.json", j);
        summary["sweeps"] = sweeps;
        summary["full"] = ff.to_json();
        summary["dd"] = fd.to_json();
        RunFigures total = fd;
        total.iterations = ff.iterations + fd.iterations;
        total.terminations.insert(total.terminations.begin(), ff.terminations.front());
        summary["total_iterations"] = total.iterations;
        summary["terminations"] = total.terminations;
        write_trace("trace_full.csv", full.trace);
        write_trace("trace_dd.csv", dd.trace);
        write_sweeps(out_ / "sweeps_dd.csv", dd, ref);
        write_plots({{"full", &full.trace}, {"dd", &dd.trace}}, "_compare");
    }

    void run_dla(nlohmann::json &summary) const {
        info("Lie closure of the ansatz generators, n=" + std::to_string(cfg_.n));
        const DlaReport rep = ansatz_dla(cfg_.n);
        nlohmann::json j{{"n", rep.n},
                         {"generator_count", rep.generator_count},
                         {"closure_dimension", rep.closure_dimension},
                         {"closed_after_rounds", rep.closed_after_rounds},
                         {"su_dimension", (std::uint64_t{1} << (2 * cfg_.n)) - 1}};
        if (cfg_.n >= 3) {
            j["subdomain_dimension"] = ansatz_dla(cfg_.n - 1).closure_dimension;
            j["subdomain_ratio"] = subdomain_dla_ratio(cfg_.n);
        }
        write_json("dla.json", j);
        summary["closure_dimension"] = rep.closure_dimension;
    }

    void run_variance(nlohmann::json &summary) const {
        std::string text = "n,d,samples,mean,variance\n";
        nlohmann::json rows = nlohmann::json::array();
        for (int n = cfg_.variance_n_min; n <= cfg_.n; ++n) {
            info("cost variance n=" + std::to_string(n));
            const ProblemSpec prob = make_problem(n, cfg_.kappa);
            const auto est = sample_cost_variance(n, cfg_.d, static_cast<std::size_t>(cfg_.variance_samples),
                                                  cfg_.seed, prob,
                                                  static_cast<unsigned>(cfg_.threads));
            text += std::to_string(n) + ',' + std::to_string(cfg_.d) + ',' +
                    std::to_string(est.samples) + ',' + format_double(est.mean) + ',' +
                    format_double(est.variance) + '\n';
            rows.push_back({{"n", n},
                            {"d", cfg_.d},
                            {"samples", est.samples},
                            {"mean", est.mean},
                            {"variance", est.variance}});
        }
        write_text_file(out_ / "variance.csv", text);
        write_json("variance.json", {{"seed", cfg_.seed}, {"rows", rows}});
        summary["variance"] = rows;
    }

    ExperimentConfig cfg_;
    Logger log_;
    std::filesystem::path out_;
};

} // namespace detail

/**
 * @brief Execute one configured experiment.
 *
 * Exit codes: 0 success, 3 solver failure, 4 I/O failure. summary.json is
 * written in every case where the output directory is usable.
 */
inline RunOutcome run_experiment(const ExperimentConfig &cfg, const Logger &log = {}) {
    validate(cfg);
    RunOutcome out;
    nlohmann::json &summary = out.summary;
    summary["config"] = config_to_json(cfg);
    summary["status"] = "ok";
    const auto t0 = std::chrono::steady_clock::now();
    detail::Experiment exp(cfg, log);
    try {
        exp.run(summary);
    } catch (const IoError &e) {
        summary["status"] = "failed";
        summary["error"] = e.what();
        out.exit_code = kExitIo;
    } catch (const std::exception &e) {
        summary["status"] = "failed";
        summary["error"] = e.what();
        out.exit_code = kExitSolver;
    }
    summary["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (out.exit_code != kExitOk && log) {
        log(LogLevel::error, summary["error"].get<std::string>());
    }
    try {
        std::filesystem::create_directories(exp.output_dir());
        write_text_file(exp.output_dir() / "summary.json", summary.dump(2) + "\n");
    } catch (const std::exception &e) {
        if (log) {
            log(LogLevel::error, std::string("could not write summary.json: ") + e.what());
        }
        out.exit_code = kExitIo;
    }
    return out;
}

} // namespace gpedd
