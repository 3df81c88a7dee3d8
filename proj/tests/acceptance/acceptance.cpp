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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
// criterion fails. Thresholds are fixed here and never relaxed at runtime.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "gpedd/gpedd.hpp"
#include "test_util.hpp"

using namespace gpedd;
namespace fs = std::filesystem;
using gpedd::testing::C;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

// ---------------------------------------------------------------------------

Verdict normalization_invariant() {
    const int n = 7;
    const ProblemSpec prob = make_problem(n, 1.0);
    const auto lay = build_layout(n);
    double worst = 0.0;
    long states = 0;
    run_dd(DdProblem{prob, std::nullopt}, lay, local_ansatz(lay, 50), DdSchedule{3, 10}, true,
           [&](int, int, std::span<const C> psi) {
               ++states;
               worst = std::max(worst, std::abs(physical_norm2(psi, prob.grid.dx) - 1.0));
           });
    return {worst < 1e-12, "max |dx*sum|psi|^2 - 1| = " + sci(worst) + " over " +
                               std::to_string(states) + " states"};
}

Verdict gradient_exactness() {
    const int n = 4;
    const ProblemSpec prob = make_problem(n, 1.0);
    std::mt19937_64 rng(2024);
    double worst_global = 0.0;
    double worst_local = 0.0;
    const GlobalVqaProblem gp{prob, AnsatzSpec{n, 2}, std::nullopt};
    auto gf = [&](std::span<const double> th) { return global_cost(gp, th); };
    const auto lay = build_layout(n);
    const AnsatzSpec ls = local_ansatz(lay, 2);
    for (int t = 0; t < 10; ++t) {
        const RVector theta = gpedd::testing::random_real(gp.spec.num_params(), rng, 0.0, 2 * kPi);
        worst_global = std::max(worst_global,
                                gpedd::testing::rel_error(global_cost_gradient(gp, theta),
                                                          gpedd::testing::fd_gradient(gf, theta, 1e-6)));
        const Wavefunction psi = gpedd::testing::physically_normalized(
            gpedd::testing::random_complex(prob.grid.N, rng), prob.grid.dx);
        const int k = 1 + t % 3;
        const RVector tk = gpedd::testing::random_real(ls.num_params(), rng, 0.0, 2 * kPi);
        auto lf = [&](std::span<const double> th) { return local_cost(th, psi, lay, k, prob, ls); };
        worst_local = std::max(
            worst_local,
            gpedd::testing::rel_error(local_cost_and_gradient(tk, psi, lay, k, prob, ls).second,
                                      gpedd::testing::fd_gradient(lf, tk, 1e-6)));
    }
    return {worst_global < 1e-6 && worst_local < 1e-6,
            "max rel err global " + sci(worst_global) + ", local " + sci(worst_local)};
}

Verdict energy_oracle() {
    double worst_const = 0.0;
    for (int n = 3; n <= 8; ++n) {
        for (double kappa : {0.0, 1.0}) {
            const ProblemSpec prob = make_problem(n, kappa);
            const double expect = 1.0 + kappa / (4.0 * kPi);
            worst_const = std::max(worst_const,
                                   std::abs(energy(constant_state(prob.grid), prob) - expect));
        }
    }
    double worst_mode = 0.0;
    for (int n = 3; n <= 5; ++n) {
        const GridSpec g = make_grid(n);
        const long N = static_cast<long>(g.N);
        for (long l = -N / 2 + 1; l <= N / 2; ++l) {
            Wavefunction psi(g.N);
            for (std::size_t j = 0; j < g.N; ++j) {
                psi[j] = std::polar(1.0 / std::sqrt(2.0 * kPi), static_cast<double>(l) * g.nodes[j]);
            }
            worst_mode = std::max(worst_mode, std::abs(kinetic_energy(g, psi) -
                                                       0.5 * static_cast<double>(l * l)));
        }
    }
    return {worst_const < 1e-12 && worst_mode < 1e-10,
            "constant state err " + sci(worst_const) + ", Fourier mode kinetic err " +
                sci(worst_mode)};
}

Verdict newton_reference() {
    double worst_linear = 0.0;
    for (int n = 2; n <= 8; ++n) {
        const ProblemSpec prob = make_problem(n, 0.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
            gpedd::testing::closed_form_hamiltonian(prob));
        worst_linear = std::max(worst_linear,
                                std::abs(newton_ground_state(prob).energy - eig.eigenvalues()(0)));
    }
    double worst_residual = 0.0;
    double worst_bound = -1e300;
    for (int n = 3; n <= 8; ++n) {
        const auto r = newton_ground_state(make_problem(n, 1.0));
        worst_residual = std::max(worst_residual, r.residual_norm);
        worst_bound = std::max(worst_bound, r.energy - (1.0 + 1.0 / (4.0 * kPi)));
    }
    return {worst_linear < 1e-10 && worst_residual < 1e-12 && worst_bound <= 0.0,
            "kappa=0 vs dense " + sci(worst_linear) + ", kappa=1 residual " +
                sci(worst_residual) + ", E - (1 + 1/4pi) <= " + sci(worst_bound)};
}

Verdict layout_correctness() {
    std::string issue;
    for (int n = 3; n <= 12 && issue.empty(); ++n) {
        const auto lay = build_layout(n);
        const std::size_t N = std::size_t{1} << n;
        const long sign = n % 2 == 0 ? 1 : -1;
        const auto n12 = static_cast<std::size_t>((static_cast<long>(N / 2) + sign) / 3);
        const std::array<std::size_t, 3> expect{n12, n12, n12 - static_cast<std::size_t>(sign)};
        std::array<std::set<std::size_t>, 3> sets;
        std::set<std::size_t> all;
        for (int k = 0; k < 3; ++k) {
            const auto &s = lay.sub(k + 1);
            sets[static_cast<std::size_t>(k)] = {s.indices.begin(), s.indices.end()};
            all.insert(s.indices.begin(), s.indices.end());
            if (s.size() != N / 2 || sets[static_cast<std::size_t>(k)].size() != N / 2) {
                issue = "n=" + std::to_string(n) + " wrong subdomain size";
            }
        }
        if (all.size() != N) {
            issue = "n=" + std::to_string(n) + " cover incomplete";
        }
        for (std::size_t k = 0; k < 3; ++k) {
            std::size_t c = 0;
            for (auto i : sets[k]) {
                c += sets[(k + 1) % 3].count(i);
            }
            if (c != expect[k]) {
                issue = "n=" + std::to_string(n) + " overlap " + std::to_string(k + 1) + " = " +
                        std::to_string(c);
            }
        }
    }
    const auto l7 = build_layout(7);
    const auto l8 = build_layout(8);
    const bool examples = l7.overlaps == std::array<std::size_t, 3>{21, 21, 22} &&
                          l8.overlaps == std::array<std::size_t, 3>{43, 43, 42};
    return {issue.empty() && examples,
            issue.empty() ? "n=3..12 cover/size/overlaps ok; n=7 -> 21,21,22; n=8 -> 43,43,42"
                          : issue};
}

Verdict classical_monotonicity() {
    const int n = 7;
    const DdProblem problem{make_problem(n, 1.0), std::nullopt};
    const auto r = run_classical_dd(problem, build_layout(n), DdSchedule{5, 50});
    double worst = -1e300;
    double prev = r.initial_energy;
    for (const auto &row : r.trace) {
        worst = std::max(worst, row.energy - prev);
        prev = row.energy;
    }
    return {!r.trace.empty() && worst <= 1e-12,
            std::to_string(r.trace.size()) + " accepted updates, max(E_new - E_old) = " +
                sci(worst)};
}

Verdict dla_dimensions() {
    const std::array<std::size_t, 4> expect{15, 63, 255, 1023};
    std::string got;
    bool ok = true;
    for (int n = 2; n <= 5; ++n) {
        const auto dim = ansatz_dla(n).closure_dimension;
        ok = ok && dim == expect[static_cast<std::size_t>(n - 2)];
        got += (got.empty() ? "" : ",") + std::to_string(dim);
    }
    const double ratio = subdomain_dla_ratio(4);
    ok = ok && ratio == 255.0 / 63.0;
    return {ok, "dims " + got + "; ratio(n=4) = " + std::to_string(ratio)};
}

Verdict variance_decay() {
    std::vector<VarianceEstimate> est;
    for (int n = 4; n <= 7; ++n) {
        est.push_back(sample_cost_variance(n, 40, 200, 0, make_problem(n, 1.0)));
    }
    bool decreasing = true;
    std::string vars;
    std::string rel;
    for (std::size_t i = 0; i < est.size(); ++i) {
        if (i > 0 && !(est[i].variance < est[i - 1].variance)) {
            decreasing = false;
        }
        vars += (i ? "," : "") + sci(est[i].variance);
        rel += (i ? "," : "") + sci(est[i].variance / (est[i].mean * est[i].mean));
    }
    return {decreasing, "Var[C] n=4..7: " + vars + " (diagnostic Var/mean^2: " + rel + ")"};
}

double newton_energy(int n) { return newton_ground_state(make_problem(n, 1.0)).energy; }

double full_error(int n, int d, int iters) {
    const ProblemSpec prob = make_problem(n, 1.0);
    const GlobalVqaProblem p{prob, AnsatzSpec{n, d}, std::nullopt};
    OptimizerConfig cfg;
    cfg.max_iters = iters;
    const auto r = train_full_domain(p, ones_parameters(p.spec), cfg);
    return std::abs(r.opt.objective_final - newton_energy(n));
}

double dd_error(int n, int d_local, int sweeps, int budget) {
    const ProblemSpec prob = make_problem(n, 1.0);
    const auto lay = build_layout(n);
    const auto r = run_dd(DdProblem{prob, std::nullopt}, lay, local_ansatz(lay, d_local),
                          DdSchedule{sweeps, budget}, true);
    return std::abs(energy(r.psi, prob) - newton_energy(n));
}

struct SharedRuns {
    double dd7_half = -1.0;
};
SharedRuns shared;

Verdict matched_budget_ordering() {
    const int sweeps = budget_match(300, 50, kNumSubdomains, 8.0);
    const double f7 = full_error(7, 100, 300);
    shared.dd7_half = dd_error(7, 50, sweeps, 50);
    const double f8 = full_error(8, 200, 300);
    const double d8 = dd_error(8, 100, sweeps, 50);
    const bool a = f7 < 1e-2 && shared.dd7_half < 1e-2;
    const bool b = d8 < f8;
    return {a && b, "sweeps " + std::to_string(sweeps) + "; n=7 full " + sci(f7) + ", dd " +
                        sci(shared.dd7_half) + "; n=8 full " + sci(f8) + ", dd " + sci(d8)};
}

Verdict depth_ordering() {
    const double half = shared.dd7_half >= 0.0 ? shared.dd7_half : dd_error(7, 50, 16, 50);
    const double full = dd_error(7, 100, 16, 50);
    return {full <= half, "n=7 d_local=100 " + sci(full) + " vs d_local=50 " + sci(half)};
}

Verdict embed_fixed_point() {
    const int n = 5;
    const ProblemSpec prob = make_problem(n, 1.0);
    const auto lay = build_layout(n);
    std::mt19937_64 rng(11);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
        const Wavefunction psi = gpedd::testing::physically_normalized(
            gpedd::testing::random_complex(prob.grid.N, rng), prob.grid.dx);
        for (int k = 1; k <= 3; ++k) {
            const auto &sub = lay.sub(k);
            CVector phi(sub.size());
            double s = 0.0;
            for (std::size_t p = 0; p < sub.size(); ++p) {
                phi[p] = psi[sub.indices[p]];
                s += std::norm(phi[p]);
            }
            for (auto &v : phi) {
                v /= std::sqrt(s);
            }
            const Wavefunction out = embed(psi, phi, lay, k);
            for (std::size_t j = 0; j < psi.size(); ++j) {
                worst = std::max(worst, std::abs(out[j] - psi[j]));
            }
        }
    }
    return {worst < 1e-14, "max |embed(psi, phi) - psi| = " + sci(worst)};
}

int run_solver(const std::string &args) {
    const std::string cmd = std::string(SOLVER_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict reproducibility() {
    const fs::path root = fs::temp_directory_path() / "gpedd_acceptance_repro";
    fs::remove_all(root);
    fs::create_directories(root);
    const std::vector<std::pair<std::string, nlohmann::json>> configs{
        {"dd", {{"mode", "dd"}, {"n", 7}, {"d", 100}, {"sweeps", 6}, {"seed", 5}}},
        {"full", {{"mode", "full"}, {"n", 6}, {"d", 50}, {"max_full_iters", 150}, {"seed", 5}}},
        {"classical", {{"mode", "classical_dd"}, {"n", 7}, {"sweeps", 5}, {"seed", 5}}},
        {"variance", {{"mode", "variance"}, {"n", 5}, {"d", 10}, {"d_local", 5}, {"seed", 5}}}};
    std::size_t compared = 0;
    std::string issue;
    for (const auto &[name, j] : configs) {
        const fs::path cfg = root / (name + ".json");
        write_text_file(cfg, j.dump());
        for (const char *run : {"a", "b"}) {
            const int code = run_solver("run " + cfg.string() + " --output-dir " +
                                        (root / name / run).string());
            if (code != 0) {
                issue = name + " exited " + std::to_string(code);
            }
        }
        for (const auto &entry : fs::directory_iterator(root / name / "a")) {
            const auto ext = entry.path().extension();
            if (ext != ".csv" && ext != ".svg") {
                continue;
            }
            ++compared;
            const fs::path other = root / name / "b" / entry.path().filename();
            if (!fs::exists(other) || read_text_file(entry.path()) != read_text_file(other)) {
                issue = name + "/" + entry.path().filename().string() + " differs";
            }
        }
    }
    fs::remove_all(root);
    return {issue.empty() && compared > 0,
            issue.empty() ? std::to_string(compared) + " CSV/SVG files byte-identical across reruns"
                          : issue};
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 normalization invariant", normalization_invariant},
        {"2 gradient exactness", gradient_exactness},
        {"3 energy oracle", energy_oracle},
        {"4 Newton reference", newton_reference},
        {"5 layout correctness", layout_correctness},
        {"6 classical DD monotonicity", classical_monotonicity},
        {"7 DLA dimensions", dla_dimensions},
        {"8 cost variance decreasing in n", variance_decay},
        {"9 matched-budget error ordering", matched_budget_ordering},
        {"10 local depth ordering", depth_ordering},
        {"11 embedding fixed point", embed_fixed_point},
        {"12 byte-identical reruns", reproducibility},
    };
    int failures = 0;
    for (const auto &[name, check] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = check();
        } catch (const std::exception &e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %-34s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", name.c_str(),
                    v.detail.c_str(), secs);
        std::fflush(stdout);
        failures += v.pass ? 0 : 1;
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
