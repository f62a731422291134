// SPDX-License-Identifier: Apache-2.0
//
// passkit command line: experiment runner, acceptance verifier, and direct
// access to the beamforming / CSI routines.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "passkit/beamforming.hpp"
#include "passkit/capacity.hpp"
#include "passkit/csi.hpp"
#include "passkit/experiments.hpp"
#include "passkit/rng.hpp"

using namespace passkit;
using nlohmann::json;

namespace {

Scenario load_scenario(const std::string &path, bool multiuser = false) {
    if (!path.empty())
        return scenario_from_file(path);
    return multiuser ? default_multiuser_scenario() : default_two_user_scenario();
}

void write_trace(const std::string &path, const std::vector<double> &trace) {
    std::ofstream out(path, std::ios::binary);
    out << "iteration,objective\n";
    for (size_t i = 0; i < trace.size(); ++i) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, trace[i]);
        out << buf;
    }
}

json positions_json(const std::vector<std::vector<double>> &x) {
    json out = json::array();
    for (const auto &xs : x)
        out.push_back(xs);
    return out;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"passkit: pinching-antenna system simulation toolkit"};
    app.require_subcommand(1);

    // ---- run ------------------------------------------------------------
    auto *run = app.add_subcommand("run", "run an experiment and emit CSV + manifest");
    ExperimentSpec spec;
    std::vector<std::string> kv;
    run->add_option("experiment", spec.id, "experiment id (see list-experiments)")
        ->required();
    run->add_option("--scenario", spec.scenario_path, "scenario config file")
        ->envname("PASSKIT_SCENARIO");
    run->add_option("--seed", spec.seed, "master seed")->envname("PASSKIT_SEED");
    run->add_option("--out", spec.out_dir, "output directory")->envname("PASSKIT_OUT");
    run->add_option("--threads", spec.threads, "worker threads")->envname("PASSKIT_THREADS");
    run->add_option("--param,-p", kv, "experiment parameter key=value");
    run->callback([&]() {
        for (const auto &item : kv) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw Error("--param expects key=value, got '" + item + "'");
            spec.params[item.substr(0, eq)] = item.substr(eq + 1);
        }
        const RunResult res = run_experiment(spec);
        for (const auto &f : res.csv_files)
            std::printf("wrote %s\n", f.c_str());
        std::printf("manifest %s (%.2f s)\n", res.manifest_path.c_str(), res.wall_seconds);
    });

    // ---- verify ----------------------------------------------------------
    auto *verify = app.add_subcommand("verify", "run an acceptance check on a CSV");
    std::string csv_path, check_id;
    verify->add_option("--csv", csv_path, "CSV produced by run")->required();
    verify->add_option("--check", check_id, "check id")->required();
    verify->callback([&]() {
        const VerifyResult res = verify_csv(csv_path, check_id);
        std::printf("%s %s: %s (margin %.6g)\n", res.pass ? "PASS" : "FAIL",
                    check_id.c_str(), res.detail.c_str(), res.margin);
        if (!res.pass)
            std::exit(1);
    });

    // ---- list-experiments -------------------------------------------------
    auto *list = app.add_subcommand("list-experiments", "list experiment and check ids");
    list->callback([&]() {
        std::printf("experiments:\n");
        for (const auto &id : list_experiments())
            std::printf("  %s\n", id.c_str());
        std::printf("checks:\n");
        for (const auto &id : list_checks())
            std::printf("  %s\n", id.c_str());
    });

    // ---- optimize ----------------------------------------------------------
    auto *opt = app.add_subcommand("optimize", "run a beamforming optimizer");
    opt->require_subcommand(1);
    std::string opt_scenario, opt_out = ".";
    int opt_pas = 4, opt_user = 0, opt_wg = 0, opt_rf = 1;
    std::string arch = "sub", protocol = "ws";
    opt->add_option("--scenario", opt_scenario)->envname("PASSKIT_SCENARIO");
    opt->add_option("--out", opt_out)->envname("PASSKIT_OUT");
    opt->add_option("--num-pas", opt_pas, "PAs per waveguide");
    opt->add_option("--user", opt_user);

    auto *single = opt->add_subcommand("single", "single-waveguide single-user search");
    single->fallthrough();
    single->add_option("--wg", opt_wg);
    single->callback([&]() {
        const Scenario s = load_scenario(opt_scenario);
        const SearchResult res = single_waveguide_optimize(s, opt_wg, opt_user, opt_pas);
        json out = {{"positions", res.x},
                    {"receive_power_w", res.power},
                    {"sweeps", res.sweeps}};
        std::ofstream(opt_out + "/optimize_single.json") << out.dump(2) << "\n";
        write_trace(opt_out + "/optimize_single_trace.csv", res.trace);
        std::printf("%s\n", out.dump(2).c_str());
    });

    auto *sumiso = opt->add_subcommand("su-miso", "joint transmit + pinching design");
    sumiso->fallthrough();
    sumiso->add_option("--arch", arch, "sub|full")
        ->check(CLI::IsMember({"sub", "full"}));
    sumiso->add_option("--num-rf", opt_rf, "RF chains (full architecture)");
    sumiso->callback([&]() {
        const Scenario s = load_scenario(opt_scenario, true);
        json out;
        if (arch == "sub") {
            const SubConnectedResult res = subconnected_optimize(s, opt_user, opt_pas);
            out = {{"arch", "sub"},
                   {"positions", positions_json(res.positions)},
                   {"receive_power_w", res.p_r}};
        } else {
            const FullyConnectedResult res =
                fullyconnected_optimize(s, opt_user, opt_pas, opt_rf);
            out = {{"arch", "full"},
                   {"num_rf", opt_rf},
                   {"positions", positions_json(res.positions)},
                   {"receive_power_w", res.p_r}};
            if (opt_rf > static_cast<int>(s.waveguides.size()))
                out["experimental"] = "more RF chains than waveguides";
        }
        std::ofstream(opt_out + "/optimize_su_miso.json") << out.dump(2) << "\n";
        std::printf("%s\n", out.dump(2).c_str());
    });

    auto *mu = opt->add_subcommand("mu", "multi-user protocol optimizer");
    mu->fallthrough();
    mu->add_option("--protocol", protocol, "ws|wd|wm")
        ->check(CLI::IsMember({"ws", "wd", "wm"}));
    mu->callback([&]() {
        const Scenario s = load_scenario(opt_scenario, true);
        const std::vector<double> weights(s.users.size(), 1.0);
        MuResult res;
        if (protocol == "ws")
            res = ws_wsr(s, weights, opt_pas);
        else if (protocol == "wd")
            res = wd_wsr(s, weights, opt_pas);
        else
            res = wm_wsr(s, weights, opt_pas);
        json out = {{"protocol", protocol},
                    {"wsr", res.wsr},
                    {"user_rates", res.user_rates},
                    {"beamformer", res.beamformer},
                    {"positions", positions_json(res.positions)}};
        if (!res.power_alloc.empty())
            out["power_alloc"] = res.power_alloc;
        std::ofstream(opt_out + "/optimize_mu_" + protocol + ".json") << out.dump(2) << "\n";
        write_trace(opt_out + "/optimize_mu_" + protocol + "_trace.csv", res.trace);
        std::printf("%s\n", out.dump(2).c_str());
    });

    // ---- csi ----------------------------------------------------------------
    auto *csi = app.add_subcommand("csi", "channel estimation and beam training");
    csi->require_subcommand(1);
    std::string csi_scenario, csi_out = ".", method = "seq";
    std::uint64_t csi_seed = 1;
    int csi_trials = 10;
    csi->add_option("--scenario", csi_scenario)->envname("PASSKIT_SCENARIO");
    csi->add_option("--out", csi_out)->envname("PASSKIT_OUT");
    csi->add_option("--seed", csi_seed)->envname("PASSKIT_SEED");
    csi->add_option("--trials", csi_trials);

    auto *estimate = csi->add_subcommand("estimate", "pilot-based channel estimation");
    estimate->fallthrough();
    estimate->add_option("--method", method, "seq|omp|param")
        ->check(CLI::IsMember({"seq", "omp", "param"}));
    estimate->callback([&]() {
        ExperimentSpec es;
        es.id = "csi-nmse";
        es.scenario_path = csi_scenario;
        es.out_dir = csi_out;
        es.seed = csi_seed;
        es.params["method"] = method;
        es.params["trials"] = std::to_string(csi_trials);
        const RunResult res = run_experiment(es);
        std::printf("wrote %s\n", res.csv_files.front().c_str());
    });

    std::string train_method = "exhaustive";
    auto *train = csi->add_subcommand("train", "beam training sweep");
    train->fallthrough();
    train->add_option("--method", train_method, "exhaustive|hierarchical")
        ->check(CLI::IsMember({"exhaustive", "hierarchical"}));
    train->callback([&]() {
        ExperimentSpec es;
        es.id = "beam-train";
        es.scenario_path = csi_scenario;
        es.out_dir = csi_out;
        es.seed = csi_seed;
        es.params["method"] = train_method;
        es.params["trials"] = std::to_string(csi_trials);
        const RunResult res = run_experiment(es);
        std::printf("wrote %s\n", res.csv_files.front().c_str());
    });

    try {
        CLI11_PARSE(app, argc, argv);
    } catch (const Error &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
