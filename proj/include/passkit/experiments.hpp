// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "passkit/geometry.hpp"

namespace passkit {

// Experiment harness: scenario configs in, figure-reproduction CSVs out.
// Every run is deterministic given its seed; CSVs are written with '.'
// decimals, LF endings and %.17g doubles so reruns are byte-identical.

struct ExperimentSpec {
    std::string id;
    std::string scenario_path; // empty = bundled default scenario
    std::string out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 1;
    std::map<std::string, std::string> params;
};

struct RunResult {
    std::vector<std::string> csv_files;
    std::string manifest_path;
    double wall_seconds = 0.0;
};

std::vector<std::string> list_experiments();

RunResult run_experiment(const ExperimentSpec &spec);

struct VerifyResult {
    bool pass = false;
    double margin = 0.0; // distance to the threshold (negative = violated)
    std::string detail;
};

std::vector<std::string> list_checks();

/// Run an acceptance check against a CSV produced by run_experiment.
VerifyResult verify_csv(const std::string &csv_path, const std::string &check_id);

// Bundled desk scenarios (used when no scenario file is given).
Scenario default_two_user_scenario();
Scenario default_multiuser_scenario();

// Minimal CSV table, shared by the harness and the verifier.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string &name) const;
    double number(size_t row, int col) const;
};
CsvTable read_csv(const std::string &path);

} // namespace passkit
