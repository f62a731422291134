// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "passkit/experiments.hpp"

using namespace passkit;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string &name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str() const { return path.string(); }
};

ExperimentSpec spec_for(const std::string &id, const std::string &out) {
    ExperimentSpec spec;
    spec.id = id;
    spec.out_dir = out;
    spec.seed = 42;
    return spec;
}

} // namespace

TEST_CASE("experiment ids are stable") {
    const auto ids = list_experiments();
    CHECK(ids.size() == 9);
    CHECK_THROWS_AS(run_experiment(spec_for("bogus", ".")), Error);
}

TEST_CASE("scaling-law schema and checks") {
    TempDir dir("pk_test_scaling");
    ExperimentSpec spec = spec_for("scaling-law", dir.str());
    spec.params["m_list"] = "4,8,16";
    const RunResult res = run_experiment(spec);
    REQUIRE(res.csv_files.size() == 1);

    const CsvTable t = read_csv(res.csv_files[0]);
    CHECK(t.header == std::vector<std::string>{"M", "P_opt", "P_approx", "ratio"});
    CHECK(t.rows.size() == 3);

    const VerifyResult check = verify_csv(res.csv_files[0], "theorem1-5pct");
    CHECK(check.pass);

    // manifest records version, seed and tolerances
    const std::string manifest = slurp(res.manifest_path);
    CHECK(manifest.find("\"seed\": 42") != std::string::npos);
    CHECK(manifest.find("version") != std::string::npos);
    CHECK(manifest.find("tolerances") != std::string::npos);
}

TEST_CASE("determinism: same seed gives byte-identical CSVs") {
    TempDir a("pk_test_det_a"), b("pk_test_det_b"), c("pk_test_det_c");
    ExperimentSpec sa = spec_for("csi-nmse", a.str());
    sa.params["trials"] = "3";
    ExperimentSpec sb = spec_for("csi-nmse", b.str());
    sb.params["trials"] = "3";
    const RunResult ra = run_experiment(sa);
    const RunResult rb = run_experiment(sb);
    CHECK(slurp(ra.csv_files[0]) == slurp(rb.csv_files[0]));

    ExperimentSpec sc = spec_for("csi-nmse", c.str());
    sc.params["trials"] = "3";
    sc.seed = 43;
    const RunResult rc = run_experiment(sc);
    CHECK(slurp(ra.csv_files[0]) != slurp(rc.csv_files[0]));
}

TEST_CASE("outage experiment feeds the delta-b checks") {
    TempDir dir("pk_test_outage");
    ExperimentSpec spec = spec_for("outage", dir.str());
    spec.params["mc_trials"] = "20000";
    spec.params["dx_list"] = "5,10,20";
    const RunResult res = run_experiment(spec);

    std::string gap_csv;
    for (const auto &f : res.csv_files)
        if (f.find("outage_gap") != std::string::npos)
            gap_csv = f;
    REQUIRE(!gap_csv.empty());
    CHECK(verify_csv(gap_csv, "delta-b-positive").pass);
    CHECK(verify_csv(gap_csv, "delta-b-monotone").pass);
    CHECK_THROWS_AS(verify_csv(gap_csv, "no-such-check"), Error);
}

TEST_CASE("capacity experiment feeds the nesting check") {
    TempDir dir("pk_test_capacity");
    ExperimentSpec spec = spec_for("capacity-sp", dir.str());
    spec.params["alpha_points"] = "9";
    spec.params["single_pinch_grid"] = "201";
    const RunResult res = run_experiment(spec);
    const CsvTable t = read_csv(res.csv_files[0]);
    CHECK(t.header == std::vector<std::string>{"R1", "R2", "tag"});

    const VerifyResult check = verify_csv(res.csv_files[0], "nesting");
    CHECK(check.pass);
}

TEST_CASE("beam-train experiment emits the per-trial schema") {
    TempDir dir("pk_test_train");
    ExperimentSpec spec = spec_for("beam-train", dir.str());
    spec.params["trials"] = "2";
    spec.params["cells"] = "16";
    const RunResult res = run_experiment(spec);
    const CsvTable t = read_csv(res.csv_files[0]);
    CHECK(t.header ==
          std::vector<std::string>{"seed", "method", "overhead", "top1", "gain_ratio"});
    CHECK(t.rows.size() == 4); // exhaustive + hierarchical per trial
}

TEST_CASE("bundled scenarios are valid") {
    CHECK_NOTHROW(default_two_user_scenario().validate());
    CHECK_NOTHROW(default_multiuser_scenario().validate());
    CHECK(default_two_user_scenario().users.size() == 2);
    CHECK(default_multiuser_scenario().waveguides.size() == 2);
}
