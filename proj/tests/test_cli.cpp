// Copyright 2026 The nlg Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
};

Result run(const std::string &args) {
    std::string cmd = std::string(NLG_CLI_PATH) + " " + args + " 2>&1";
    FILE *p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string data(const std::string &name) {
    return std::string(NLG_DATA_DIR) + "/" + name;
}

fs::path scratch(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("nlg_cli_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST(Cli, ClassicalValueSmallGraphs) {
    auto r3 = run("classical-value --graph " + data("k3.json") + " --colors 3");
    EXPECT_EQ(r3.code, 0);
    EXPECT_EQ(r3.out, "1\n");
    auto r2 = run("classical-value --graph " + data("k3.json") + " --colors 2");
    EXPECT_EQ(r2.code, 0);
    EXPECT_EQ(r2.out.rfind("7/9", 0), 0u) << r2.out;
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("no-such-command").code, 1);
    EXPECT_EQ(run("classical-value --colors").code, 1);
    auto dir = scratch("exit");
    std::ofstream(dir / "big.json") << R"({"name": "k16", "n": 16, "edges": [[0,1]]})";
    EXPECT_EQ(run("classical-value --graph " + (dir / "big.json").string() + " --colors 4").code, 2);
    std::ofstream(dir / "bad.json") << R"({"name": "x", "n": 3, "edges": [[0,7]]})";
    EXPECT_EQ(run("classical-value --graph " + (dir / "bad.json").string()).code, 3);
    std::ofstream(dir / "partial.jsonl") << R"({"label": "v0", "kind": "vertex", "shots": 1, "counts": {"0000": 1}})"
                                         << "\n";
    auto partial = run("analyze --counts " + (dir / "partial.jsonl").string());
    EXPECT_EQ(partial.code, 3);
    EXPECT_NE(partial.out.find("missing circuits"), std::string::npos) << partial.out;
}

TEST(Cli, IdealRunAndDeterminism) {
    auto a = scratch("run_a"), b = scratch("run_b");
    std::string common = "run --preset ideal --shots 400 --seed 11 --folds 2";
    ASSERT_EQ(run(common + " --out-dir " + a.string()).code, 0);
    ASSERT_EQ(run(common + " --out-dir " + b.string()).code, 0);
    for (const char *f : {"params.json", "circuits.json", "counts.jsonl", "report.json", "frontier.csv", "pbr.json"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    auto report = nlohmann::json::parse(slurp(a / "report.json"));
    EXPECT_GE(report["raw"]["omega"].get<double>(), 0.9995);
    EXPECT_EQ(report["meta"]["seed"], 11);
    auto pbr = nlohmann::json::parse(slurp(a / "pbr.json"));
    EXPECT_EQ(pbr["min_p_u"].get<double>(), 1.0);
}

TEST(Cli, StagewisePipelineMatchesFiles) {
    auto dir = scratch("stages");
    std::string p = (dir / "params.json").string(), c = (dir / "circuits.json").string(),
                k = (dir / "counts.jsonl").string(), r = (dir / "report.json").string();
    ASSERT_EQ(run("strategy-fit --restarts 4 --out " + p).code, 0);
    ASSERT_EQ(run("circuits --params " + p + " --out " + c).code, 0);
    ASSERT_EQ(run("simulate --circuits " + c + " --preset ideal --shots 200 --out " + k).code, 0);
    auto an = run("analyze --counts " + k + " --calibration-preset blue --out " + r);
    ASSERT_EQ(an.code, 0) << an.out;
    auto report = nlohmann::json::parse(slurp(r));
    EXPECT_EQ(report["raw"]["data"], "raw");
    EXPECT_EQ(report["spam_corrected"]["data"], "spam_corrected");
    EXPECT_TRUE(report["spam_corrected"]["bound_violated"].is_null());
}
