// Copyright 2026 The procval Authors
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

#include "cli.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unistd.h>

#include "procval/gallery.hpp"
#include "procval/io_format.hpp"
#include "procval/oracle.hpp"

using namespace procval;
namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("procval_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string &name) const { return (dir_ / name).string(); }

    std::string fixture(const std::string &name) {
        const std::string p = path(name + ".procmat.json");
        if (!fs::exists(p)) EXPECT_EQ(run({"gallery", "export", name, "-o", p}).code, 0);
        return p;
    }

    std::string write(const std::string &name, const std::string &text) {
        const std::string p = path(name);
        std::ofstream(p) << text;
        return p;
    }

    fs::path dir_;
};

std::string without_metadata(const std::string &text) {
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.find("\"metadata\"") != std::string::npos) continue;
        out += line + "\n";
    }
    // The line before metadata carries a trailing comma.
    const auto pos = out.rfind("  },\n}");
    if (pos != std::string::npos) out.replace(pos, 6, "  }\n}");
    return out;
}

}  // namespace

TEST_F(Cli, validate_exit_codes_for_every_fixture) {
    for (const GalleryEntry &e : gallery()) {
        const Result r = run({"validate", fixture(e.name)});
        EXPECT_EQ(r.code, e.expected.valid ? 0 : 1) << e.name << "\n" << r.out << r.err;
        EXPECT_NE(r.out.find(e.expected.valid ? "verdict: VALID" : "verdict: INVALID"), std::string::npos) << e.name;
    }
}

TEST_F(Cli, validate_json_report) {
    const Result r = run({"validate", fixture("eq3-squared-d2"), "--json"});
    EXPECT_EQ(r.code, 1);
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], false);
    EXPECT_EQ(j["exit_code"], 1);
    EXPECT_EQ(j["psd"]["ok"], true);
    ASSERT_EQ(j["terms"]["forbidden"].size(), 2u);
    EXPECT_EQ(j["terms"]["forbidden"][0]["indices"], json({0, 3, 3, 0, 3, 0, 0, 3}));
    EXPECT_EQ(j["terms"]["forbidden"][0]["type"], "a1a2b1b2");
    EXPECT_DOUBLE_EQ(j["terms"]["forbidden"][0]["coeff"].get<double>(), 0.015625);
}

TEST_F(Cli, decompose_lists_terms) {
    const Result r = run({"decompose", fixture("eq3-d2")});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("3 terms"), std::string::npos);
    EXPECT_NE(r.out.find("(0,3,3,0) 0.125 x2y1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("(3,0,0,3) 0.125 x1y2"), std::string::npos) << r.out;
    const json j = json::parse(run({"decompose", fixture("eq3-d2"), "--json", "--tol", "0.2"}).out);
    ASSERT_EQ(j["terms"].size(), 1u);
    EXPECT_EQ(j["terms"][0]["type"], "trivial");
}

TEST_F(Cli, product_of_eq3_with_itself) {
    const std::string out_file = path("sq.procmat.json");
    const Result r = run({"product", fixture("eq3-d2"), fixture("eq3-d2"), "--pairing", "X:X=A,Y:Y=B", "-o", out_file});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("blocking pairs: 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("A:(2,1) B:(1,2)"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("direct check: INVALID (agrees)"), std::string::npos) << r.out;
    EXPECT_EQ(run({"validate", out_file}).code, 1);

    const json j = json::parse(
        run({"product", fixture("eq3-d2"), fixture("eq3-d2"), "--pairing", "X:X=A,Y:Y=B", "--json"}).out);
    EXPECT_EQ(j["verdict"], false);
    EXPECT_EQ(j["corollary_invalid"], true);
    EXPECT_EQ(j["direct_verdict"], false);
    ASSERT_EQ(j["blocking_pairs"].size(), 2u);
    EXPECT_EQ(j["blocking_pairs"][0]["cases"][0], json({{"party", "A"}, {"w", "2"}, {"z", "1"}}));
    EXPECT_EQ(j["blocking_pairs"][0]["combined_type"], "a1a2b1b2");
}

TEST_F(Cli, product_exit_codes) {
    EXPECT_EQ(run({"product", fixture("oneway-xy-d2"), fixture("oneway-xy-d2")}).code, 0);
    EXPECT_EQ(run({"product", fixture("oneway-xy-d2"), fixture("oneway-yx-d2")}).code, 1);
    // Invalid input factor: exit 1 even without a blocking pair.
    EXPECT_EQ(run({"product", fixture("eq3-squared-d2"), fixture("state-bell-d2")}).code, 1);
    EXPECT_EQ(run({"product", fixture("eq3-d2"), fixture("eq3-d2"), "--pairing", "X:Q"}).code, 2);
    const Result skipped = run({"product", fixture("eq3-d2"), fixture("eq3-d2"), "--max-direct-dim", "16"});
    EXPECT_NE(skipped.out.find("direct check: skipped"), std::string::npos);
}

TEST_F(Cli, oracle_reports) {
    EXPECT_EQ(run({"oracle", fixture("eq3-d2"), "--samples", "20"}).code, 0);
    const Result bad = run({"oracle", fixture("eq3-squared-d2"), "--samples", "0"});
    EXPECT_EQ(bad.code, 1);
    EXPECT_NE(bad.out.find("A=route(1,0) B=route(1,0)"), std::string::npos) << bad.out;
    const json j = json::parse(run({"oracle", fixture("eq3-squared-d2"), "--json", "--samples", "5", "--seed", "9"}).out);
    EXPECT_EQ(j["seed"], 9);
    EXPECT_EQ(j["normalized"], false);
    EXPECT_NEAR(j["max_deviation"].get<double>(), 0.5, 1e-12);
    EXPECT_EQ(j["witness"].size(), 2u);
}

TEST_F(Cli, oracle_seed_sources) {
    const std::string f = fixture("state-bell-d2");
    const Result a = run({"oracle", f, "--samples", "10", "--seed", "17"});
    const Result b = run({"oracle", f, "--samples", "10", "--seed", "17"});
    EXPECT_EQ(a.out, b.out);
    ::setenv("PROCVAL_SEED", "17", 1);
    const Result env = run({"oracle", f, "--samples", "10"});
    ::unsetenv("PROCVAL_SEED");
    EXPECT_EQ(env.out, a.out);
    const json j = json::parse(run({"oracle", f, "--samples", "1", "--json"}).out);
    EXPECT_EQ(j["seed"].get<std::uint64_t>(), kDefaultOracleSeed);
}

TEST_F(Cli, reduce_recovers_small_fixture) {
    const std::string expected = without_metadata(run({"gallery", "export", "eq3-d2"}).out);
    for (const char *keep : {"X.0,Y.0", "X.1,Y.1"}) {
        const Result r = run({"reduce", fixture("eq3-d4"), "--keep", keep});
        EXPECT_EQ(r.code, 0) << r.err;
        EXPECT_EQ(r.out, expected) << keep;
    }
    // Unfactored file, split on the command line.
    const std::string flat = write("flat.procmat.json", serialize_procmat(eq3_process(4)));
    const Result split = run({"reduce", flat, "--split", "X=2x2/2x2", "--split", "Y=2x2/2x2", "--keep", "X.in1,X.out1,Y.1"});
    EXPECT_EQ(split.code, 0) << split.err;
    EXPECT_EQ(split.out, expected);
}

TEST_F(Cli, reduce_usage_errors) {
    EXPECT_EQ(run({"reduce", fixture("eq3-d4"), "--keep", "X.in0,Y.0"}).code, 2);
    EXPECT_EQ(run({"reduce", fixture("eq3-d4"), "--keep", "X.5"}).code, 2);
    EXPECT_EQ(run({"reduce", fixture("eq3-d4"), "--keep", "Q"}).code, 2);
    EXPECT_EQ(run({"reduce", fixture("eq3-d2"), "--keep", "X", "--split", "X=3/2"}).code, 2);
    const Result one = run({"reduce", fixture("eq3-d2"), "--keep", "X"});
    EXPECT_EQ(one.code, 0);
    EXPECT_EQ(parse_procmat(one.out).process.layout().size(), 1u);
}

TEST_F(Cli, input_errors_exit_2) {
    const std::string good = serialize_procmat(eq3_process(2));
    const Result truncated = run({"validate", write("cut.procmat.json", good.substr(0, good.size() / 3))});
    EXPECT_EQ(truncated.code, 2);
    EXPECT_NE(truncated.err.find("syntax error"), std::string::npos) << truncated.err;
    EXPECT_EQ(run({"validate", path("missing.procmat.json")}).code, 2);
    std::string wrong_dim = good;
    wrong_dim.replace(wrong_dim.find("\"dim\": 16"), 9, "\"dim\": 8");
    const Result dim = run({"validate", write("dim.procmat.json", wrong_dim)});
    EXPECT_EQ(dim.code, 2);
    EXPECT_NE(dim.err.find("/matrix/dim"), std::string::npos);
    // Non-Hermitian matrix.
    std::string skew = good;
    skew.replace(skew.find("[0.5, 0], [0, 0]"), 16, "[0.5, 0], [0, 1]");
    EXPECT_EQ(run({"validate", write("skew.procmat.json", skew)}).code, 2);
}

TEST_F(Cli, usage_errors_exit_2) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"validate"}).code, 2);
    EXPECT_EQ(run({"oracle", fixture("eq3-d2"), "--samples", "many"}).code, 2);
    EXPECT_EQ(run({"gallery", "export", "nope"}).code, 2);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, gallery_list_is_stable) {
    const Result r = run({"gallery", "list"});
    EXPECT_EQ(r.code, 0);
    std::string expected;
    for (const GalleryEntry &e : gallery()) expected += e.name + "\n";
    EXPECT_EQ(r.out, expected);
    EXPECT_EQ(run({"gallery", "list"}).out, r.out);
    const json j = json::parse(run({"gallery", "list", "--json"}).out);
    EXPECT_EQ(j["entries"].size(), gallery().size());
}
