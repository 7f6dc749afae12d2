#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include <galring/harness.hpp>

using namespace galring;

namespace {

const std::filesystem::path kData = GALRING_DATA_DIR;

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    return ErrorCode::InternalError;
}

JobConfig census_job(const std::string& ring, unsigned d, std::vector<u64> sizes, u64 samples, u64 seed) {
    JobConfig cfg;
    cfg.task = "census";
    cfg.ring = ring;
    cfg.d = d;
    cfg.sizes = std::move(sizes);
    cfg.samples = samples;
    cfg.seed = seed;
    return cfg;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        out.push_back(line);
    }
    return out;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    return out;
}

struct Run {
    int status;
    std::string out;
};

Run cli(const std::string& args) {
    const auto tmp = std::filesystem::temp_directory_path() / ("galring_cli_" + std::to_string(::getpid()) + ".out");
    const std::string cmd = std::string(GALRING_CLI) + " " + args + " > " + tmp.string() + " 2>/dev/null";
    const int raw = std::system(cmd.c_str());
    std::ifstream in(tmp, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::filesystem::remove(tmp);
    return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, ss.str()};
}

}  // namespace

TEST(JobConfig, ParsesGridsAndPaths) {
    const auto cfg = load_job(kData / "bounds_grid.json");
    EXPECT_EQ(cfg.task, "bounds");
    EXPECT_EQ(cfg.e_grid, (std::vector<u64>{5, 6}));
    EXPECT_EQ(cfg.d_grid.front(), 2u);
    EXPECT_EQ(cfg.d_grid.back(), 14u);
    const auto count = load_job(kData / "count_pair.json");
    EXPECT_EQ(count.resolve(*count.points), kData / "z3_plane.pts");
}

TEST(JobConfig, RejectsBadDocuments) {
    auto code = [](const std::string& text) { return code_of([&] { parse_job_text(text); }); };
    EXPECT_EQ(code("[1,2]"), ErrorCode::ParseError);
    EXPECT_EQ(code("{"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"ring": "p=2 e=1 k=1"})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "plot"})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "count", "kind": "nu", "colour": 1})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "selftest", "sizes": [1]})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "census", "ring": "p=3 e=1 k=1", "d": 2, "sizes": [1]})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "bounds", "d": "9..3"})"), ErrorCode::ParseError);
    EXPECT_EQ(code(R"({"task": "count", "d": "two"})"), ErrorCode::ParseError);
    EXPECT_EQ(code_of([] { load_job("/nonexistent/job.json"); }), ErrorCode::ParseError);
}

TEST(Selftest, DefaultRingsPass) {
    JobConfig cfg;
    cfg.task = "selftest";
    const auto out = run_selftest(cfg);
    EXPECT_TRUE(out.ok) << out.text;
    const auto lines = csv_lines(out.text);
    EXPECT_EQ(lines[0], "ring,suite,status,cases,failures,detail");
    EXPECT_EQ(out.text.find(",fail,"), std::string::npos);
}

TEST(Selftest, ConstructionErrorsAreFailures) {
    JobConfig cfg;
    cfg.task = "selftest";
    cfg.rings = std::vector<std::string>{"p=2 e=1 k=2 f=1,0,1", "p=3 e=1 k=1"};
    const auto out = run_selftest(cfg);
    EXPECT_FALSE(out.ok);
    EXPECT_NE(out.text.find("construct,fail"), std::string::npos) << out.text;
    EXPECT_NE(out.text.find("NotIrreducible"), std::string::npos);
}

TEST(Selftest, EmptyListWarns) {
    JobConfig cfg;
    cfg.task = "selftest";
    cfg.rings = std::vector<std::string>{};
    const auto out = run_selftest(cfg);
    EXPECT_TRUE(out.ok);
    EXPECT_EQ(out.warnings.size(), 1u);
    EXPECT_EQ(csv_lines(out.text).size(), 1u);
}

TEST(Selftest, CapIsEnforced) {
    JobConfig cfg;
    cfg.task = "selftest";
    cfg.rings = std::vector<std::string>{"p=2 e=3 k=5"};
    cfg.cap = 4096;
    EXPECT_EQ(code_of([&] { run_selftest(cfg); }), ErrorCode::CapExceeded);
}

TEST(VerifyIdentities, SmallRings) {
    auto cfg = load_job(kData / "verify_small.json");
    const auto out = run_verify_identities(cfg, OutputFormat::Json);
    EXPECT_TRUE(out.ok);
    const auto doc = Json::parse(out.text);
    EXPECT_TRUE(doc["ok"].get<bool>());
    EXPECT_GT(doc["results"].size(), 100u);
}

TEST(Count, PairFixture) {
    const auto out = run_count(load_job(kData / "count_pair.json"));
    const auto doc = Json::parse(out.text);
    EXPECT_EQ(doc["count"], "153");
    EXPECT_EQ(doc["ring"], "p=3 e=1 k=1 f=0,1");
    EXPECT_EQ(doc["bound"]["conclusion"], "162");
    EXPECT_TRUE(doc["bound"]["vacuous"].get<bool>());
    EXPECT_NE(doc["point_set"].get<std::string>().find("d=2"), std::string::npos);
}

TEST(Count, OtherKinds) {
    EXPECT_EQ(Json::parse(run_count(load_job(kData / "count_nu.json")).text)["count"], "24");
    const auto forest = Json::parse(run_count(load_job(kData / "count_forest.json")).text);
    EXPECT_TRUE(forest.contains("forest"));
    // every point of F_2^2 as a row: p^{dn-n} (p^d - 1) = 4 * 3
    EXPECT_EQ(Json::parse(run_count(load_job(kData / "count_matrix.json")).text)["count"], "12");
    EXPECT_EQ(code_of([] { run_count(load_job(kData / "count_cycle.json")); }), ErrorCode::CyclicGraph);
}

TEST(Count, BudgetAndShapeErrors) {
    auto cfg = load_job(kData / "count_pair.json");
    cfg.budget = 10;
    EXPECT_EQ(code_of([&] { run_count(cfg); }), ErrorCode::WorkBudgetExceeded);
    cfg = load_job(kData / "count_pair.json");
    cfg.d = 3;
    EXPECT_EQ(code_of([&] { run_count(cfg); }), ErrorCode::DimensionMismatch);
    cfg = load_job(kData / "count_pair.json");
    cfg.kind = "triangle";
    EXPECT_EQ(code_of([&] { run_count(cfg); }), ErrorCode::ParseError);
}

TEST(Bounds, GridNontrivialColumn) {
    const auto out = run_bounds(load_job(kData / "bounds_grid.json"));
    const auto lines = csv_lines(out.text);
    EXPECT_EQ(lines[0], "theorem,p,e,k,d,n,threshold_log_p,Rd_log_p,nontrivial_d,vacuous");
    int seen = 0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i]);
        ASSERT_EQ(f.size(), 10u) << lines[i];
        if (f[0] == "single" && f[2] == "5") {
            EXPECT_EQ(f[8], "11");
            EXPECT_EQ(f[9], std::stoi(f[4]) < 11 ? "true" : "false") << lines[i];
            ++seen;
        }
    }
    EXPECT_EQ(seen, 13);
}

TEST(Bounds, TechnicalPairUndefinedInThePlane) {
    auto cfg = parse_job_text(R"({"task": "bounds", "theorems": ["pair-technical"], "p": 2, "e": 5, "k": 1, "d": [2, 3]})");
    const auto lines = csv_lines(run_bounds(cfg).text);
    ASSERT_EQ(lines.size(), 3u);
    EXPECT_NE(lines[1].find("undefined"), std::string::npos);
    EXPECT_EQ(lines[2].find("undefined"), std::string::npos);
}

TEST(Census, FullPlane) {
    const auto res = run_census_records(census_job("p=3 e=1 k=1", 2, {9}, 1, 1));
    ASSERT_EQ(res.records.size(), 1u);
    EXPECT_EQ(res.records[0].max_nu, 33u);
    EXPECT_EQ(res.records[0].argmax_t, "0");
    EXPECT_EQ(res.records[0].spot_check, "pass");
    EXPECT_EQ(res.records[0].ceiling_consistent, 54);
    EXPECT_TRUE(res.records[0].exceeds_literal);
    EXPECT_FALSE(res.records[0].exceeds_consistent);
    EXPECT_TRUE(res.records[0].vacuous);
}

TEST(Census, EmptySet) {
    const auto res = run_census_records(census_job("p=3 e=1 k=1", 2, {0}, 2, 1));
    for (const auto& r : res.records) EXPECT_EQ(r.max_nu, 0u);
}

TEST(Census, IntegersModFour) {
    const auto res = run_census_records(census_job("p=2 e=2 k=1", 1, {4}, 1, 3));
    EXPECT_EQ(res.records[0].max_nu, 8u);
    EXPECT_EQ(res.records[0].argmax_t, "0");
    const auto hist = nu_histogram(PointSet::full(make_ring(2, 2, 1), 1));
    EXPECT_EQ(hist, (std::vector<u64>{8, 2, 4, 2}));
}

TEST(Census, Deterministic) {
    const auto cfg = load_job(kData / "census_gr4.json");
    const auto a = run_census(cfg), b = run_census(cfg);
    EXPECT_EQ(a.text, b.text);
    EXPECT_TRUE(a.ok);
    EXPECT_EQ(run_census(cfg, OutputFormat::Json).text, run_census(cfg, OutputFormat::Json).text);
    auto other = cfg;
    other.seed = *cfg.seed + 1;
    EXPECT_NE(run_census(other).text, a.text);
}

TEST(Census, QuantilesAndErrors) {
    EXPECT_EQ(quantiles({5, 1, 3, 2, 4}), (std::vector<u64>{1, 2, 3, 4, 5}));
    EXPECT_EQ(quantiles({7}), (std::vector<u64>{7, 7, 7, 7, 7}));
    EXPECT_EQ(code_of([] { run_census_records(census_job("p=3 e=1 k=1", 2, {10}, 1, 1)); }), ErrorCode::InfeasibleSampling);
    auto big = census_job("p=3 e=1 k=1", 4, {50}, 1, 1);
    big.budget = 100;
    EXPECT_EQ(code_of([&] { run_census_records(big); }), ErrorCode::WorkBudgetExceeded);
}

TEST(RingInfo, Describes) {
    const auto doc = Json::parse(run_ring_info(make_ring(2, 2, 2)).text);
    EXPECT_EQ(doc["cardinality"], "16");
    EXPECT_EQ(doc["units"], "12");
    EXPECT_EQ(doc["teichmuller_size"], 4);
}

TEST(Cli, ExitCodes) {
    const std::string d = kData.string() + "/";
    EXPECT_EQ(cli("ring-info --ring 'p=2 e=2 k=2'").status, 0);
    EXPECT_EQ(cli("count --config " + d + "count_pair.json").status, 0);
    EXPECT_EQ(cli("count --config " + d + "count_cycle.json").status, 2);
    EXPECT_EQ(cli("count --config " + d + "census_z3.json").status, 2);  // task mismatch
    EXPECT_EQ(cli("census").status, 2);                                   // no seed
    EXPECT_EQ(cli("frobnicate").status, 2);
    EXPECT_EQ(cli("bounds --format xml --config " + d + "bounds_grid.json").status, 2);
    const auto tmp = std::filesystem::temp_directory_path() / "galring_bad_ring.json";
    std::ofstream(tmp) << R"({"task": "selftest", "rings": ["p=2 e=1 k=2 f=1,0,1"]})";
    EXPECT_EQ(cli("selftest --config " + tmp.string()).status, 1);
    std::filesystem::remove(tmp);
}

TEST(Cli, CensusIsByteIdentical) {
    const std::string cfg = "census --config " + kData.string() + "/census_z3.json";
    const auto a = cli(cfg), b = cli(cfg);
    EXPECT_EQ(a.status, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out.find("mt19937_64"), std::string::npos);
    const auto c = cli(cfg + " --seed 99");
    EXPECT_NE(c.out, a.out);
}
