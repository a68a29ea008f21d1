#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
};

Outcome apsim(const std::string& args) {
    const std::string cmd = std::string(APSIM_PATH) + " " + args + " 2>/dev/null";
    Outcome o;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return o;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) o.out.append(buf, n);
    const int status = pclose(p);
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return o;
}

std::vector<json> lines(const std::string& s) {
    std::vector<json> v;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) v.push_back(json::parse(line));
    }
    return v;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("apsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        write("id4.mtx", "%%MatrixMarket matrix coordinate real general\n4 4 4\n1 1 1\n2 2 1\n3 3 1\n4 4 1\n");
        write("r23.mtx", "%%MatrixMarket matrix coordinate real general\n2 3 1\n1 1 1\n");
        write("bad.mtx", "%%MatrixMarket matrix coordinate real general\n2 2 1\n1 1 x\n");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& f) const { return (dir_ / f).string(); }
    void write(const std::string& f, const std::string& body) const { std::ofstream(dir_ / f) << body; }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, RunIdentityWithVerify) {
    const auto o = apsim("run " + path("id4.mtx") + " --verify");
    ASSERT_EQ(o.code, 0);
    const auto reps = lines(o.out);
    ASSERT_EQ(reps.size(), 1u);
    EXPECT_EQ(reps[0]["matrix_id"], "id4");
    EXPECT_EQ(reps[0]["algorithm"], "ap");
    EXPECT_TRUE(reps[0]["verified"].get<bool>());
    EXPECT_EQ(reps[0]["c_nnz"], 4);
}

TEST_F(Cli, AllAlgorithmsIdenticalC) {
    ASSERT_EQ(apsim("synth --rows 60 --nnz-per-row 4 --seed 3 --out " + path("s.mtx")).code, 0);
    const auto o = apsim("run " + path("s.mtx") + " --algo all --verify");
    ASSERT_EQ(o.code, 0);
    const auto reps = lines(o.out);
    ASSERT_EQ(reps.size(), 5u);
    for (const auto& r : reps) EXPECT_EQ(r["c_hash"], reps[0]["c_hash"]);
}

TEST_F(Cli, CsvFormat) {
    const auto o = apsim("run " + path("id4.mtx") + " --algo ap,cpu --format csv");
    ASSERT_EQ(o.code, 0);
    EXPECT_EQ(std::count(o.out.begin(), o.out.end(), '\n'), 3);
    EXPECT_EQ(o.out.rfind("matrix_id,algorithm", 0), 0u);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(apsim("").code, 1);
    EXPECT_EQ(apsim("run " + path("id4.mtx") + " --algo gpu").code, 1);
    EXPECT_EQ(apsim("run " + path("bad.mtx")).code, 2);
    write("bad.cfg", "t_red = nope\n");
    EXPECT_EQ(apsim("run " + path("id4.mtx") + " --profile " + path("bad.cfg")).code, 4);
    EXPECT_EQ(apsim("run " + path("missing.mtx")).code, 5);
    EXPECT_EQ(apsim("run " + path("id4.mtx") + " --rhs " + path("r23.mtx")).code, 6);
    EXPECT_EQ(apsim("run " + path("r23.mtx")).code, 6);
    EXPECT_EQ(apsim("sweep --rows 50 --multipliers 1").code, 1);
    EXPECT_EQ(apsim("synth --rows 10 --nnz-per-row 11").code, 1);
}

TEST_F(Cli, ProfileChangesCycles) {
    write("fast.cfg", "t_mult_float = 100\n");
    // 2 I: not +/-1, so the float multiply cost applies
    write("d4.mtx", "%%MatrixMarket matrix coordinate real general\n4 4 4\n1 1 2\n2 2 2\n3 3 2\n4 4 2\n");
    const auto base = lines(apsim("run " + path("d4.mtx")).out).at(0);
    const auto fast = lines(apsim("run " + path("d4.mtx") + " --profile " + path("fast.cfg")).out).at(0);
    EXPECT_EQ(base["ledger"]["multiplication"].get<long>(), 4 * 8800);
    EXPECT_EQ(fast["ledger"]["multiplication"].get<long>(), 4 * 100);
}

TEST_F(Cli, SynthDeterministic) {
    const auto a = apsim("synth --rows 100 --nnz-per-row 5 --seed 42");
    const auto b = apsim("synth --rows 100 --nnz-per-row 5 --seed 42");
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, apsim("synth --rows 100 --nnz-per-row 5 --seed 43").out);
}

TEST_F(Cli, StatsSkipsUnreadable) {
    const auto o = apsim("stats " + dir_.string());
    ASSERT_EQ(o.code, 0);
    const auto j = json::parse(o.out);
    EXPECT_EQ(j["matrices"].size(), 2u);
    EXPECT_EQ(j["warnings"].size(), 1u);
    EXPECT_TRUE(j["histograms"].contains("vocab_eligible_fraction"));
}

TEST_F(Cli, SweepReportsFit) {
    const auto o = apsim("sweep --rows 200 --nnz-per-row 4 --multipliers 1,2,4");
    ASSERT_EQ(o.code, 0);
    const auto j = json::parse(o.out);
    EXPECT_EQ(j["points"].size(), 3u);
    EXPECT_GT(j["fit"]["r_squared"].get<double>(), 0.99);
}

TEST_F(Cli, ReplayIsByteIdentical) {
    ASSERT_EQ(apsim("synth --rows 80 --nnz-per-row 3 --seed 9 --out " + path("m.mtx")).code, 0);
    const std::string args = "run " + path("m.mtx") + " --algo all --verify";
    const auto x = lines(apsim(args).out);
    const auto y = lines(apsim(args).out);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_EQ(x[i]["content_hash"], y[i]["content_hash"]);
    EXPECT_EQ(apsim(args + " --no-wall-clock").out, apsim(args + " --no-wall-clock").out);
}
