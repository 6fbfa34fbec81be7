#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "qcompact/state_io.hpp"

namespace fs = std::filesystem;
using namespace qcompact;
using namespace qcompact::cli;

namespace {

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("qcompact_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }

    fs::path named(const std::string& which) {
        RunConfig cfg;
        cfg.subcommand = Subcommand::Named;
        cfg.name = which;
        cfg.output = dir_ / (which + ".json");
        std::ostringstream out, err;
        EXPECT_EQ(run(cfg, out, err), kOk) << err.str();
        return *cfg.output;
    }

    int call(RunConfig cfg) {
        out_.str("");
        err_.str("");
        return run(cfg, out_, err_);
    }

    fs::path dir_;
    std::ostringstream out_, err_;
};

RunConfig with(Subcommand s, const fs::path& input) {
    RunConfig cfg;
    cfg.subcommand = s;
    cfg.inputs = {input};
    return cfg;
}

}  // namespace

TEST_F(CliTest, MeasureGoldenStates) {
    ASSERT_EQ(call(with(Subcommand::Measure, named("ghz"))), kOk);
    EXPECT_DOUBLE_EQ(json::parse(out_.str())["Ec_bits"].get<double>(), 1.0);
    ASSERT_EQ(call(with(Subcommand::Measure, named("eq8_max"))), kOk);
    EXPECT_NEAR(json::parse(out_.str())["Ec_bits"].get<double>(), 2.0, 1e-12);
}

TEST_F(CliTest, ClassifyProduct) {
    ASSERT_EQ(call(with(Subcommand::Classify, named("product"))), kOk) << err_.str();
    const json j = json::parse(out_.str());
    EXPECT_EQ(j["class"], "I");
    for (const char* key : {"ranks", "n_ms", "p", "alpha", "beta", "theta_b", "theta_c", "Ec_bits",
                            "argmin_ordering"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
}

TEST_F(CliTest, ClassifyWithOrdering) {
    RunConfig cfg = with(Subcommand::Classify, named("ghz"));
    cfg.ordering = "BCA";
    ASSERT_EQ(call(cfg), kOk) << err_.str();
    EXPECT_EQ(json::parse(out_.str())["standard_form"]["ordering"], "BCA");
}

TEST_F(CliTest, DecomposeAndVerify) {
    const fs::path w = named("w");
    ASSERT_EQ(call(with(Subcommand::Decompose, w)), kOk);
    EXPECT_EQ(json::parse(out_.str())["trees"].size(), 3u);
    ASSERT_EQ(call(with(Subcommand::Verify, w)), kOk);
    EXPECT_EQ(json::parse(out_.str())["reports"].size(), 3u);
}

TEST_F(CliTest, RandomRoundTripsAndIsReproducible) {
    RunConfig cfg;
    cfg.subcommand = Subcommand::Random;
    cfg.dims = {2, 3};
    cfg.seed = 12;
    ASSERT_EQ(call(cfg), kOk);
    const std::string first = out_.str();
    ASSERT_EQ(call(cfg), kOk);
    EXPECT_EQ(out_.str(), first);
    const fs::path p = write("r.json", first);
    const AnyState loaded = load_state(p);
    const auto& psi = std::get<PureState>(loaded);
    EXPECT_EQ(dump(to_json(psi)), first);
}

TEST_F(CliTest, RoofIsByteIdenticalAcrossRuns) {
    RunConfig gen;
    gen.subcommand = Subcommand::Random;
    gen.dims = {2, 2};
    gen.rank = 2;
    gen.seed = 4;
    gen.output = dir_ / "rho.json";
    ASSERT_EQ(call(gen), kOk);
    RunConfig cfg = with(Subcommand::Roof, *gen.output);
    cfg.restarts = 4;
    cfg.threads = 2;
    ASSERT_EQ(call(cfg), kOk) << err_.str();
    const std::string first = out_.str();
    cfg.threads = 1;
    ASSERT_EQ(call(cfg), kOk);
    EXPECT_EQ(out_.str(), first);
    const json j = json::parse(first);
    EXPECT_NEAR(j["value"].get<double>(), j["wootters_ef"].get<double>(), 5e-3);
}

TEST_F(CliTest, ExitCodesAndDiagnostics) {
    EXPECT_EQ(call(with(Subcommand::Measure, dir_ / "missing.json")), kBadInput);
    EXPECT_NE(err_.str().find("file not found"), std::string::npos);

    EXPECT_EQ(call(with(Subcommand::Measure, write("bad.json", "{oops"))), kBadInput);
    EXPECT_NE(err_.str().find("parse error"), std::string::npos);

    EXPECT_EQ(call(with(Subcommand::Measure,
                        write("short.json", R"({"dims": [2, 2], "amplitudes": [[1, 0]]})"))),
              kBadInput);
    EXPECT_NE(err_.str().find("malformed state"), std::string::npos);

    EXPECT_EQ(call(with(Subcommand::Measure,
                        write("unnorm.json", R"({"dims": [2, 2], "amplitudes": [1, 1, 0, 0]})"))),
              kBadInput);
    EXPECT_NE(err_.str().find("invalid state"), std::string::npos);

    RunConfig big;
    big.subcommand = Subcommand::Random;
    big.dims = {2, 2, 2, 2, 2, 2, 2};
    big.output = dir_ / "big.json";
    ASSERT_EQ(call(big), kOk);
    EXPECT_EQ(call(with(Subcommand::Verify, *big.output)), kBadInput);
    EXPECT_NE(err_.str().find("dimension cap"), std::string::npos);

    EXPECT_EQ(call(with(Subcommand::Classify, *big.output)), kBadInput);

    RunConfig wrong = with(Subcommand::Measure, named("ghz"));
    wrong.ordering = "ABD";
    EXPECT_EQ(call(wrong), kBadInput);
}

TEST_F(CliTest, InvariantFailureExitCode) {
    // a tolerance below rounding noise trips the tree checks
    RunConfig cfg = with(Subcommand::Decompose, named("w"));
    cfg.tol = 1e-300;
    EXPECT_EQ(call(cfg), kInvariantFailure);
    EXPECT_NE(err_.str().find("invariant failure"), std::string::npos);
}

TEST_F(CliTest, TextFormat) {
    RunConfig cfg = with(Subcommand::Measure, named("ghz"));
    cfg.format = Format::Text;
    ASSERT_EQ(call(cfg), kOk);
    EXPECT_NE(out_.str().find("E^c = 1 bits"), std::string::npos);
}
