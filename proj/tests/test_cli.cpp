#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "levysp/cli.hpp"
#include "levysp/io.hpp"

using namespace levysp;
namespace fs = std::filesystem;

namespace {

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("levysp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(std::vector<std::string> args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
  }
  static std::vector<double> column(const std::string& p, std::size_t col) {
    std::ifstream in(p);
    std::string line;
    std::vector<double> v;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
      std::stringstream ss(line);
      std::string cell;
      for (std::size_t c = 0; c <= col; ++c) std::getline(ss, cell, ',');
      v.push_back(std::stod(cell));
    }
    return v;
  }
  double printed(const std::string& key) const {
    const std::string text = out_.str();
    const auto at = text.find(key + "=");
    if (at == std::string::npos) return std::nan("");
    return std::stod(text.substr(at + key.size() + 1));
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

}  // namespace

TEST_F(CliTest, SimulateShapeAndDeterminism) {
  const std::vector<std::string> args{"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "256",
                                      "--T", "1", "--seed", "7", "--out", path("s.csv")};
  ASSERT_EQ(run(args), 0) << err_.str();
  const auto values = column(path("s.csv"), 1);
  ASSERT_EQ(values.size(), 257u);
  EXPECT_EQ(values[0], 0.0);
  const std::string first = slurp(path("s.csv"));
  auto again = args;
  again.back() = path("t.csv");
  ASSERT_EQ(run(again), 0);
  EXPECT_EQ(slurp(path("t.csv")), first);
}

TEST_F(CliTest, SimulateDefaultSeedIsAnnounced) {
  ASSERT_EQ(run({"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "4", "--out", path("s.csv")}), 0);
  EXPECT_NE(err_.str().find("seed 1"), std::string::npos);
}

TEST_F(CliTest, CalibratedCauchy) {
  ASSERT_EQ(run({"simulate", "--innovation", "cauchy", "--calibrated", "--n", "8", "--seed", "1", "--out", path("c.csv")}), 0);
  std::ifstream in(path("c.csv"));
  const auto p = read_path_csv(in);
  ASSERT_TRUE(p.spec);
  const auto& law = std::get<StableLaw>(p.spec->law());
  EXPECT_EQ(law.alpha, 1.0);
  EXPECT_NEAR(law.stable_scale, std::sqrt(std::exp(1.0) / (8.0 * std::acos(-1.0))), 1e-15);
}

TEST_F(CliTest, SimulateWritesObservations) {
  ASSERT_EQ(run({"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "8", "--stride", "2", "--seed", "2",
                 "--noise-var", "0", "--out", path("s.csv")}),
            0);
  std::ifstream in(path("s.obs.csv"));
  const auto obs = read_observations_csv(in);
  EXPECT_EQ(obs.noisy.size(), 9u);
  EXPECT_EQ(obs.stride, 2u);
  EXPECT_EQ(column(path("s.csv"), 1).size(), 17u);
}

TEST_F(CliTest, DenoiseLambdaRules) {
  ASSERT_EQ(run({"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "32", "--seed", "3", "--noise-var", "0.5",
                 "--out", path("s.csv")}),
            0);
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--out", path("e.csv")}), 2);
  EXPECT_FALSE(fs::exists(path("e.csv")));
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "mmse", "--lambda", "1", "--out", path("e.csv")}), 2);
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--auto-lambda", "--out", path("e.csv")}), 2);
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "l1", "--lambda", "1", "--out", path("e.csv")}), 2);
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--lambda", "1", "--bogus", "--out", path("e.csv")}), 2);

  ASSERT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--lambda", "1e6", "--out", path("e.csv")}), 0);
  for (double v : column(path("e.csv"), 1)) EXPECT_EQ(v, 0.0);

  ASSERT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--auto-lambda", "--truth", path("s.csv"),
                 "--out", path("a.csv")}),
            0);
  EXPECT_GT(printed("lambda"), 0.0);
  EXPECT_TRUE(std::isfinite(printed("snri_db")));
}

TEST_F(CliTest, AutoLambdaRejectsStridedDataForTv) {
  ASSERT_EQ(run({"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "8", "--stride", "2", "--seed", "3",
                 "--noise-var", "0.5", "--out", path("s.csv")}),
            0);
  EXPECT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "tv", "--auto-lambda", "--truth", path("s.csv"),
                 "--out", path("e.csv")}),
            2);
  EXPECT_EQ(out_.str().find("lambda="), std::string::npos);
  ASSERT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "lmmse", "--auto-lambda", "--truth", path("s.csv"),
                 "--out", path("e.csv")}),
            0);
  EXPECT_EQ(column(path("e.csv"), 1).size(), 17u);
}

TEST_F(CliTest, MmseMatchesLmmseOnGaussianData) {
  ASSERT_EQ(run({"simulate", "--innovation", "gaussian", "--sigma", "1", "--n", "64", "--seed", "11", "--noise-var", "0.3",
                 "--out", path("s.csv")}),
            0);
  ASSERT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "lmmse", "--lambda", "0.3", "--out", path("l.csv")}), 0);
  ASSERT_EQ(run({"denoise", "--in", path("s.obs.csv"), "--method", "mmse", "--out", path("m.csv")}), 0);
  const double dx = printed("grid_step");
  ASSERT_GT(dx, 0.0);
  const auto a = column(path("l.csv"), 1), b = column(path("m.csv"), 1);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(a[i], b[i], 2.0 * dx) << i;
}

TEST_F(CliTest, InterpolateNoiseless) {
  ASSERT_EQ(run({"simulate", "--innovation", "variance_gamma", "--calibrated", "--n", "16", "--stride", "4", "--T", "0.25",
                 "--seed", "5", "--noise-var", "0", "--out", path("s.csv")}),
            0);
  ASSERT_EQ(run({"interpolate", "--in", path("s.obs.csv"), "--method", "linear", "--truth", path("s.csv"), "--out",
                 path("i.csv")}),
            0);
  EXPECT_EQ(column(path("i.csv"), 1).size(), 65u);
  EXPECT_GT(printed("max_abs_error"), 0.0);
  ASSERT_EQ(run({"interpolate", "--in", path("s.obs.csv"), "--method", "mmse", "--out", path("m.csv")}), 0);
  const auto lin = column(path("i.csv"), 1), mm = column(path("m.csv"), 1);
  for (std::size_t k = 0; k < lin.size(); k += 4) EXPECT_EQ(lin[k], mm[k]);
}

TEST_F(CliTest, BenchmarkDryRunAndErrors) {
  const std::string cfg = std::string(LEVYSP_SOURCE_DIR) + "/configs/gaussian.cfg";
  ASSERT_EQ(run({"benchmark", "--config", cfg, "--dry-run", "--out", path("r.csv")}), 0);
  EXPECT_NE(out_.str().find("7 noise levels x 4 methods"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("r.csv")));
  for (const char* name : {"compound_poisson.cfg", "cauchy.cfg", "laplace.cfg"}) {
    EXPECT_EQ(run({"benchmark", "--config", std::string(LEVYSP_SOURCE_DIR) + "/configs/" + name, "--dry-run"}), 0) << name;
  }

  {
    std::ofstream bad(path("bad.cfg"));
    bad << "innovation = gaussian\nsigma = 1\nrealisations = 3\n";
  }
  EXPECT_EQ(run({"benchmark", "--config", path("bad.cfg"), "--out", path("r.csv")}), 2);
  EXPECT_NE(err_.str().find("realisations"), std::string::npos);
  EXPECT_FALSE(fs::exists(path("r.csv")));
  EXPECT_EQ(run({"benchmark", "--config", path("missing.cfg")}), 2);
}

TEST_F(CliTest, BenchmarkWritesReport) {
  {
    std::ofstream cfg(path("small.cfg"));
    cfg << "innovation = compound_poisson\npoisson_rate = 0.6\namplitude_sigma = 1\nsignal_length = 32\n"
           "realizations = 2\ncalibration_realizations = 2\nnoise_variances = 0.5\nmethods = lmmse, mmse\n";
  }
  ASSERT_EQ(run({"benchmark", "--config", path("small.cfg"), "--out", path("r.csv")}), 0) << err_.str();
  const std::string csv = slurp(path("r.csv"));
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
  EXPECT_TRUE(fs::exists(path("r.json")));
}

TEST_F(CliTest, ExitCodesForModelAndNumericalFailures) {
  EXPECT_EQ(run({"simulate", "--innovation", "compound_poisson", "--calibrated", "--n", "4", "--seed", "1", "--out",
                 path("s.csv")}),
            3);
  EXPECT_EQ(run({"pdf", "--innovation", "stable", "--alpha", "1.5", "--scale", "1", "--via", "closed", "--out", path("p.csv")}),
            3);
  EXPECT_EQ(run({"pdf", "--innovation", "variance_gamma", "--gamma", "1", "--T", "0.3", "--half-width", "0.5", "--grid-n",
                 "4096", "--via", "char", "--out", path("p.csv")}),
            4);
  EXPECT_FALSE(fs::exists(path("p.csv")));
  ASSERT_EQ(run({"pdf", "--innovation", "cauchy", "--calibrated", "--out", path("p.csv")}), 0);
  EXPECT_TRUE(fs::exists(path("p.csv")));
  EXPECT_EQ(run({}), 2);
  EXPECT_EQ(run({"frobnicate"}), 2);
}
