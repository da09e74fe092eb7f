#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <gtest/gtest.h>
#include <sys/wait.h>

#include "bcm/io.hpp"
#include "bcm/serialize.hpp"

namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("bcm_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = "cd '" + dir_.string() + "' && '" BCM_CLI_PATH "' " + args + " > out.txt 2> err.txt";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string read(const std::string& name) { return bcm::read_file(dir_ / name); }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

TEST_F(Cli, EndToEndSmiley) {
  ASSERT_EQ(run("generate --preset smiley --seed 3 --out data.csv --truth truth.json"), 0) << read("err.txt");
  EXPECT_TRUE(fs::exists(path("data.vocab.json")));
  EXPECT_EQ(bcm::truth_from_json(read("truth.json")).num_clusters(), 3u);

  ASSERT_EQ(run("fit data.csv --clusters 3 --alpha 0.1 --q 0.5 --lambda 1 --c 50 --iters 200 --seed 3 --out model.json"),
            0)
      << read("err.txt");
  const auto model = bcm::model_from_json(read("model.json"));
  EXPECT_EQ(model.iterations, 200u);
  EXPECT_EQ(model.observations, 240u);
  EXPECT_EQ(model.prototype_ids.size(), 3u);
  EXPECT_EQ(model.trace_file, "model.trace.csv");
  const auto trace = read("model.trace.csv");
  EXPECT_EQ(trace.substr(0, trace.find('\n')), "iteration,log_score,omega_density,accuracy,prototypes");

  ASSERT_EQ(run("explain model.json data.csv --format markdown"), 0) << read("err.txt");
  EXPECT_NE(read("out.txt").find("## Cluster 2"), std::string::npos);
  ASSERT_EQ(run("explain model.json data.csv --format json --out ex.json"), 0) << read("err.txt");
  EXPECT_NE(read("ex.json").find("\"bcm-explanation\""), std::string::npos);

  ASSERT_EQ(run("eval model.json data.csv --labels label --folds 5 --out eval.json"), 0) << read("err.txt");
  EXPECT_NE(read("eval.json").find("\"unsupervised_accuracy\""), std::string::npos);

  bcm::write_file_atomic(path("grid.json"), R"({"q": [0.4, 0.8], "c": [50]})");
  ASSERT_EQ(run("sweep data.csv --grid grid.json --out sweep.csv --clusters 3 --alpha 0.1 --iters 20"), 0)
      << read("err.txt");
  const auto sweep = read("sweep.csv");
  EXPECT_EQ(std::count(sweep.begin(), sweep.end(), '\n'), 3);
}

TEST_F(Cli, SameSeedSameModel) {
  ASSERT_EQ(run("generate --seed 1 --observations 60 --out data.csv"), 0);
  ASSERT_EQ(run("fit data.csv -S 3 --iters 30 --seed 5 --out a.json"), 0);
  ASSERT_EQ(run("fit data.csv -S 3 --iters 30 --seed 5 --out b.json"), 0);
  auto a = read("a.json"), b = read("b.json");
  // trace file names differ; everything else must match
  auto strip = [](std::string s) {
    const auto k = s.find("\"trace_file\"");
    return s.substr(0, k) + s.substr(s.find('\n', k));
  };
  EXPECT_EQ(strip(a), strip(b));
}

TEST_F(Cli, TextCorpus) {
  bcm::write_file_atomic(path("recipes.txt"),
                         "italian\tbasil, garlic, olive oil, tomato\n"
                         "italian\tbasil, garlic, pasta\n"
                         "mexican\tcumin, chili, tortilla\n"
                         "mexican\tchili, tortilla, lime\n");
  ASSERT_EQ(run("fit recipes.txt --text --labelled --terms 6 -S 2 --iters 20 --out m.json"), 0) << read("err.txt");
  ASSERT_EQ(run("explain m.json recipes.txt --text --labelled --terms 6"), 0) << read("err.txt");
  EXPECT_NE(read("out.txt").find("garlic"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run(""), 1);
  EXPECT_EQ(run("fit"), 1);
  EXPECT_EQ(run("generate --preset nope --out x.csv"), 1);
  EXPECT_EQ(run("fit missing.csv --out m.json"), 2);
  bcm::write_file_atomic(path("bad.csv"), "a,b\n1,2\n3\n");
  EXPECT_EQ(run("fit bad.csv --out m.json"), 2);
  EXPECT_NE(read("err.txt").find("row 2"), std::string::npos);
  bcm::write_file_atomic(path("ok.csv"), "a,b\n1,2\n3,4\n");
  EXPECT_EQ(run("fit ok.csv --q 1.5 --out m.json"), 1);
  EXPECT_EQ(run("fit ok.csv --iters 0 --out m.json"), 1);
  EXPECT_EQ(run("fit ok.csv --clusters 5 --out m.json"), 1);
  EXPECT_EQ(run("fit ok.csv --bins 1 --out m.json"), 1);
  ASSERT_EQ(run("fit ok.csv --iters 3 --out m.json"), 0);
  EXPECT_EQ(run("eval m.json ok.csv"), 2);  // no labels
  bcm::write_file_atomic(path("other.csv"), "a,b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(run("explain m.json other.csv"), 2);
}

TEST_F(Cli, OracleCheck) {
  ASSERT_EQ(run("oracle-check --instances 50 --seed 2"), 0) << read("out.txt");
  EXPECT_NE(read("out.txt").find("PASS"), std::string::npos);
}

}  // namespace
