#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct CliRun
{
  int status = -1;
  std::string out;
  std::string err;
};

std::string
slurp(const fs::path& p)
{
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("frem_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliRun run(const std::string& args) const
  {
    const fs::path out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd =
      std::string("\"") + FREM_CLI_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" + err.string() + "\"";
    const int raw = std::system(cmd.c_str());
    CliRun r;
    r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  fs::path write(const std::string& name, const std::string& text) const
  {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }

  fs::path dir_;
};

const char* kSmallConfig = R"({
  "setting": "mixg",
  "n": [60],
  "m": 30,
  "replicates": 4,
  "test_size": 40,
  "tuning": {"bandwidth_count": 3}
})";

} // namespace

TEST_F(CliTest, SimulateIsIdenticalAcrossWorkerCounts)
{
  const auto config = write("config.json", kSmallConfig);
  std::string results, meta;
  for (int w : { 1, 4, 8 }) {
    const fs::path out = dir_ / ("w" + std::to_string(w));
    const CliRun r = run("--workers " + std::to_string(w) + " simulate --config \"" + config.string() + "\" --out \"" +
                      out.string() + "\" --prefix run");
    ASSERT_EQ(r.status, 0) << r.err;
    const std::string res = slurp(out / "run_results.csv");
    const std::string m = slurp(out / "run_meta.json");
    ASSERT_FALSE(res.empty());
    if (results.empty()) {
      results = res;
      meta = m;
    }
    EXPECT_EQ(res, results) << "workers " << w;
    EXPECT_EQ(m, meta) << "workers " << w;
  }
}

TEST_F(CliTest, ErrorsAreJsonOnStderr)
{
  const auto bad = write("bad.json", R"({"replicate": 3})");
  const CliRun r = run("simulate --config \"" + bad.string() + "\" --out \"" + (dir_ / "o").string() + "\"");
  EXPECT_EQ(r.status, 2);
  const auto j = nlohmann::json::parse(r.err);
  EXPECT_EQ(j["error"]["code"], "SchemaError");

  const auto csv = write("bad.csv", "0,0.5,1,y\n1,2,3,4\n1,x,3,4\n");
  const CliRun d = run("dim --data \"" + csv.string() + "\"");
  EXPECT_EQ(d.status, 2);
  EXPECT_EQ(nlohmann::json::parse(d.err)["error"]["code"], "ParseError");

  EXPECT_EQ(run("").status, 2);
}

TEST_F(CliTest, FitPredictRoundTrip)
{
  std::ostringstream csv;
  csv << "0,0.25,0.5,0.75,1,y\n";
  for (int i = 0; i < 60; ++i) {
    const double a = 0.05 * i;
    csv << a << ',' << a + 0.1 << ',' << a + 0.2 << ',' << a + 0.3 << ',' << a + 0.4 << ',' << 1.5 << '\n';
  }
  const auto data = write("flat.csv", csv.str());
  const fs::path model = dir_ / "model.json";
  const CliRun f = run("fit --data \"" + data.string() + "\" --model \"" + model.string() + "\"");
  ASSERT_EQ(f.status, 0) << f.err;
  ASSERT_TRUE(fs::exists(model));
  const auto summary = nlohmann::json::parse(f.out);
  EXPECT_EQ(summary["n"], 60);

  const CliRun p = run("predict --model \"" + model.string() + "\" --data \"" + data.string() + "\" --no-smooth");
  ASSERT_EQ(p.status, 0) << p.err;
  std::istringstream lines(p.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "row,prediction,response");
  int rows = 0;
  while (std::getline(lines, line)) {
    const auto c1 = line.find(','), c2 = line.rfind(',');
    EXPECT_NEAR(std::stod(line.substr(c1 + 1, c2 - c1 - 1)), 1.5, 1e-9) << line;
    ++rows;
  }
  EXPECT_EQ(rows, 60);
}

TEST_F(CliTest, DimReportsJson)
{
  std::ostringstream csv;
  csv << "0,0.5,1,y\n";
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    csv << t << ',' << 2 * t << ',' << 3 * t << ',' << t << '\n';
  }
  const auto data = write("line.csv", csv.str());
  const CliRun r = run("dim --data \"" + data.string() + "\" --k1 5 --k2 10");
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["n"], 200);
  EXPECT_EQ(j["rounded"], 1);
  EXPECT_EQ(j["per_k"].size(), 6u);
}
