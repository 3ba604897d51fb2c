/*
 * Copyright 2026 The citykpi Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "citykpi/dataset.hpp"
#include "json.hpp"
#include "support.hpp"

namespace citykpi {
namespace {

using nlohmann::json;

struct Outcome {
  int exit_code = -1;
  std::string out;
};

// Runs the CLI through the shell, capturing stdout; stderr is discarded.
Outcome Invoke(const std::string& args, const std::string& env = "") {
  const std::string command =
      env + " " + CITYKPI_CLI_PATH + " " + args + " 2>/dev/null";
  Outcome o;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    o.out.append(buf.data(), n);
  }
  const int status = ::pclose(pipe);
  o.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = std::filesystem::temp_directory_path() /
           ("citykpi_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  void TearDown() override { std::filesystem::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  std::string Write(const std::string& name, const std::string& text) const {
    std::ofstream(Path(name)) << text;
    return Path(name);
  }

  std::string Save(const std::string& name, const Dataset& d) const {
    SaveDatasetFile(d, Path(name));
    return Path(name);
  }

  std::filesystem::path dir_;
};

TEST_F(CliTest, IngestReportsRowsAndMissing) {
  const std::string csv = Write("kpi.csv",
                                "a,b,c,y\n"
                                "1,2,3,0\n"
                                "4,,6,1\n"
                                "7,NaN,,0\n"
                                "1,1,1,1\n");
  const Outcome o = Invoke("ingest --input " + csv + " --out " + Path("kpi.json"));
  ASSERT_EQ(o.exit_code, 0);
  std::istringstream lines(o.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "4 rows, 4 columns");
  std::getline(lines, line);
  std::map<std::string, int> missing;
  std::string name;
  int count;
  while (lines >> name >> count) missing[name] = count;
  EXPECT_EQ(missing, (std::map<std::string, int>{{"a", 0}, {"b", 2}, {"c", 1}, {"y", 0}}));
  const Dataset d = LoadDatasetFile(Path("kpi.json"));
  EXPECT_EQ(d.row_count(), 4u);
  EXPECT_EQ(d.schema()[*d.target_index()].name, "y");
}

TEST_F(CliTest, IngestWithSchema) {
  const std::string csv = Write("kpi.csv", "y,a\n1,2\n0,3\n");
  const std::string schema = Write(
      "schema.json", R"([{"name":"y","role":"target"},{"name":"a","role":"feature"}])");
  const Outcome o = Invoke("ingest --input " + csv + " --schema " + schema + " --out " +
                        Path("o.json"));
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_EQ(LoadDatasetFile(Path("o.json")).schema()[0].name, "y");
}

TEST_F(CliTest, IngestFailures) {
  EXPECT_EQ(Invoke("ingest --input " + Write("empty.csv", "") + " --out " + Path("o.json"))
                .exit_code,
            1);
  EXPECT_EQ(Invoke("ingest --input " + Path("absent.csv") + " --out " + Path("o.json"))
                .exit_code,
            1);
  EXPECT_EQ(Invoke("ingest --input " + Write("bad.csv", "a,y\nx,1\n") + " --out " +
                Path("o.json"))
                .exit_code,
            1);
  EXPECT_EQ(Invoke("ingest --input " + Write("t.csv", "a,y\n1,2\n") + " --out " +
                Path("o.json"))
                .exit_code,
            1);
  EXPECT_FALSE(std::filesystem::exists(Path("o.json")));
  EXPECT_EQ(Invoke("ingest --out " + Path("o.json")).exit_code, 2);
}

TEST_F(CliTest, CompareIsByteIdentical) {
  const std::string data = Save("d.json", testing::EdmontonLike(43, 4, 11));
  const Outcome a = Invoke("compare --dataset " + data + " --seed 7 --json");
  const Outcome b = Invoke("compare --dataset " + data + " --seed 7 --json");
  ASSERT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  const json j = json::parse(a.out);
  ASSERT_EQ(j["models"].size(), 5u);
  EXPECT_EQ(j["test_size"], 13);
  EXPECT_EQ(j["clean_rows"], 43);
  const Outcome table = Invoke("compare --dataset " + data + " --seed 7");
  ASSERT_EQ(table.exit_code, 0);
  for (const char* kind : {"logreg", "svm", "tree", "bnb", "ann"}) {
    EXPECT_NE(table.out.find(kind), std::string::npos) << kind;
  }
}

TEST_F(CliTest, CompareSeedFromEnvironment) {
  const std::string data = Save("d.json", testing::ToDataset(testing::DrawLogistic({}, 60, 3)));
  const Outcome flag = Invoke("compare --dataset " + data + " --seed 42 --json");
  const Outcome env = Invoke("compare --dataset " + data + " --json", "CITYKPI_SEED=42");
  const Outcome other = Invoke("compare --dataset " + data + " --json", "CITYKPI_SEED=43");
  ASSERT_EQ(flag.exit_code, 0);
  EXPECT_EQ(flag.out, env.out);
  EXPECT_NE(flag.out, other.out);
  EXPECT_EQ(Invoke("compare --dataset " + data + " --json", "CITYKPI_SEED=x").exit_code, 2);
}

TEST_F(CliTest, CompareFailures) {
  const std::string small =
      Save("s.json", testing::ToDataset(testing::DrawLogistic({}, 9, 3)));
  EXPECT_EQ(Invoke("compare --dataset " + small).exit_code, 1);
  const std::string data = Save("d.json", testing::ToDataset(testing::DrawLogistic({}, 40, 3)));
  EXPECT_EQ(Invoke("compare --dataset " + data + " --test-fraction 1.5").exit_code, 2);
  EXPECT_EQ(Invoke("compare --dataset " + Path("none.json")).exit_code, 1);
  EXPECT_EQ(Invoke("compare --dataset " + data + " --seed abc").exit_code, 2);
  EXPECT_EQ(Invoke("compare --dataset " + data + " --bogus").exit_code, 2);
  EXPECT_EQ(Invoke("explode").exit_code, 2);
  EXPECT_EQ(Invoke("").exit_code, 2);
}

Dataset Affine() {
  std::vector<Row> rows;
  for (int t = 0; t < 12; ++t) rows.push_back({3.0 * t - 4.0, double(t % 2)});
  return Dataset({{"energy", ColumnRole::kFeature, {}}, {"y", ColumnRole::kTarget, {}}},
                 rows);
}

TEST_F(CliTest, ForecastTable) {
  const std::string data = Save("a.json", Affine());
  const Outcome o = Invoke("forecast --dataset " + data + " --column energy --horizon 2");
  ASSERT_EQ(o.exit_code, 0);
  EXPECT_NE(o.out.find("h  point  lower  upper\n"), std::string::npos);
  EXPECT_NE(o.out.find("1  32.000000  32.000000  32.000000\n"), std::string::npos);
  EXPECT_NE(o.out.find("2  35.000000  35.000000  35.000000\n"), std::string::npos);
}

TEST_F(CliTest, ForecastPlotData) {
  const std::string data = Save("a.json", Affine());
  const Outcome o = Invoke("forecast --dataset " + data +
                        " --column energy --horizon 3 --confidence 0.8 --plot-data");
  ASSERT_EQ(o.exit_code, 0);
  const json j = json::parse(o.out);
  EXPECT_EQ(j["column"], "energy");
  EXPECT_EQ(j["confidence"], 0.8);
  EXPECT_EQ(j["history"].size(), 12u);
  ASSERT_EQ(j["forecast"].size(), 3u);
  EXPECT_EQ(j["forecast"][0]["t"], 12);
  EXPECT_NEAR(j["forecast"][2]["value"].get<double>(), 3.0 * 14 - 4.0, 1e-9);
}

TEST_F(CliTest, ForecastFailures) {
  const std::string data = Save("a.json", Affine());
  EXPECT_EQ(Invoke("forecast --dataset " + data + " --column nope --horizon 1").exit_code,
            1);
  EXPECT_EQ(Invoke("forecast --dataset " + data + " --column energy --horizon 0").exit_code, 2);
  EXPECT_EQ(Invoke("forecast --dataset " + data + " --column energy --horizon 1 --confidence 1")
                .exit_code,
            1);
  EXPECT_EQ(Invoke("forecast --dataset " + data).exit_code, 2);
  EXPECT_EQ(Invoke("forecast --dataset " + data + " --column energy --horizon -1").exit_code,
            2);
}

TEST_F(CliTest, ServeRejectsBadAddress) {
  EXPECT_EQ(Invoke("serve --models-dir " + Path("m") + " --addr host:0").exit_code, 2);
  EXPECT_EQ(Invoke("serve --models-dir " + Path("m") + " --addr 127.0.0.1:70000").exit_code,
            2);
}

TEST_F(CliTest, HelpExitsZero) {
  const Outcome o = Invoke("--help");
  EXPECT_EQ(o.exit_code, 0);
  for (const char* cmd : {"ingest", "compare", "forecast", "serve"}) {
    EXPECT_NE(o.out.find(cmd), std::string::npos) << cmd;
  }
}

}  // namespace
}  // namespace citykpi
