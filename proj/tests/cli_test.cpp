// Drives the iiengine executable end to end.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>

#include "iiengine/formats.hpp"
#include "iiengine/integral.hpp"
#include "iiengine/pgm.hpp"
#include "iiengine/trace.hpp"
#include "test_support.hpp"

namespace iiengine {
namespace {

namespace fs = std::filesystem;

struct Result {
  int status = -1;
  std::string out;
};

Result run(const std::string& args) {
  const std::string cmd = std::string(IIENGINE_CLI) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    return r;
  }
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) {
    r.out.append(buf, n);
  }
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("iiengine_cli_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string save(const std::string& name, const Image& img, PgmFormat f = PgmFormat::binary) {
    const auto bytes = write_pgm(img, f);
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                              static_cast<std::streamsize>(bytes.size()));
    return p.string();
  }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, ComputeCsv) {
  const auto in = save("a.pgm", Image(2, 2, 255, {1, 2, 3, 4}), PgmFormat::ascii);
  const Result r = run("compute " + in + " --method serial --format csv");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "1,3\n4,10\n");
}

TEST_F(Cli, AllMethodsWriteIdenticalFiles) {
  std::mt19937_64 rng(5);
  const auto in = save("r.pgm", testing::random_image(rng, 23, 31, 65535));
  for (const char* fmt : {"csv", "iim1"}) {
    std::string reference;
    for (const char* method : {"naive", "serial", "rowparallel", "engine"}) {
      const std::string out = path(std::string(method) + "." + fmt);
      ASSERT_EQ(run("compute " + in + " --method " + method + " --workers 3 --format " + fmt +
                    " --out " + out)
                    .status,
                0);
      const std::string bytes = slurp(out);
      if (reference.empty()) {
        reference = bytes;
      } else {
        EXPECT_EQ(bytes, reference) << method << " " << fmt;
      }
    }
  }
  const std::string iim = slurp(path("engine.iim1"));
  const auto ii = integral_from_iim1(std::span(reinterpret_cast<const std::uint8_t*>(iim.data()), iim.size()));
  EXPECT_EQ(ii, integral_naive(parse_pgm(slurp(in))));
}

TEST_F(Cli, ComputeLargeZeroFrame) {
  const auto in = save("zero.pgm", Image::filled(1920, 1080, 255, 0));
  const std::string out = path("zero.iim1");
  ASSERT_EQ(run("compute " + in + " --method engine --format iim1 --out " + out).status, 0);
  const std::string bytes = slurp(out);
  ASSERT_EQ(bytes.size(), kIimHeaderBytes + 8u * 1920 * 1080);
  EXPECT_EQ(bytes.find_first_not_of('\0', kIimHeaderBytes), std::string::npos);
}

TEST_F(Cli, ComputeErrors) {
  const auto in = save("a.pgm", Image(2, 2, 255, {1, 2, 3, 4}));
  EXPECT_EQ(run("compute " + in + " --method magic").status, 2);
  EXPECT_EQ(run("compute " + path("missing.pgm")).status, 1);
  std::ofstream(path("bad.pgm")) << "P2 2 1 255 7 300";
  EXPECT_EQ(run("compute " + path("bad.pgm")).status, 1);
  EXPECT_EQ(run("compute " + in + " --out " + path("no/such/dir/out.csv")).status, 1);
  EXPECT_EQ(run("").status, 2);
}

TEST_F(Cli, MemreportMatchesGolden) {
  const Result r = run(
      "memreport --sizes 360x240,720x576,800x640,1280x720,1920x1080,2048x1536,3840x2160 --pmax 255");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, slurp(fs::path(IIENGINE_GOLDEN_DIR) / "table1.csv"));
}

TEST_F(Cli, MemreportRows) {
  EXPECT_NE(run("memreport --sizes 360x240").out.find("4080,32.0"), std::string::npos);
  EXPECT_NE(run("memreport --sizes 1280x720 --pmax 255").out.find("13680,32.1"), std::string::npos);
  const Result t = run("memreport --sizes 1920x1080 --format table");
  EXPECT_EQ(t.status, 0);
  EXPECT_NE(t.out.find("34.4%"), std::string::npos);
  EXPECT_EQ(run("memreport --sizes 1920by1080").status, 2);
  EXPECT_EQ(run("memreport --sizes 1920x1080 --pmax 0").status, 2);
}

TEST_F(Cli, Figure1) {
  const Result r = run("figure1 --sizes 1920x1080,360x240");
  EXPECT_EQ(r.status, 0);
  EXPECT_EQ(r.out, "label,std_total_bits\n1920x1080,31320\n360x240,6000\n");
  const std::string out = path("fig.csv");
  EXPECT_EQ(run("figure1 --sizes 360x240 --out " + out).status, 0);
  EXPECT_EQ(slurp(out), "label,std_total_bits\n360x240,6000\n");
  EXPECT_EQ(run("figure1").status, 2);
}

TEST_F(Cli, SimulateStatsAndTrace) {
  const auto in = save("ones.pgm", Image::filled(4, 4, 1, 1));
  const std::string trace = path("trace.csv");
  const Result r = run("simulate " + in + " --latency 2 --trace " + trace);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("total_cycles: 10\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("throughput: 2/1"), std::string::npos);
  EXPECT_NE(r.out.find("peak_buffer_value: 4\n"), std::string::npos);
  std::istringstream t(slurp(trace));
  EXPECT_EQ(replay_trace_csv(t, 4, 4), integral_naive(Image::filled(4, 4, 1, 1)));
}

TEST_F(Cli, SimulateWorstCaseHd) {
  const auto in = save("white.pgm", Image::filled(1920, 1080, 255, 255));
  const Result r = run("simulate " + in);
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("peak_buffer_value: 489600\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("diff_width_bits: 19\n"), std::string::npos);
}

TEST_F(Cli, SimulateOverflowAndUsage) {
  const auto in = save("white.pgm", Image::filled(16, 4, 255, 255));
  EXPECT_EQ(run("simulate " + in + " --diff-width 8 --overflow trap").status, 3);
  EXPECT_EQ(run("simulate " + in + " --diff-width 8").status, 2);
  EXPECT_EQ(run("simulate " + in + " --diff-width 8 --overflow wrap").status, 0);
  EXPECT_EQ(run("simulate " + in + " --trace " + path("no/dir/t.csv")).status, 1);
}

TEST_F(Cli, Boxsum) {
  const auto in = save("a.pgm", Image(2, 2, 255, {1, 2, 3, 4}));
  EXPECT_EQ(run("boxsum " + in + " 0 0 1 1").out, "10\n");
  EXPECT_EQ(run("boxsum " + in + " 1 0 1 0").out, "3\n");
  EXPECT_EQ(run("boxsum " + in + " 1 0 0 1").status, 2);
  EXPECT_EQ(run("boxsum " + in + " 0 0 2 1").status, 2);
  EXPECT_EQ(run("boxsum " + in + " 0 0 1").status, 2);
}

}  // namespace
}  // namespace iiengine
