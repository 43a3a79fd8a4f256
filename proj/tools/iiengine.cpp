// iiengine: integral images, buffer sizing reports and engine simulation.
//
// Exit codes: 0 success, 1 I/O or input-file error, 2 usage error,
// 3 overflow trap in the simulated datapath.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "iiengine/engine.hpp"
#include "iiengine/formats.hpp"
#include "iiengine/integral.hpp"
#include "iiengine/memory_model.hpp"
#include "iiengine/pgm.hpp"
#include "iiengine/report.hpp"
#include "iiengine/trace.hpp"

namespace {

using namespace iiengine;

enum ExitCode : int { kOk = 0, kIoError = 1, kUsage = 2, kOverflow = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Image load_image(const std::string& path) {
  const auto bytes = read_file(path);
  try {
    return parse_pgm(std::span<const std::uint8_t>(bytes));
  } catch (const PgmError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_output(const std::string& path, std::string_view data) {
  if (path.empty() || path == "-") {
    std::cout.write(data.data(), static_cast<std::streamsize>(data.size()));
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
    throw IoError("cannot write " + path);
  }
}

std::vector<Geometry> parse_sizes(const std::vector<std::string>& sizes, std::uint32_t pmax) {
  if (sizes.empty()) {
    throw UsageError("at least one size is required (--sizes ROWSxCOLS[,ROWSxCOLS...])");
  }
  if (pmax == 0) {
    throw UsageError("--pmax must be positive");
  }
  std::vector<Geometry> out;
  for (const auto& s : sizes) {
    try {
      out.push_back(parse_size(s, pmax));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  return out;
}

struct ComputeArgs {
  std::string image;
  std::string method = "engine";
  std::string out;
  std::string format = "csv";
  std::size_t workers = 1;
};

int cmd_compute(const ComputeArgs& a) {
  const Image img = load_image(a.image);
  IntegralImage ii;
  if (a.method == "naive") {
    ii = integral_naive(img);
  } else if (a.method == "serial") {
    ii = integral_serial_vj(img);
  } else if (a.method == "rowparallel") {
    ii = integral_row_parallel(img, a.workers);
  } else {
    const Geometry g{static_cast<std::uint32_t>(img.rows()), static_cast<std::uint32_t>(img.cols()),
                     img.pmax()};
    ii = engine_run(EngineConfig::for_geometry(g), img).integral;
  }
  if (a.format == "iim1") {
    const auto bytes = integral_to_iim1(ii);
    write_output(a.out, {reinterpret_cast<const char*>(bytes.data()), bytes.size()});
  } else {
    write_output(a.out, integral_to_csv(ii));
  }
  return kOk;
}

struct ReportArgs {
  std::vector<std::string> sizes;
  std::uint32_t pmax = 255;
  std::string format = "csv";
  std::string out;
};

int cmd_memreport(const ReportArgs& a) {
  std::vector<MemoryProfile> rows;
  for (const auto& g : parse_sizes(a.sizes, a.pmax)) {
    rows.push_back(memory_profile(g));
  }
  write_output(a.out, a.format == "table" ? memreport_table(rows) : memreport_csv(rows));
  return kOk;
}

int cmd_figure1(const ReportArgs& a) {
  write_output(a.out, figure1_csv(figure1_series(parse_sizes(a.sizes, a.pmax))));
  return kOk;
}

struct SimulateArgs {
  std::string image;
  unsigned latency = 2;
  std::string trace;
  std::optional<unsigned> diff_width;
  OverflowMode overflow = OverflowMode::strict;
};

int cmd_simulate(const SimulateArgs& a) {
  const Image img = load_image(a.image);
  const Geometry g{static_cast<std::uint32_t>(img.rows()), static_cast<std::uint32_t>(img.cols()),
                   img.pmax()};
  EngineConfig cfg = EngineConfig::for_geometry(g, a.latency);
  cfg.overflow = a.overflow;
  if (a.diff_width) {
    cfg.diff_width_bits = *a.diff_width;
  }
  try {
    Engine::validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  RunResult result;
  if (a.trace.empty()) {
    result = engine_run(cfg, img);
  } else {
    std::ofstream trace(a.trace);
    if (!trace) {
      throw IoError("cannot write " + a.trace);
    }
    trace << kTraceHeader << '\n';
    result = engine_trace(cfg, img, [&](const CycleRecord& rec) {
      if (!(trace << trace_csv_line(rec) << '\n')) {
        throw IoError("cannot write " + a.trace);
      }
    });
  }

  const CycleStats& s = result.stats;
  std::cout << "geometry: " << to_string(g) << " pmax " << g.pmax << '\n'
            << "pipeline_latency: " << cfg.pipeline_latency << '\n'
            << "total_cycles: " << s.total_cycles << '\n'
            << "compute_cycles: " << s.compute_cycles << '\n'
            << "outputs_emitted: " << s.outputs_emitted << '\n'
            << "throughput: " << s.steady_state_throughput.num << '/'
            << s.steady_state_throughput.den << " outputs/cycle\n"
            << "peak_buffer_value: " << s.peak_buffer_value << '\n'
            << "peak_buffer_row: " << s.peak_buffer_row << '\n'
            << "diff_width_bits: " << s.diff_width_bits << '\n'
            << "output_width_bits: " << s.output_width_bits << '\n'
            << "first_col_reg_bits: " << s.output_width_bits << '\n'
            << "buffer_bits: " << s.buffer_bits << '\n';
  return kOk;
}

struct BoxArgs {
  std::string image;
  std::size_t top = 0;
  std::size_t left = 0;
  std::size_t bottom = 0;
  std::size_t right = 0;
};

int cmd_boxsum(const BoxArgs& a) {
  const Image img = load_image(a.image);
  const Box box{a.top, a.left, a.bottom, a.right};
  if (box.top > box.bottom || box.left > box.right || box.bottom >= img.rows() ||
      box.right >= img.cols()) {
    throw UsageError("box (" + std::to_string(a.top) + ", " + std::to_string(a.left) + ", " +
                     std::to_string(a.bottom) + ", " + std::to_string(a.right) +
                     ") is malformed or outside the " + std::to_string(img.rows()) + "x" +
                     std::to_string(img.cols()) + " image");
  }
  std::cout << box_sum(integral_serial_vj(img), box) << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Integral image engine model: reference methods, buffer sizing, cycle simulation"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* c = app.add_subcommand("compute", "Write the integral image of a PGM file");
  c->add_option("image", compute.image, "Input PGM (P2 or P5)")->required();
  c->add_option("--method", compute.method, "naive | serial | rowparallel | engine")
      ->check(CLI::IsMember({"naive", "serial", "rowparallel", "engine"}))
      ->capture_default_str();
  c->add_option("--out", compute.out, "Output path (stdout if omitted)");
  c->add_option("--format", compute.format, "csv | iim1")
      ->check(CLI::IsMember({"csv", "iim1"}))
      ->capture_default_str();
  c->add_option("--workers", compute.workers, "Threads for rowparallel")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  ReportArgs report;
  auto* m = app.add_subcommand("memreport", "Row-buffer sizes for the standard and difference designs");
  m->add_option("--sizes", report.sizes, "ROWSxCOLS list, rows first (e.g. 1920x1080)")
      ->delimiter(',')
      ->required();
  m->add_option("--pmax", report.pmax, "Maximum pixel value")->capture_default_str();
  m->add_option("--format", report.format, "csv | table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  m->add_option("--out", report.out, "Output path (stdout if omitted)");

  ReportArgs figure;
  auto* f = app.add_subcommand("figure1", "Standard-design buffer bits per size, as plot-ready CSV");
  f->add_option("--sizes", figure.sizes, "ROWSxCOLS list, rows first")->delimiter(',');
  f->add_option("--pmax", figure.pmax, "Maximum pixel value")->capture_default_str();
  f->add_option("--out", figure.out, "Output path (stdout if omitted)");

  SimulateArgs sim;
  std::string overflow = "strict";
  auto* s = app.add_subcommand("simulate", "Run the cycle-level engine model and print statistics");
  s->add_option("image", sim.image, "Input PGM (P2 or P5)")->required();
  s->add_option("--latency", sim.latency, "Pipeline latency in cycles")->capture_default_str();
  s->add_option("--trace", sim.trace, "Write the per-cycle trace CSV here");
  s->add_option("--diff-width", sim.diff_width, "Override the difference buffer width in bits");
  s->add_option("--overflow", overflow, "strict | trap | wrap")
      ->check(CLI::IsMember({"strict", "trap", "wrap"}))
      ->capture_default_str();

  BoxArgs box;
  auto* b = app.add_subcommand("boxsum", "Sum of an inclusive rectangle via four lookups");
  b->add_option("image", box.image, "Input PGM (P2 or P5)")->required();
  b->add_option("top", box.top)->required();
  b->add_option("left", box.left)->required();
  b->add_option("bottom", box.bottom)->required();
  b->add_option("right", box.right)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  static const std::map<std::string, OverflowMode> modes = {
      {"strict", OverflowMode::strict}, {"trap", OverflowMode::trap}, {"wrap", OverflowMode::wrap}};
  sim.overflow = modes.at(overflow);

  try {
    if (*c) return cmd_compute(compute);
    if (*m) return cmd_memreport(report);
    if (*f) return cmd_figure1(figure);
    if (*s) return cmd_simulate(sim);
    if (*b) return cmd_boxsum(box);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const OverflowTrap& e) {
    std::cerr << "overflow trap: " << e.what() << '\n';
    return kOverflow;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  }
  return kUsage;
}
