#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iiengine/image.hpp"
#include "iiengine/memory_model.hpp"

namespace iiengine {

// What the datapath does when a value exceeds its register width.
enum class OverflowMode {
  strict,  // undersized widths rejected up front; runtime overflow still traps
  trap,    // undersized widths allowed, first overflow throws
  wrap,    // undersized widths allowed, values wrap modulo 2^width
};

struct EngineConfig {
  Geometry geometry;
  unsigned diff_width_bits = 0;
  unsigned output_width_bits = 0;
  unsigned pipeline_latency = 2;
  OverflowMode overflow = OverflowMode::strict;

  /// Minimum widths that can never overflow for this geometry.
  static EngineConfig for_geometry(const Geometry& g, unsigned latency = 2) {
    g.validate();
    EngineConfig cfg;
    cfg.geometry = g;
    cfg.diff_width_bits = safe_width(proposed_product(g));
    cfg.output_width_bits = safe_width(standard_product(g));
    cfg.pipeline_latency = latency;
    return cfg;
  }
};

class OverflowTrap : public std::runtime_error {
 public:
  OverflowTrap(const std::string& what, std::uint64_t cycle, std::size_t row, std::size_t col)
      : std::runtime_error(what), cycle_(cycle), row_(row), col_(col) {}

  std::uint64_t cycle() const noexcept { return cycle_; }
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

 private:
  std::uint64_t cycle_;
  std::size_t row_;
  std::size_t col_;
};

// Fixed-capacity list of at most two items, one per datapath lane.
template <typename T>
class Lanes {
 public:
  void push(const T& v) {
    if (size_ == items_.size()) {
      throw std::logic_error("datapath has two lanes");
    }
    items_[size_++] = v;
  }
  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const T& operator[](std::size_t i) const noexcept { return items_[i]; }
  auto begin() const noexcept { return items_.begin(); }
  auto end() const noexcept { return items_.begin() + size_; }

 private:
  std::array<T, 2> items_{};
  std::size_t size_ = 0;
};

struct Output {
  std::size_t row = 0;
  std::size_t col = 0;
  Sum value = 0;
};

struct BufferAccess {
  std::size_t address = 0;
  Sum read = 0;
  Sum write = 0;
};

struct Cursor {
  std::size_t row = 0;
  std::size_t col = 0;
};

// Everything observable about one clock cycle.
struct CycleRecord {
  std::uint64_t cycle = 0;
  std::optional<Cursor> input;  // first column fed this cycle, empty on drain cycles
  Lanes<BufferAccess> buffer;
  std::optional<Sum> first_col_reg;  // set when the register is latched
  Lanes<Output> outputs;
};

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static Rational reduced(std::uint64_t num, std::uint64_t den) {
    const std::uint64_t g = std::gcd(num, den);
    return g == 0 ? Rational{0, 1} : Rational{num / g, den / g};
  }
  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Rational&, const Rational&) = default;
};

struct CycleStats {
  std::uint64_t total_cycles = 0;
  std::uint64_t compute_cycles = 0;
  std::uint64_t outputs_emitted = 0;
  Rational steady_state_throughput;  // outputs per compute cycle
  Sum peak_buffer_value = 0;
  std::size_t peak_buffer_row = 0;  // first row where the peak was written
  unsigned diff_width_bits = 0;
  unsigned output_width_bits = 0;
  std::uint64_t buffer_bits = 0;  // diff width x cols, first-column register excluded
};

/// Cycle-level model of the two-outputs-per-clock difference-buffer engine.
///
/// The row buffer holds one word per column: the column prefix sum d(c) of the
/// last completed row. Feeding row r updates d(c) += i(r, c) and chains
/// ii(r, c) = ii(r, c-1) + d(c), two columns per cycle. Results leave the
/// pipeline `pipeline_latency` cycles after they are computed. Pairs are
/// aligned to the start of each row, so an odd-width row ends with a
/// single-pixel cycle.
///
/// Single owner; not safe for concurrent mutation.
class Engine {
 public:
  explicit Engine(EngineConfig cfg) : cfg_(cfg) {
    validate(cfg_);
    diff_buffer_.assign(cfg_.geometry.cols, 0);
  }

  const EngineConfig& config() const noexcept { return cfg_; }
  std::span<const Sum> diff_buffer() const noexcept { return diff_buffer_; }
  Sum first_col_reg() const noexcept { return first_col_reg_; }
  std::uint64_t cycle_count() const noexcept { return cycle_; }
  Cursor cursor() const noexcept { return cursor_; }
  Sum peak_buffer_value() const noexcept { return peak_; }
  std::size_t peak_buffer_row() const noexcept { return peak_row_; }
  std::size_t in_flight() const noexcept { return pipeline_.size(); }

  bool input_done() const noexcept { return cursor_.row == cfg_.geometry.rows; }
  bool finished() const noexcept { return input_done() && pipeline_.empty(); }

  /// Pixels the next compute cycle must receive: two, or one at the end of an
  /// odd-width row, or zero once the frame has been consumed.
  std::size_t expected_pixels() const noexcept {
    if (input_done()) {
      return 0;
    }
    return std::min<std::size_t>(2, cfg_.geometry.cols - cursor_.col);
  }

  /// Advances the clock by one cycle. An empty `pixels` span is a bubble
  /// (used to drain the pipeline); otherwise it must hold expected_pixels()
  /// values in scan order.
  CycleRecord step(std::span<const Pixel> pixels) {
    CycleRecord rec;
    rec.cycle = cycle_;
    if (!pixels.empty()) {
      compute(pixels, rec);
    }
    while (!pipeline_.empty() && pipeline_.front().ready <= cycle_) {
      rec.outputs.push(pipeline_.front().out);
      pipeline_.pop_front();
    }
    ++cycle_;
    return rec;
  }

  /// Clears all state for a new frame.
  void reset() {
    std::fill(diff_buffer_.begin(), diff_buffer_.end(), Sum{0});
    first_col_reg_ = 0;
    row_acc_ = 0;
    cursor_ = {};
    pipeline_.clear();
    cycle_ = 0;
    peak_ = 0;
    peak_row_ = 0;
  }

  static void validate(const EngineConfig& cfg) {
    cfg.geometry.validate();
    if (cfg.diff_width_bits == 0 || cfg.diff_width_bits > 64 || cfg.output_width_bits == 0 ||
        cfg.output_width_bits > 64) {
      throw std::invalid_argument("register widths must be between 1 and 64 bits");
    }
    if (cfg.overflow != OverflowMode::strict) {
      return;
    }
    const unsigned need_diff = safe_width(proposed_product(cfg.geometry));
    const unsigned need_out = safe_width(standard_product(cfg.geometry));
    if (cfg.diff_width_bits < need_diff) {
      throw std::invalid_argument("difference width " + std::to_string(cfg.diff_width_bits) +
                                  " bits is below the " + std::to_string(need_diff) +
                                  " bits required for " + to_string(cfg.geometry));
    }
    if (cfg.output_width_bits < need_out) {
      throw std::invalid_argument("output width " + std::to_string(cfg.output_width_bits) +
                                  " bits is below the " + std::to_string(need_out) +
                                  " bits required for " + to_string(cfg.geometry));
    }
  }

 private:
  struct InFlight {
    std::uint64_t ready = 0;
    Output out;
  };

  static Sum mask(unsigned bits) noexcept { return bits >= 64 ? ~Sum{0} : (Sum{1} << bits) - 1; }

  // Applies the configured overflow policy to a value destined for a
  // `bits`-wide register. Sums are formed in 64 bits, so a value wider than
  // 64 bits cannot arise from validated widths.
  Sum fit(Sum value, bool carry_out, unsigned bits, const char* what, std::size_t col) const {
    const bool overflow = carry_out || value > mask(bits);
    if (!overflow) {
      return value;
    }
    if (cfg_.overflow == OverflowMode::wrap) {
      return value & mask(bits);
    }
    throw OverflowTrap(std::string(what) + " overflow at cycle " + std::to_string(cycle_) +
                           ", row " + std::to_string(cursor_.row) + ", col " + std::to_string(col) +
                           ": value exceeds " + std::to_string(bits) + " bits",
                       cycle_, cursor_.row, col);
  }

  void compute(std::span<const Pixel> pixels, CycleRecord& rec) {
    if (input_done()) {
      throw std::out_of_range("pixels fed past the end of the image");
    }
    if (pixels.size() != expected_pixels()) {
      throw std::invalid_argument("expected " + std::to_string(expected_pixels()) +
                                  " pixels at row " + std::to_string(cursor_.row) + ", col " +
                                  std::to_string(cursor_.col) + ", got " +
                                  std::to_string(pixels.size()));
    }
    for (Pixel p : pixels) {
      if (p > cfg_.geometry.pmax) {
        throw std::invalid_argument("pixel value " + std::to_string(p) + " exceeds maximum " +
                                    std::to_string(cfg_.geometry.pmax));
      }
    }

    // Compute both lanes into temporaries so a trap leaves state untouched.
    std::array<Sum, 2> d_new{};
    std::array<Sum, 2> ii{};
    Sum acc = row_acc_;
    for (std::size_t lane = 0; lane < pixels.size(); ++lane) {
      const std::size_t col = cursor_.col + lane;
      const Sum d_old = diff_buffer_[col];
      const Sum d_sum = d_old + pixels[lane];
      d_new[lane] = fit(d_sum, d_sum < d_old, cfg_.diff_width_bits, "difference buffer", col);
      const Sum base = col == 0 ? 0 : acc;
      const Sum ii_sum = base + d_new[lane];
      ii[lane] = fit(ii_sum, ii_sum < base, cfg_.output_width_bits, "integral output", col);
      acc = ii[lane];
    }

    rec.input = cursor_;
    for (std::size_t lane = 0; lane < pixels.size(); ++lane) {
      const std::size_t col = cursor_.col + lane;
      rec.buffer.push({col, diff_buffer_[col], d_new[lane]});
      diff_buffer_[col] = d_new[lane];
      if (d_new[lane] > peak_) {
        peak_ = d_new[lane];
        peak_row_ = cursor_.row;
      }
      if (col == 0) {
        first_col_reg_ = ii[lane];
        rec.first_col_reg = first_col_reg_;
      }
      pipeline_.push_back({cycle_ + cfg_.pipeline_latency, {cursor_.row, col, ii[lane]}});
    }
    row_acc_ = acc;

    cursor_.col += pixels.size();
    if (cursor_.col == cfg_.geometry.cols) {
      cursor_.col = 0;
      ++cursor_.row;
    }
  }

  EngineConfig cfg_;
  std::vector<Sum> diff_buffer_;
  Sum first_col_reg_ = 0;
  Sum row_acc_ = 0;  // ii of the previous column in the current row
  Cursor cursor_;
  std::deque<InFlight> pipeline_;
  std::uint64_t cycle_ = 0;
  Sum peak_ = 0;
  std::size_t peak_row_ = 0;
};

struct RunResult {
  IntegralImage integral;
  CycleStats stats;
};

/// Streams `img` through a fresh engine, calling sink(const CycleRecord&)
/// once per cycle, and assembles the emitted values.
template <typename Sink>
RunResult engine_trace(const EngineConfig& cfg, const Image& img, Sink&& sink) {
  if (img.rows() != cfg.geometry.rows || img.cols() != cfg.geometry.cols ||
      img.pmax() > cfg.geometry.pmax) {
    throw std::invalid_argument("image " + std::to_string(img.rows()) + "x" +
                                std::to_string(img.cols()) + " (pmax " +
                                std::to_string(img.pmax()) + ") does not match engine geometry " +
                                to_string(cfg.geometry) + " (pmax " +
                                std::to_string(cfg.geometry.pmax) + ")");
  }
  Engine engine(cfg);
  RunResult result{IntegralImage(img.rows(), img.cols()), {}};
  std::uint64_t emitted = 0;
  std::uint64_t compute_cycles = 0;

  auto collect = [&](const CycleRecord& rec) {
    for (const Output& o : rec.outputs) {
      result.integral(o.row, o.col) = o.value;
      ++emitted;
    }
    sink(rec);
  };

  while (!engine.input_done()) {
    const Cursor at = engine.cursor();
    collect(engine.step(img.row(at.row).subspan(at.col, engine.expected_pixels())));
    ++compute_cycles;
  }
  while (!engine.finished()) {
    collect(engine.step({}));
  }

  CycleStats& s = result.stats;
  s.total_cycles = engine.cycle_count();
  s.compute_cycles = compute_cycles;
  s.outputs_emitted = emitted;
  s.steady_state_throughput = Rational::reduced(emitted, compute_cycles);
  s.peak_buffer_value = engine.peak_buffer_value();
  s.peak_buffer_row = engine.peak_buffer_row();
  s.diff_width_bits = cfg.diff_width_bits;
  s.output_width_bits = cfg.output_width_bits;
  s.buffer_bits = std::uint64_t{cfg.diff_width_bits} * cfg.geometry.cols;
  return result;
}

inline RunResult engine_run(const EngineConfig& cfg, const Image& img) {
  return engine_trace(cfg, img, [](const CycleRecord&) {});
}

}  // namespace iiengine
