#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "convlow/common.hpp"

namespace convlow {

// Dense row-major matrix: value(i, j) = v[i * cols + j].
class Mat {
  public:
    Mat() = default;
    Mat(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), v_(rows * cols, real(0)) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return v_.size(); }
    std::uint64_t bytes() const { return std::uint64_t(v_.size()) * kRealBytes; }

    real& at(std::size_t i, std::size_t j) { return v_[i * cols_ + j]; }
    real at(std::size_t i, std::size_t j) const { return v_[i * cols_ + j]; }
    real* row(std::size_t i) { return v_.data() + i * cols_; }
    const real* row(std::size_t i) const { return v_.data() + i * cols_; }

    const std::vector<real>& values() const { return v_; }
    std::vector<real>& values() { return v_; }

    static Mat identity(std::size_t n);
    static Mat random(std::size_t rows, std::size_t cols, std::mt19937_64& rng);

  private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<real> v_;
};

struct GemmConfig {
    std::size_t threads = 1;
    // Cache tile sides; defaults fit a handful of tiles in L2.
    std::size_t block_rows = 64;
    std::size_t block_cols = 64;
    std::size_t block_inner = 64;

    static constexpr std::size_t kMaxThreads = 256;
};

// C = A * B. Work is split into cfg.threads contiguous column partitions of B,
// one worker each; when B has fewer columns than workers the split falls back
// to A's rows. Every element accumulates its inner products in a fixed
// ascending-k order into a double, so the result is identical for every
// thread count and partition shape.
Mat multiply(const Mat& a, const Mat& b, const GemmConfig& cfg = {});

// Naive triple loop with a double accumulator; ground truth for multiply.
Mat multiply_reference(const Mat& a, const Mat& b);

// 2 * rows * inner * cols multiply-adds.
std::uint64_t gemm_flop_count(std::size_t rows, std::size_t inner, std::size_t cols);

struct ProbeResult {
    double flops_per_s = 0.0;
    double median_s = 0.0;
    std::uint64_t flops = 0;
    int reps = 0;
};

// Runs `reps` timed multiplies of a (rows x inner) * (inner x cols) pair after
// one warmup and reports the median throughput. Not safe to run concurrently
// with other probes (timing integrity).
ProbeResult gemm_throughput_probe(std::size_t rows, std::size_t inner, std::size_t cols,
                                  const GemmConfig& cfg, int reps = 5);

// Median memcpy throughput in bytes/s over a buffer much larger than L3.
// Feeds the cost model's per-element-move weight.
double memcpy_bandwidth_probe(std::size_t buffer_bytes = std::size_t(64) << 20,
                              int reps = 5);

}  // namespace convlow
