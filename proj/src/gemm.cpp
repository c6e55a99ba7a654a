#include "convlow/gemm.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <sstream>
#include <thread>

namespace convlow {

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

void check_multiply_dims(const Mat& a, const Mat& b, const GemmConfig& cfg) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "gemm dimension mismatch: A is " << a.rows() << "x" << a.cols()
           << ", B is " << b.rows() << "x" << b.cols();
        throw config_error(os.str());
    }
    if (cfg.threads < 1 || cfg.threads > GemmConfig::kMaxThreads) {
        throw config_error("gemm thread count must be in [1, " +
                           std::to_string(GemmConfig::kMaxThreads) + "], got " +
                           std::to_string(cfg.threads));
    }
    if (cfg.block_rows < 1 || cfg.block_cols < 1 || cfg.block_inner < 1) {
        throw config_error("gemm block sizes must be >= 1");
    }
}

// Computes C[r0:r1, c0:c1]. Accumulates each output element in a double over
// the full inner dimension in ascending-k order; the tile walk only changes
// locality, never the per-element summation order.
void gemm_panel(const Mat& a, const Mat& b, Mat& c,
                std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1,
                const GemmConfig& cfg) {
    const std::size_t inner = a.cols();
    std::vector<double> acc(cfg.block_rows * cfg.block_cols);

    for (std::size_t i0 = r0; i0 < r1; i0 += cfg.block_rows) {
        const std::size_t ilim = std::min(i0 + cfg.block_rows, r1);
        for (std::size_t j0 = c0; j0 < c1; j0 += cfg.block_cols) {
            const std::size_t jlim = std::min(j0 + cfg.block_cols, c1);
            const std::size_t tw = jlim - j0;

            std::fill(acc.begin(), acc.begin() + (ilim - i0) * tw, 0.0);
            for (std::size_t k0 = 0; k0 < inner; k0 += cfg.block_inner) {
                const std::size_t klim = std::min(k0 + cfg.block_inner, inner);
                for (std::size_t i = i0; i < ilim; ++i) {
                    double* arow = acc.data() + (i - i0) * tw;
                    const real* ai = a.row(i);
                    for (std::size_t k = k0; k < klim; ++k) {
                        const double aik = double(ai[k]);
                        const real* bk = b.row(k) + j0;
                        for (std::size_t j = 0; j < tw; ++j)
                            arow[j] += aik * double(bk[j]);
                    }
                }
            }
            for (std::size_t i = i0; i < ilim; ++i) {
                real* ci = c.row(i) + j0;
                const double* arow = acc.data() + (i - i0) * tw;
                for (std::size_t j = 0; j < tw; ++j) ci[j] = real(arow[j]);
            }
        }
    }
}

}  // namespace

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = real(1);
    return m;
}

Mat Mat::random(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
    Mat m(rows, cols);
    std::uniform_real_distribution<real> dist(real(-1), real(1));
    for (auto& x : m.v_) x = dist(rng);
    return m;
}

std::uint64_t gemm_flop_count(std::size_t rows, std::size_t inner, std::size_t cols) {
    return 2ull * rows * inner * cols;
}

Mat multiply(const Mat& a, const Mat& b, const GemmConfig& cfg) {
    check_multiply_dims(a, b, cfg);
    Mat c(a.rows(), b.cols());
    if (c.size() == 0 || a.cols() == 0) return c;

    const std::size_t t = cfg.threads;
    const bool split_cols = b.cols() >= t;  // thin B: fall back to row split
    const std::size_t extent = split_cols ? b.cols() : a.rows();

    auto run_chunk = [&](std::size_t w) {
        const std::size_t lo = w * extent / t;
        const std::size_t hi = (w + 1) * extent / t;
        if (lo == hi) return;
        if (split_cols)
            gemm_panel(a, b, c, 0, a.rows(), lo, hi, cfg);
        else
            gemm_panel(a, b, c, lo, hi, 0, b.cols(), cfg);
    };

    if (t == 1) {
        run_chunk(0);
        return c;
    }
    std::vector<std::thread> workers;
    workers.reserve(t - 1);
    for (std::size_t w = 1; w < t; ++w) workers.emplace_back(run_chunk, w);
    run_chunk(0);
    for (auto& th : workers) th.join();
    return c;
}

Mat multiply_reference(const Mat& a, const Mat& b) {
    if (a.cols() != b.rows()) {
        std::ostringstream os;
        os << "gemm dimension mismatch: A is " << a.rows() << "x" << a.cols()
           << ", B is " << b.rows() << "x" << b.cols();
        throw config_error(os.str());
    }
    Mat c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            double acc = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                acc += double(a.at(i, k)) * double(b.at(k, j));
            c.at(i, j) = real(acc);
        }
    }
    return c;
}

ProbeResult gemm_throughput_probe(std::size_t rows, std::size_t inner, std::size_t cols,
                                  const GemmConfig& cfg, int reps) {
    if (reps < 1) throw config_error("probe needs reps >= 1");
    const std::uint64_t elems =
        std::uint64_t(rows) * inner + std::uint64_t(inner) * cols + std::uint64_t(rows) * cols;
    if (elems * kRealBytes > (std::uint64_t(4) << 30)) {
        throw resource_error("probe shape exceeds the 4 GiB working-set budget");
    }

    try {
        std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
        const Mat a = Mat::random(rows, inner, rng);
        const Mat b = Mat::random(inner, cols, rng);

        volatile real sink = 0;  // keep the result live
        (void)multiply(a, b, cfg);  // warmup
        std::vector<double> times;
        times.reserve(std::size_t(reps));
        for (int rep = 0; rep < reps; ++rep) {
            const auto t0 = clock_type::now();
            Mat c = multiply(a, b, cfg);
            times.push_back(seconds_since(t0));
            sink = sink + c.at(0, 0);
        }
        std::sort(times.begin(), times.end());
        const double median = times[times.size() / 2];

        ProbeResult res;
        res.flops = gemm_flop_count(rows, inner, cols);
        res.median_s = median;
        res.flops_per_s = median > 0 ? double(res.flops) / median : 0.0;
        res.reps = reps;
        return res;
    } catch (const std::bad_alloc&) {
        throw resource_error("probe allocation failed");
    }
}

double memcpy_bandwidth_probe(std::size_t buffer_bytes, int reps) {
    if (reps < 1) throw config_error("probe needs reps >= 1");
    try {
        std::vector<char> src(buffer_bytes, 1), dst(buffer_bytes, 0);
        std::memcpy(dst.data(), src.data(), buffer_bytes);  // warmup
        std::vector<double> times;
        times.reserve(std::size_t(reps));
        for (int rep = 0; rep < reps; ++rep) {
            const auto t0 = clock_type::now();
            std::memcpy(dst.data(), src.data(), buffer_bytes);
            times.push_back(seconds_since(t0));
            src[std::size_t(rep) % buffer_bytes] = char(rep + 2);
        }
        std::sort(times.begin(), times.end());
        const double median = times[times.size() / 2];
        return median > 0 ? double(buffer_bytes) / median : 0.0;
    } catch (const std::bad_alloc&) {
        throw resource_error("bandwidth probe allocation failed");
    }
}

}  // namespace convlow
