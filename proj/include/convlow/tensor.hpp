#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "convlow/common.hpp"

namespace convlow {

// Problem shape of one convolution layer: square n x n x d inputs, o square
// k x k x d kernels, batch of b images. m = n - k + 1 output side (stride 1,
// no padding).
struct LayerConfig {
    std::size_t n = 0;
    std::size_t k = 0;
    std::size_t d = 0;
    std::size_t o = 0;
    std::size_t b = 0;

    std::size_t m() const { return n - k + 1; }

    // Throws config_error if any of 1 <= k <= n, d >= 1, o >= 1, b >= 1 fails.
    void validate() const;
};

// Dense order-3 tensor, rows == cols == n. Storage is depth-minor, row-major
// over (r, c):
//
//   index(r, c, i) = (r * n + c) * depth + i
//
// so the depth fiber at a pixel, and a run of consecutive pixels within one
// row, are contiguous. Every lowering in this project flattens slices in this
// same order.
class Tensor3 {
  public:
    Tensor3() = default;
    Tensor3(std::size_t n, std::size_t depth)
        : n_(n), depth_(depth), v_(n * n * depth, real(0)) {}

    std::size_t rows() const { return n_; }
    std::size_t cols() const { return n_; }
    std::size_t depth() const { return depth_; }
    std::size_t size() const { return v_.size(); }

    real& at(std::size_t r, std::size_t c, std::size_t i) {
        return v_[(r * n_ + c) * depth_ + i];
    }
    real at(std::size_t r, std::size_t c, std::size_t i) const {
        return v_[(r * n_ + c) * depth_ + i];
    }

    // Contiguous depth fiber D[r, c, :].
    const real* fiber(std::size_t r, std::size_t c) const {
        return v_.data() + (r * n_ + c) * depth_;
    }

    const std::vector<real>& values() const { return v_; }
    std::vector<real>& values() { return v_; }

    static Tensor3 random(std::size_t n, std::size_t depth, std::mt19937_64& rng);

  private:
    std::size_t n_ = 0;
    std::size_t depth_ = 0;
    std::vector<real> v_;
};

// o kernels of shape k x k x depth. Storage: kernel-major, then the same
// depth-minor order as Tensor3: index(j, r, c, i) = ((j*k + r)*k + c)*d + i.
class KernelBank {
  public:
    KernelBank() = default;
    KernelBank(std::size_t k, std::size_t depth, std::size_t o)
        : k_(k), depth_(depth), o_(o), v_(k * k * depth * o, real(0)) {}

    std::size_t k() const { return k_; }
    std::size_t depth() const { return depth_; }
    std::size_t o() const { return o_; }

    real& at(std::size_t j, std::size_t r, std::size_t c, std::size_t i) {
        return v_[((j * k_ + r) * k_ + c) * depth_ + i];
    }
    real at(std::size_t j, std::size_t r, std::size_t c, std::size_t i) const {
        return v_[((j * k_ + r) * k_ + c) * depth_ + i];
    }

    // Contiguous depth fiber K_j[r, c, :].
    const real* fiber(std::size_t j, std::size_t r, std::size_t c) const {
        return v_.data() + ((j * k_ + r) * k_ + c) * depth_;
    }

    static KernelBank random(std::size_t k, std::size_t depth, std::size_t o,
                             std::mt19937_64& rng);

  private:
    std::size_t k_ = 0;
    std::size_t depth_ = 0;
    std::size_t o_ = 0;
    std::vector<real> v_;
};

// Batch of images, all with identical (n, n, d).
class DataBatch {
  public:
    DataBatch() = default;
    explicit DataBatch(std::vector<Tensor3> images);

    std::size_t b() const { return images_.size(); }
    const Tensor3& operator[](std::size_t i) const { return images_[i]; }
    std::span<const Tensor3> images() const { return images_; }
    std::span<const Tensor3> slice(std::size_t first, std::size_t count) const {
        return std::span<const Tensor3>(images_).subspan(first, count);
    }

    static DataBatch random(std::size_t b, std::size_t n, std::size_t depth,
                            std::mt19937_64& rng);

  private:
    std::vector<Tensor3> images_;
};

// Single m x m output plane, row-major.
struct OutputPlane {
    std::size_t m = 0;
    std::vector<real> v;

    OutputPlane() = default;
    explicit OutputPlane(std::size_t m_) : m(m_), v(m_ * m_, real(0)) {}
    real& at(std::size_t r, std::size_t c) { return v[r * m + c]; }
    real at(std::size_t r, std::size_t c) const { return v[r * m + c]; }
};

// b*o output planes, image-major then kernel:
// plane(q, j) starts at ((q*o + j) * m*m), each plane row-major.
class OutputBatch {
  public:
    OutputBatch() = default;
    OutputBatch(std::size_t b, std::size_t o, std::size_t m)
        : b_(b), o_(o), m_(m), v_(b * o * m * m, real(0)) {}

    std::size_t b() const { return b_; }
    std::size_t o() const { return o_; }
    std::size_t m() const { return m_; }
    std::size_t size() const { return v_.size(); }

    real& at(std::size_t q, std::size_t j, std::size_t r, std::size_t c) {
        return v_[((q * o_ + j) * m_ + r) * m_ + c];
    }
    real at(std::size_t q, std::size_t j, std::size_t r, std::size_t c) const {
        return v_[((q * o_ + j) * m_ + r) * m_ + c];
    }

    real* plane(std::size_t q, std::size_t j) {
        return v_.data() + (q * o_ + j) * m_ * m_;
    }
    const real* plane(std::size_t q, std::size_t j) const {
        return v_.data() + (q * o_ + j) * m_ * m_;
    }

    const std::vector<real>& values() const { return v_; }
    std::vector<real>& values() { return v_; }

  private:
    std::size_t b_ = 0, o_ = 0, m_ = 0;
    std::vector<real> v_;
};

// Shape of (batch, bank) as a LayerConfig; throws config_error naming both
// shapes when they are incompatible.
LayerConfig layer_of(const DataBatch& batch, const KernelBank& bank);

// R[r,c] = sum_i sum_c' sum_r' D[r+r', c+c', i] * K_j[r', c', i], evaluated
// in exactly that loop order with a double accumulator. This is the
// correctness oracle for every lowered path.
OutputPlane direct_convolve(const Tensor3& data, const KernelBank& bank,
                            std::size_t kernel_index = 0);

// out[q][j] = direct_convolve(batch[q], bank, j), bit-identical to the b*o
// independent calls.
OutputBatch direct_convolve_batch(const DataBatch& batch, const KernelBank& bank);

}  // namespace convlow
