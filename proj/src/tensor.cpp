#include "convlow/tensor.hpp"

#include <sstream>

namespace convlow {

namespace {

std::string tensor_shape_str(const Tensor3& t) {
    std::ostringstream os;
    os << t.rows() << "x" << t.cols() << "x" << t.depth();
    return os.str();
}

std::string bank_shape_str(const KernelBank& bk) {
    std::ostringstream os;
    os << bk.k() << "x" << bk.k() << "x" << bk.depth() << " (o=" << bk.o() << ")";
    return os.str();
}

}  // namespace

void LayerConfig::validate() const {
    std::ostringstream os;
    if (k < 1 || k > n || d < 1 || o < 1 || b < 1) {
        os << "invalid layer config (n=" << n << ", k=" << k << ", d=" << d
           << ", o=" << o << ", b=" << b << "): need 1 <= k <= n, d >= 1, o >= 1, b >= 1";
        throw config_error(os.str());
    }
}

Tensor3 Tensor3::random(std::size_t n, std::size_t depth, std::mt19937_64& rng) {
    Tensor3 t(n, depth);
    std::uniform_real_distribution<real> dist(real(-1), real(1));
    for (auto& x : t.v_) x = dist(rng);
    return t;
}

KernelBank KernelBank::random(std::size_t k, std::size_t depth, std::size_t o,
                              std::mt19937_64& rng) {
    KernelBank bk(k, depth, o);
    std::uniform_real_distribution<real> dist(real(-1), real(1));
    for (auto& x : bk.v_) x = dist(rng);
    return bk;
}

DataBatch::DataBatch(std::vector<Tensor3> images) : images_(std::move(images)) {
    if (images_.empty()) throw config_error("batch must hold at least one image");
    for (const auto& img : images_) {
        if (img.rows() != images_[0].rows() || img.depth() != images_[0].depth()) {
            throw config_error("batch images must share one shape: found " +
                               tensor_shape_str(img) + " and " +
                               tensor_shape_str(images_[0]));
        }
    }
}

DataBatch DataBatch::random(std::size_t b, std::size_t n, std::size_t depth,
                            std::mt19937_64& rng) {
    std::vector<Tensor3> images;
    images.reserve(b);
    for (std::size_t i = 0; i < b; ++i) images.push_back(Tensor3::random(n, depth, rng));
    return DataBatch(std::move(images));
}

LayerConfig layer_of(const DataBatch& batch, const KernelBank& bank) {
    const Tensor3& first = batch[0];
    if (bank.depth() != first.depth() || bank.k() > first.rows()) {
        throw config_error("kernel bank " + bank_shape_str(bank) +
                           " incompatible with data tensor " + tensor_shape_str(first));
    }
    LayerConfig layer{first.rows(), bank.k(), first.depth(), bank.o(), batch.b()};
    layer.validate();
    return layer;
}

OutputPlane direct_convolve(const Tensor3& data, const KernelBank& bank,
                            std::size_t kernel_index) {
    if (bank.depth() != data.depth() || bank.k() > data.rows()) {
        throw config_error("kernel bank " + bank_shape_str(bank) +
                           " incompatible with data tensor " + tensor_shape_str(data));
    }
    if (kernel_index >= bank.o()) {
        throw config_error("kernel index " + std::to_string(kernel_index) +
                           " out of range for bank " + bank_shape_str(bank));
    }

    const std::size_t n = data.rows();
    const std::size_t k = bank.k();
    const std::size_t d = data.depth();
    const std::size_t m = n - k + 1;

    OutputPlane out(m);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < m; ++c) {
            double acc = 0.0;
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t cp = 0; cp < k; ++cp)
                    for (std::size_t rp = 0; rp < k; ++rp)
                        acc += double(data.at(r + rp, c + cp, i)) *
                               double(bank.at(kernel_index, rp, cp, i));
            out.at(r, c) = real(acc);
        }
    }
    return out;
}

OutputBatch direct_convolve_batch(const DataBatch& batch, const KernelBank& bank) {
    const LayerConfig layer = layer_of(batch, bank);
    OutputBatch out(layer.b, layer.o, layer.m());
    for (std::size_t q = 0; q < layer.b; ++q) {
        for (std::size_t j = 0; j < layer.o; ++j) {
            OutputPlane plane = direct_convolve(batch[q], bank, j);
            std::copy(plane.v.begin(), plane.v.end(), out.plane(q, j));
        }
    }
    return out;
}

}  // namespace convlow
