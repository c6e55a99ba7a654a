#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace convlow {

// Element type for tensors and matrices. Accumulations are free to use a
// wider type internally; storage is always 32-bit.
using real = float;

inline constexpr std::size_t kRealBytes = sizeof(real);

// Bad shapes, bad files, bad flag combinations.
struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Allocation failures and probe setups that exceed the memory budget.
struct resource_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace convlow
