#pragma once

#include <cstdint>
#include <string_view>

namespace qct {

inline constexpr double kUnitTol = 1e-9;  // Hermiticity and normalization
inline constexpr double kPsdTol = 1e-8;   // smallest admissible eigenvalue is -kPsdTol

inline constexpr int kDefaultMaxQubits = 12;

/// Largest number of simultaneously live qubits any construction may use.
/// Reads QCT_MAX_QUBITS on every call; defaults to 12.
int max_qubits();

/// Throws CapacityError when `qubits` exceeds max_qubits().
void require_capacity(int qubits, std::string_view what);

/// Largest key length for exact enumeration over keys.
inline constexpr int kMaxEnumeratedKeyBits = 12;

/// Independent 64-bit stream derived from (seed, stream) by splitmix64 mixing.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace qct
