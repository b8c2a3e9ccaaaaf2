#include "qct/config.hpp"

#include <cstdlib>
#include <string>

#include "qct/errors.hpp"

namespace qct {

int max_qubits() {
  const char* env = std::getenv("QCT_MAX_QUBITS");
  if (env == nullptr || *env == '\0') return kDefaultMaxQubits;
  char* end = nullptr;
  long value = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || value < 1 || value > 30) {
    throw DomainError("QCT_MAX_QUBITS must be an integer in [1, 30], got '" +
                      std::string(env) + "'");
  }
  return static_cast<int>(value);
}

void require_capacity(int qubits, std::string_view what) {
  const int cap = max_qubits();
  if (qubits > cap) throw CapacityError(std::string(what), qubits, cap);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace qct
