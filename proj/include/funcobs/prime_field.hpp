#pragma once

#include <cstdint>
#include <vector>

namespace funcobs {

/// Modulus of the exact-arithmetic oracle field (the Mersenne prime 2^31 - 1).
inline constexpr std::uint32_t kFieldPrime = 2147483647u;

inline std::uint32_t field_add(std::uint32_t a, std::uint32_t b) {
  const std::uint64_t s = static_cast<std::uint64_t>(a) + b;
  return static_cast<std::uint32_t>(s >= kFieldPrime ? s - kFieldPrime : s);
}

inline std::uint32_t field_sub(std::uint32_t a, std::uint32_t b) {
  return a >= b ? a - b : a + kFieldPrime - b;
}

inline std::uint32_t field_mul(std::uint32_t a, std::uint32_t b) {
  return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % kFieldPrime);
}

std::uint32_t field_pow(std::uint32_t base, std::uint64_t exp);

inline std::uint32_t field_inv(std::uint32_t a) { return field_pow(a, kFieldPrime - 2); }

/// Dense matrix over GF(kFieldPrime), the exact cross-check substrate for
/// generic-rank computations.
class PrimeFieldMatrix {
 public:
  PrimeFieldMatrix() = default;
  PrimeFieldMatrix(int rows, int cols) : rows_(rows), cols_(cols), entries_(rows * cols, 0u) {}

  static PrimeFieldMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  std::uint32_t& at(int i, int j) { return entries_[static_cast<std::size_t>(i) * cols_ + j]; }
  std::uint32_t at(int i, int j) const {
    return entries_[static_cast<std::size_t>(i) * cols_ + j];
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<std::uint32_t> entries_;
};

PrimeFieldMatrix field_matmul(const PrimeFieldMatrix& a, const PrimeFieldMatrix& b);
PrimeFieldMatrix field_vstack(const PrimeFieldMatrix& top, const PrimeFieldMatrix& bottom);

/// Exact rank over the prime field via Gaussian elimination.
int prime_field_rank(PrimeFieldMatrix m);

/// col{C, CA, ..., CA^(n-1)} over the field.
PrimeFieldMatrix field_observability_matrix(const PrimeFieldMatrix& a, const PrimeFieldMatrix& c);

/// [B, AB, ..., A^(n-1)B] over the field.
PrimeFieldMatrix field_controllability_matrix(const PrimeFieldMatrix& a,
                                              const PrimeFieldMatrix& b);

}  // namespace funcobs
