#pragma once

#include <span>
#include <string_view>

namespace geovec::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

// Inner-loop primitives with one implementation per instruction set. The
// scalar table is the reference; every other table is tested against it.
struct KernelTable {
  Isa isa;
  // Sum of a[i] * b[i].
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y[i] += alpha * x[i]. Bit-identical across tables (no fused multiply-add).
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  // Sum of (a[i] - b[i])^2.
  double (*squared_distance)(const double* a, const double* b, std::size_t n);
};

const KernelTable& scalar_table();
// nullptr when the variant was not compiled in or the CPU lacks support.
const KernelTable* avx2_table();

// Chosen once: GEOVEC_KERNELS=scalar|avx2|auto (default auto = best supported).
const KernelTable& active();

// Forces a table for the rest of the process. Intended for tests and
// benchmarks; not thread-safe against concurrent kernel calls.
void force(Isa isa);

inline double dot(std::span<const double> a, std::span<const double> b) {
  return active().dot(a.data(), b.data(), a.size());
}
inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  active().axpy(alpha, x.data(), y.data(), x.size());
}
inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  return active().squared_distance(a.data(), b.data(), a.size());
}

}  // namespace geovec::kernels
