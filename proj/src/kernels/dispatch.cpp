#include <atomic>
#include <cstdlib>
#include <string>

#include "geovec/error.hpp"
#include "geovec/kernels.hpp"

namespace geovec::kernels {

#if defined(GEOVEC_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

namespace {

const KernelTable* choose_from_environment() {
  const char* env = std::getenv("GEOVEC_KERNELS");
  const std::string choice = env ? env : "auto";
  if (choice == "scalar") return &scalar_table();
  if (const KernelTable* avx = avx2_table()) return avx;
  return &scalar_table();
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{choose_from_environment()};
  return table;
}

}  // namespace

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
  }
  return "unknown";
}

const KernelTable* avx2_table() {
#if defined(GEOVEC_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return &avx2_table_impl();
#endif
  return nullptr;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void force(Isa isa) {
  const KernelTable* table = isa == Isa::Scalar ? &scalar_table() : avx2_table();
  if (table == nullptr) {
    throw Error(ErrorKind::MalformedInput, "kernel variant not available: " +
                                               std::string(to_string(isa)));
  }
  current().store(table, std::memory_order_release);
}

}  // namespace geovec::kernels
