#include "pmlab/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace pmlab::kern {

bool cpu_has_avx2() {
#if defined(__x86_64__)
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

namespace {

const KernelTable* resolve(std::string_view name) {
  if (name == "scalar") return &scalar_table();
  if (name == "avx2") {
    const KernelTable* t = avx2_table();
    if (!t || !cpu_has_avx2())
      throw std::runtime_error("kernel backend 'avx2' not available on this machine");
    return t;
  }
  if (name == "auto") {
    const KernelTable* t = avx2_table();
    return (t && cpu_has_avx2()) ? t : &scalar_table();
  }
  throw std::runtime_error("unknown kernel backend '" + std::string(name) +
                           "' (expected auto, scalar or avx2)");
}

const KernelTable*& slot() {
  static const KernelTable* current = [] {
    const char* env = std::getenv("PMLAB_KERNELS");
    return resolve(env && *env ? env : "auto");
  }();
  return current;
}

}  // namespace

const KernelTable& active() { return *slot(); }

void select(std::string_view name) { slot() = resolve(name); }

const char* active_name() { return slot()->name; }

}  // namespace pmlab::kern
