// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <atomic>
#include <cstdlib>
#include <string>

#include "bdc/kernels.hpp"

namespace bdc::kernels {
namespace {

struct Table {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  double (*sumsq)(const double*, std::size_t);
  double (*max_abs)(const double*, std::size_t);
  void (*scale)(double, double*, std::size_t);
};

constexpr Table kScalarTable{scalar::dot, scalar::axpy, scalar::sumsq,
                             scalar::max_abs, scalar::scale};
#if defined(BDC_HAVE_AVX2)
constexpr Table kAvx2Table{avx2::dot, avx2::axpy, avx2::sumsq, avx2::max_abs,
                           avx2::scale};
#endif

bool cpu_has_avx2() {
#if defined(BDC_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

const Table* table_for(Isa isa) {
#if defined(BDC_HAVE_AVX2)
  if (isa == Isa::kAvx2) return &kAvx2Table;
#endif
  (void)isa;
  return &kScalarTable;
}

Isa initial_isa() {
  const char* env = std::getenv("BDC_SIMD");
  if (env != nullptr && std::string(env) == "scalar") return Isa::kScalar;
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const Table& active() { return *table_for(current().load(std::memory_order_relaxed)); }

}  // namespace

double dot(const double* a, const double* b, std::size_t n) { return active().dot(a, b, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active().axpy(alpha, x, y, n);
}
double sumsq(const double* a, std::size_t n) { return active().sumsq(a, n); }
double max_abs(const double* a, std::size_t n) { return active().max_abs(a, n); }
void scale(double alpha, double* x, std::size_t n) { active().scale(alpha, x, n); }

Isa active_isa() { return current().load(); }

bool isa_available(Isa isa) { return isa == Isa::kScalar || cpu_has_avx2(); }

bool set_isa(Isa isa) {
  if (!isa_available(isa)) return false;
  current().store(isa);
  return true;
}

std::string_view isa_name(Isa isa) { return isa == Isa::kAvx2 ? "avx2" : "scalar"; }

}  // namespace bdc::kernels
