// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <cstddef>
#include <string_view>

// Dense vector kernels used by the factorizations and simplex updates.
// Every kernel has a scalar reference implementation and, on x86-64, an
// AVX2 variant. The variants accumulate in the same lane order as the scalar
// code, so results are bit-identical across instruction sets.
namespace bdc::kernels {

enum class Isa { kScalar, kAvx2 };

double dot(const double* a, const double* b, std::size_t n);
// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void scale(double alpha, double* x, std::size_t n);

// Runtime selection. The initial choice honours BDC_SIMD=scalar|avx2 and
// otherwise picks the best ISA supported by the CPU.
Isa active_isa();
bool isa_available(Isa isa);
// Returns false (and leaves the selection unchanged) if isa is unavailable.
bool set_isa(Isa isa);
std::string_view isa_name(Isa isa);

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace scalar

#if defined(BDC_HAVE_AVX2)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
double sumsq(const double* a, std::size_t n);
double max_abs(const double* a, std::size_t n);
void scale(double alpha, double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace bdc::kernels
