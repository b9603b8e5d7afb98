// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bdc/model.hpp"

namespace bdc {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Text format:
//
//   bilevel 1
//   dims n1 n2 m1 mt1 m2 nY n3
//   <section keyword>
//   <data lines>
//   ...
//
// Sections appear in the order c d M N h Mt Nt ht cones A B f V g CY UY lb ub.
// A vector is one data line, a matrix one line per row. Sections without data
// lines (zero-length vectors, zero-row matrices, an empty cone list) may be
// omitted; a row of width zero is written as "-". Entries are integers,
// fractions p/q or decimals. '#' starts a comment.
BilevelInstance parse_instance(std::string_view text);
std::string write_instance(const BilevelInstance& inst);

BilevelInstance read_instance_file(const std::string& path);
void write_instance_file(const BilevelInstance& inst, const std::string& path);

struct SolutionRecord {
  RunStatus status = RunStatus::kUnknown;
  std::optional<Rational> objective;
  std::vector<long> x, y;
};

std::string write_solution(const SolutionRecord& sol);
SolutionRecord parse_solution(std::string_view text);

}  // namespace bdc
