// Copyright 2026 The bdc Authors.
// Licensed under the Apache License, Version 2.0.

#include <cmath>

#include "bdc/bilevel.hpp"

namespace bdc {

std::optional<double> percent_gap(std::optional<double> z, std::optional<double> bound) {
  if (!z || !bound || *z == 0.0 || !std::isfinite(*z) || !std::isfinite(*bound))
    return std::nullopt;
  return 100.0 * (*z - *bound) / std::abs(*z);
}

Gaps compute_gaps(std::optional<double> z_star, std::optional<double> lower_bound,
                  std::optional<double> root_incumbent, std::optional<double> root_bound,
                  std::optional<double> best_known) {
  Gaps g;
  g.gap = percent_gap(z_star, lower_bound);
  g.gap_star = percent_gap(best_known, lower_bound);
  g.rgap = percent_gap(root_incumbent, root_bound);
  g.rgap_star = percent_gap(best_known, root_bound);
  return g;
}

void apply_gaps(BilevelResult& r, std::optional<double> best_known) {
  std::optional<double> z;
  if (r.z_star) z = to_double(*r.z_star);
  const auto g = compute_gaps(z, r.lower_bound, r.root_incumbent, r.root_bound, best_known);
  r.record.gap = g.gap;
  r.record.gap_star = g.gap_star;
  r.record.rgap = g.rgap;
  r.record.rgap_star = g.rgap_star;
}

}  // namespace bdc
