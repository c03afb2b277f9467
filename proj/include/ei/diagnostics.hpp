#pragma once

#include <vector>

namespace ei {

// Gelman-Rubin potential scale reduction factor over >= 2 equal-length
// chains. Degenerate chains (zero variance everywhere) yield exactly 1.
double potential_scale_reduction(const std::vector<std::vector<double>>& chains);

// Effective sample size across chains via Geyer's initial positive sequence
// on the chain-averaged autocovariances. Clamped to [1, total draws].
double effective_sample_size(const std::vector<std::vector<double>>& chains);

// Type-7 (linear interpolation) quantile of a sample; q in [0, 1].
// Sorts a copy; callers with presorted data use quantile_sorted.
double quantile(std::vector<double> xs, double q);
double quantile_sorted(const std::vector<double>& sorted, double q);

}  // namespace ei
