#pragma once

// Imbalance protocol: majority undersampling, Universum points by pair
// averaging, and the Universum budgets r and g.

#include "qsurf/dataset.hpp"

#include <cstdint>
#include <optional>

namespace qsurf {

inline constexpr double kDefaultUniversumFraction = 0.10;

struct UniversumOptions {
    double fraction = kDefaultUniversumFraction;  // in (0, 1]
    /// Number of points to emit; nullopt emits one point per pool pair.
    std::optional<std::size_t> count;
};

/// Draws ⌈fraction·|I₁|⌉ positives and ⌈fraction·|I₂|⌉ negatives, shuffles
/// all (positive, negative) pairs and emits their midpoints in that order,
/// cycling through the pair list when `count` exceeds it.
Matrix gen_universum_avg(const LabeledDataset& ds, const UniversumOptions& opts, std::uint64_t seed);

struct UndersampledPair {
    Matrix A;        // all minority points
    Matrix B_tilde;  // |I₁| majority points drawn without replacement
    std::vector<std::size_t> majority_rows;  // rows of ds behind B_tilde
};

UndersampledPair undersample_majority(const LabeledDataset& ds, std::uint64_t seed);

struct UniversumBudgets {
    std::size_t r = 0;  // |I₂| − |I₁|
    std::size_t g = 0;  // ⌈|I₁|/2⌉
};

UniversumBudgets universum_budgets(std::size_t n_minority, std::size_t n_majority);

/// g rows of U drawn uniformly without replacement.
Matrix reduce_universum(const Matrix& U, std::size_t g, std::uint64_t seed);

/// Everything the imbalance models consume, built from one training split.
struct UniversumSet {
    Matrix U;
    Matrix U_hat;
    std::size_t r = 0;
    std::size_t g = 0;         // after clamping to r
    std::size_t g_nominal = 0; // ⌈|I₁|/2⌉ before clamping
    std::uint64_t seed = 0;
};

struct ImbalanceSample {
    UndersampledPair pair;
    UniversumSet universum;
};

/// Undersamples B, builds U with r points and reduces it to Û with
/// g = min(⌈|I₁|/2⌉, r) points. Each step draws from its own seed stream.
ImbalanceSample imbalance_sample(const LabeledDataset& ds, std::uint64_t seed,
                                 double fraction = kDefaultUniversumFraction);

}  // namespace qsurf
