#pragma once

// Friedman / Nemenyi / Wilcoxon comparison of classifiers across datasets.
// Pure functions of their numeric inputs.

#include "qsurf/embed.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsurf {

/// p datasets × q models. Rank 1 = highest accuracy; ties share the average rank.
struct RankTable {
    std::vector<std::string> datasets;
    std::vector<std::string> models;
    Matrix accuracy;
    Matrix ranks;
    Vector average;
    // True when `average` was supplied by the caller instead of derived from `ranks`.
    bool average_given = false;

    int p() const { return static_cast<int>(accuracy.rows()); }
    int q() const { return static_cast<int>(accuracy.cols()); }
};

/// Accuracies closer than `tie_tol` are treated as tied.
RankTable rank_table(const Matrix& accuracy, std::vector<std::string> datasets = {},
                     std::vector<std::string> models = {}, double tie_tol = 1e-9);

struct FriedmanResult {
    int p = 0;
    int q = 0;
    double chi2 = 0.0;
    double ff = 0.0;  // +inf when chi2 >= p(q-1)
    double critical = 0.0;
    double alpha = 0.05;
    bool reject = false;
};

FriedmanResult friedman_test(const RankTable& ranks, double alpha = 0.05);
FriedmanResult friedman_from_average_ranks(const Vector& average_ranks, int p, double alpha = 0.05);

/// Upper-α quantile of F(d1, d2).
double f_critical(double d1, double d2, double alpha);

/// Studentized-range based q_α for α = 0.05, q = 2..10 models.
double nemenyi_q05(int q);
double nemenyi_cd(int p, int q, double q_alpha);

struct NemenyiResult {
    double q_alpha = 0.0;
    double cd = 0.0;
    std::vector<std::vector<bool>> significant;  // |R_i − R_j| > CD
};

NemenyiResult nemenyi(const Vector& average_ranks, int p, double q_alpha);

struct WilcoxonResult {
    int p = 0;
    double r_plus = 0.0;
    double r_minus = 0.0;
    double r_min = 0.0;
    double z = 0.0;
    double z_critical = -1.96;
    bool reject = false;
};

/// Deltas with |δ| ≤ 1e−12 count as zero and split their rank evenly.
/// Rejects when z < z_critical (−1.96 at α = 0.05). Requires p ≥ 5.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& deltas, double alpha = 0.05);

struct StatsReport {
    RankTable table;
    FriedmanResult friedman;
    NemenyiResult nemenyi;
    std::optional<WilcoxonResult> wilcoxon;
    std::string proposed;
    std::string baseline;
};

/// Full report; the Wilcoxon pair defaults to the two best-ranked models.
StatsReport compute_stats(const RankTable& table, double alpha = 0.05, const std::string& proposed = {},
                          const std::string& baseline = {});
std::string format_stats(const StatsReport& r);

}  // namespace qsurf
