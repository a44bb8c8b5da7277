#pragma once

#include "qsurf/dataset.hpp"
#include "qsurf/params.hpp"
#include "qsurf/trainer.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace qsurf {

struct Metrics {
    double accuracy = 0.0;  // fractions in [0,1]
    double balanced_accuracy = 0.0;
    double f1 = 0.0;  // positive class +1
};

Metrics score_labels(const std::vector<int>& truth, const std::vector<int>& predicted);

struct CvEntry {
    int repeat = 0;
    int fold = 0;
    bool ok = false;
    Metrics metrics;
    double fit_seconds = 0.0;
    std::string error;
};

struct CVReport {
    std::string model_id;
    std::string dataset_id;
    ModelParams params;
    std::map<std::string, double> grid_point;  // empty when no grid search ran
    int k = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    std::vector<CvEntry> entries;  // repeat-major, fold-minor
    std::vector<std::string> warnings;

    std::size_t failures() const;
    // Aggregates over successful cells, in percent; std has ddof = 0.
    double mean() const;
    double stddev() const;
    double mean_balanced() const;
    double mean_f1() const;
    double fit_seconds() const;
};

struct CvOptions {
    int k = 5;
    int repeats = 10;
    std::uint64_t seed = 0;
    PrepareOptions prepare;
};

/// Fold plan for one repeat and the RNG seed for one (repeat, fold) cell.
std::uint64_t repeat_seed(std::uint64_t seed, int repeat);
std::uint64_t cell_seed(std::uint64_t seed, int repeat, int fold);

/// Labels predicted for `test` after training on `train`; used to cross-validate
/// arbitrary predictors (raw, unscaled data in both arguments).
using CellPredictor =
    std::function<std::vector<int>(const LabeledDataset& train, const Matrix& test, std::uint64_t cell_seed)>;

CVReport run_cv(const CellPredictor& predictor, const LabeledDataset& ds, const CvOptions& opts);
CVReport run_cv(const std::string& model_id, const LabeledDataset& ds, const ModelParams& p,
                const CvOptions& opts);

/// Axis name → candidate values. Names are ModelParams names or the shared
/// axes C, cu, lambda.
using Grid = std::map<std::string, std::vector<double>>;

Grid default_grid(const ModelSpec& spec);
/// Cartesian product in lexicographic order of the sorted axis values.
std::vector<std::map<std::string, double>> expand_grid(const Grid& grid);

struct GridResult {
    ModelParams best;
    std::map<std::string, double> best_point;
    CVReport report;  // CV of the best point
    std::size_t points = 0;
};

/// Exhaustive search. Best = highest mean accuracy among points with the
/// fewest failed cells; ties go to the lexicographically smallest point.
GridResult grid_search(const std::string& model_id, const LabeledDataset& ds, const Grid& grid,
                       const ModelParams& base, const CvOptions& opts);

struct TimingResult {
    double median = 0.0;  // seconds
    std::vector<double> samples;
    double variance() const;
};

/// Median wall clock of `repeats` full fits (scaling and sampling included).
TimingResult timing_harness(const std::string& model_id, const LabeledDataset& ds, const ModelParams& p,
                            int repeats, std::uint64_t seed, const PrepareOptions& prep = {});

}  // namespace qsurf
