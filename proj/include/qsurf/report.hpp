#pragma once

// CSV and aligned-markdown renderings of benchmark results. Everything is
// returned as strings so callers can write all files at the end of a run.

#include "qsurf/cv.hpp"
#include "qsurf/stats.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace qsurf {

using TextRow = std::vector<std::string>;

std::string csv_table(const TextRow& header, const std::vector<TextRow>& rows);
/// Columns padded to equal width; first column left-aligned, others right-aligned.
std::string markdown_table(const TextRow& header, const std::vector<TextRow>& rows);

std::string fixed(double v, int digits);

/// Datasets × models mean accuracy (percent) plus an "average rank" row.
/// `stddev` (same shape) is optional; markdown cells then read "mean ± std".
std::string accuracy_csv(const RankTable& t, const Matrix* stddev = nullptr);
std::string accuracy_markdown(const RankTable& t, const Matrix* stddev = nullptr);

std::string timing_csv(const std::vector<std::string>& datasets, const std::vector<std::string>& models,
                       const Matrix& seconds);
std::string timing_markdown(const std::vector<std::string>& datasets, const std::vector<std::string>& models,
                            const Matrix& seconds);

/// One row per (model, dataset): chosen params and aggregate metrics.
std::string params_csv(const std::vector<CVReport>& reports);
/// One row per CV cell. Timings are left out so the file is reproducible.
std::string cv_details_csv(const std::vector<CVReport>& reports);

/// Reads a precomputed accuracy matrix: header "dataset,<model>,...", one row
/// per dataset. A row whose first cell starts with "average rank" supplies the
/// average ranks directly (published tables do not always match their cells).
RankTable load_accuracy_table(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qsurf
