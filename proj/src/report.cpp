#include "qsurf/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace qsurf {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

// Display width in code points, so "±" counts once.
std::size_t width(const std::string& s) {
    return static_cast<std::size_t>(std::count_if(s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

std::vector<TextRow> accuracy_rows(const RankTable& t, const Matrix* sd, bool markdown) {
    std::vector<TextRow> rows;
    for (int i = 0; i < t.p(); ++i) {
        TextRow r{t.datasets[static_cast<std::size_t>(i)]};
        for (int j = 0; j < t.q(); ++j) {
            std::string cell = fixed(t.accuracy(i, j), 2);
            if (markdown && sd) cell += " ± " + fixed((*sd)(i, j), 2);
            r.push_back(cell);
        }
        rows.push_back(std::move(r));
    }
    TextRow rank{"average rank"};
    for (int j = 0; j < t.q(); ++j) rank.push_back(fixed(t.average(j), 2));
    rows.push_back(std::move(rank));
    return rows;
}

TextRow with_first(const std::string& first, const std::vector<std::string>& rest) {
    TextRow h{first};
    h.insert(h.end(), rest.begin(), rest.end());
    return h;
}

std::vector<TextRow> timing_rows(const std::vector<std::string>& datasets, const Matrix& s) {
    std::vector<TextRow> rows;
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        TextRow r{datasets[i]};
        for (Eigen::Index j = 0; j < s.cols(); ++j) {
            const double v = s(static_cast<Eigen::Index>(i), j);
            r.push_back(std::isnan(v) ? "n/a" : fixed(v, 4));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

std::string fixed(double v, int digits) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::ostringstream o;
    o.setf(std::ios::fixed);
    o.precision(digits);
    o << v;
    std::string s = o.str();
    if (s.find_first_not_of("-0.") == std::string::npos && s[0] == '-') s.erase(0, 1);  // no "-0.00"
    return s;
}

std::string csv_table(const TextRow& header, const std::vector<TextRow>& rows) {
    std::ostringstream o;
    auto line = [&](const TextRow& r) {
        for (std::size_t i = 0; i < r.size(); ++i) o << (i ? "," : "") << csv_escape(r[i]);
        o << "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return o.str();
}

std::string markdown_table(const TextRow& header, const std::vector<TextRow>& rows) {
    std::vector<std::size_t> w(header.size(), 3);
    auto grow = [&](const TextRow& r) {
        for (std::size_t i = 0; i < r.size() && i < w.size(); ++i) w[i] = std::max(w[i], width(r[i]));
    };
    grow(header);
    for (const auto& r : rows) grow(r);
    std::ostringstream o;
    auto line = [&](const TextRow& r) {
        o << "|";
        for (std::size_t i = 0; i < w.size(); ++i) {
            const std::string c = i < r.size() ? r[i] : "";
            const std::string pad(w[i] - width(c), ' ');
            o << " " << (i == 0 ? c + pad : pad + c) << " |";
        }
        o << "\n";
    };
    line(header);
    o << "|";
    for (std::size_t i = 0; i < w.size(); ++i)
        o << (i == 0 ? " :" + std::string(w[i] - 1, '-') : " " + std::string(w[i] - 1, '-') + ":") << " |";
    o << "\n";
    for (const auto& r : rows) line(r);
    return o.str();
}

std::string accuracy_csv(const RankTable& t, const Matrix* sd) {
    return csv_table(with_first("dataset", t.models), accuracy_rows(t, sd, false));
}

std::string accuracy_markdown(const RankTable& t, const Matrix* sd) {
    return markdown_table(with_first("dataset", t.models), accuracy_rows(t, sd, true));
}

std::string timing_csv(const std::vector<std::string>& datasets, const std::vector<std::string>& models,
                       const Matrix& seconds) {
    return csv_table(with_first("dataset", models), timing_rows(datasets, seconds));
}

std::string timing_markdown(const std::vector<std::string>& datasets, const std::vector<std::string>& models,
                            const Matrix& seconds) {
    return markdown_table(with_first("dataset", models), timing_rows(datasets, seconds));
}

std::string params_csv(const std::vector<CVReport>& reports) {
    std::vector<TextRow> rows;
    for (const auto& r : reports) {
        std::string params;
        for (const auto& name : ModelParams::names()) {
            const double v = r.params.get(name);
            if (name == "delta" && v < 0) continue;
            params += (params.empty() ? "" : ";") + name + "=" + fixed(v, 6);
        }
        std::string point;
        for (const auto& [k, v] : r.grid_point) point += (point.empty() ? "" : ";") + k + "=" + fixed(v, 6);
        rows.push_back({r.model_id, r.dataset_id, fixed(r.mean(), 4), fixed(r.stddev(), 4), fixed(r.mean_balanced(), 4),
                        fixed(r.mean_f1(), 4), std::to_string(r.entries.size() - r.failures()),
                        std::to_string(r.failures()), point, params});
    }
    return csv_table({"model", "dataset", "accuracy", "std", "balanced_accuracy", "f1", "cells_ok", "cells_failed",
                      "grid_point", "params"},
                     rows);
}

std::string cv_details_csv(const std::vector<CVReport>& reports) {
    std::vector<TextRow> rows;
    for (const auto& r : reports)
        for (const auto& e : r.entries)
            rows.push_back({r.model_id, r.dataset_id, std::to_string(e.repeat), std::to_string(e.fold),
                            e.ok ? "1" : "0", e.ok ? fixed(e.metrics.accuracy, 10) : "",
                            e.ok ? fixed(e.metrics.balanced_accuracy, 10) : "", e.ok ? fixed(e.metrics.f1, 10) : "",
                            e.error});
    return csv_table({"model", "dataset", "repeat", "fold", "ok", "accuracy", "balanced_accuracy", "f1", "error"}, rows);
}

RankTable load_accuracy_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
    const auto header = split_csv_line(line);
    if (header.size() < 3) throw std::runtime_error(path.string() + ": need a dataset column and at least 2 models");
    std::vector<std::string> models(header.begin() + 1, header.end());
    std::vector<std::string> datasets;
    std::vector<std::vector<double>> values;
    std::optional<std::vector<double>> given_ranks;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(header.size()) + " cells");
        std::vector<double> row;
        for (std::size_t j = 1; j < cells.size(); ++j) {
            std::size_t used = 0;
            double v = 0;
            try {
                v = std::stod(cells[j], &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != cells[j].size())
                throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": column " +
                                         std::to_string(j + 1) + " is not numeric");
            row.push_back(v);
        }
        if (lower(cells[0]).rfind("average rank", 0) == 0) {
            if (given_ranks) throw std::runtime_error(path.string() + ": more than one average rank row");
            given_ranks = std::move(row);
            continue;
        }
        datasets.push_back(cells[0]);
        values.push_back(std::move(row));
    }
    Matrix acc(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(models.size()));
    for (std::size_t i = 0; i < values.size(); ++i)
        for (std::size_t j = 0; j < models.size(); ++j)
            acc(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = values[i][j];
    RankTable t = rank_table(acc, datasets, models);
    if (given_ranks) {
        if (given_ranks->size() != models.size()) throw std::runtime_error(path.string() + ": average rank row has the wrong length");
        t.average = Eigen::Map<const Vector>(given_ranks->data(), static_cast<Eigen::Index>(given_ranks->size()));
        t.average_given = true;
    }
    return t;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace qsurf
