#include "qsurf/dataset.hpp"

#include "qsurf/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace qsurf {

std::vector<std::size_t> LabeledDataset::indices_of(int label) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) out.push_back(i);
    return out;
}

std::size_t LabeledDataset::count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Matrix select_rows(const Matrix& m, const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i)
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    return out;
}

Matrix LabeledDataset::positives() const { return select_rows(points, indices_of(+1)); }
Matrix LabeledDataset::negatives() const { return select_rows(points, indices_of(-1)); }

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
    LabeledDataset out;
    out.points = select_rows(points, rows);
    out.labels.reserve(rows.size());
    for (auto r : rows) out.labels.push_back(labels.at(r));
    out.name = name;
    out.positive_name = positive_name;
    out.negative_name = negative_name;
    return out;
}

void LabeledDataset::validate() const {
    if (static_cast<Eigen::Index>(labels.size()) != points.rows())
        throw std::invalid_argument("dataset '" + name + "': label count does not match rows");
    if (points.rows() < 2) throw std::invalid_argument("dataset '" + name + "': fewer than 2 points");
    for (int y : labels)
        if (y != 1 && y != -1)
            throw std::invalid_argument("dataset '" + name + "': label outside {+1, -1}");
}

void LabeledDataset::validate_for_training() const {
    validate();
    if (count(1) == 0 || count(-1) == 0)
        throw std::invalid_argument("dataset '" + name + "': both classes must be non-empty");
}

// ---------------------------------------------------------------- CSV

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    for (auto& c : cells) {
        const auto b = c.find_first_not_of(" \t\"");
        const auto e = c.find_last_not_of(" \t\"");
        c = b == std::string::npos ? std::string{} : c.substr(b, e - b + 1);
    }
    return cells;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

std::vector<std::vector<std::string>> read_rows(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        rows.push_back(split_csv_line(line));
    }
    if (rows.empty()) throw std::runtime_error("'" + path.string() + "' is empty");
    return rows;
}

std::string fmt17(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

}  // namespace

LabeledDataset load_csv(const std::filesystem::path& path, const CsvOptions& opts) {
    auto rows = read_rows(path);
    const std::size_t ncol = rows.front().size();
    if (ncol < 2) throw std::runtime_error("'" + path.string() + "': need a feature and a label column");

    // A header row is one whose non-label cells are not all numeric.
    bool has_header = false;
    for (const auto& cell : rows.front())
        if (!parse_double(cell)) has_header = true;
    // A numeric-looking first row can still carry a non-numeric label; only
    // count it as header if any feature cell fails to parse (checked below).

    std::size_t label_col = ncol - 1;
    if (opts.label_column) {
        if (const auto* idx = std::get_if<std::size_t>(&*opts.label_column)) {
            if (*idx >= ncol) throw std::runtime_error("label column index out of range");
            label_col = *idx;
        } else {
            const auto& want = std::get<std::string>(*opts.label_column);
            const auto& head = rows.front();
            auto it = std::find(head.begin(), head.end(), want);
            if (it == head.end())
                throw std::runtime_error("label column '" + want + "' not found in header");
            label_col = static_cast<std::size_t>(it - head.begin());
            has_header = true;
        }
    }
    if (has_header && !opts.label_column) {
        bool features_numeric = true;
        for (std::size_t j = 0; j < ncol; ++j)
            if (j != label_col && !parse_double(rows.front()[j])) features_numeric = false;
        has_header = !features_numeric;
    }

    const std::size_t first = has_header ? 1 : 0;
    const std::size_t m = rows.size() - first;
    LabeledDataset ds;
    ds.name = path.stem().string();
    ds.points.resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(ncol - 1));
    std::vector<std::string> raw(m);
    for (std::size_t r = 0; r < m; ++r) {
        const auto& row = rows[first + r];
        if (row.size() != ncol)
            throw std::runtime_error("'" + path.string() + "' row " + std::to_string(first + r + 1) +
                                     ": expected " + std::to_string(ncol) + " cells, found " +
                                     std::to_string(row.size()));
        Eigen::Index c = 0;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (j == label_col) {
                raw[r] = row[j];
                continue;
            }
            auto v = parse_double(row[j]);
            if (!v)
                throw std::runtime_error("'" + path.string() + "' row " + std::to_string(first + r + 1) +
                                         ", column " + std::to_string(j + 1) + ": non-numeric value '" +
                                         row[j] + "'");
            ds.points(static_cast<Eigen::Index>(r), c++) = *v;
        }
    }

    // Distinct labels in order of first appearance.
    std::vector<std::string> order;
    std::map<std::string, std::size_t> counts;
    for (const auto& s : raw) {
        if (counts[s]++ == 0) order.push_back(s);
    }
    if (order.size() < 2) throw std::runtime_error("'" + path.string() + "': only one class present");
    if (order.size() > 2)
        throw std::runtime_error("'" + path.string() + "': more than two label values (found '" +
                                 order[2] + "')");

    std::string positive;
    if (opts.positive_label) {
        if (!counts.count(*opts.positive_label))
            throw std::runtime_error("'" + path.string() + "': unknown label value '" +
                                     *opts.positive_label + "'");
        positive = *opts.positive_label;
    } else if (counts[order[0]] != counts[order[1]]) {
        positive = counts[order[0]] < counts[order[1]] ? order[0] : order[1];
    } else {
        auto is_one = [](const std::string& s) { return s == "1" || s == "+1"; };
        positive = is_one(order[1]) ? order[1] : order[0];
    }
    ds.positive_name = positive;
    ds.negative_name = order[0] == positive ? order[1] : order[0];
    ds.labels.reserve(m);
    for (const auto& s : raw) ds.labels.push_back(s == positive ? 1 : -1);
    ds.validate();
    return ds;
}

void write_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (Eigen::Index j = 0; j < ds.dim(); ++j) out << 'x' << j + 1 << ',';
    out << "label\n";
    for (Eigen::Index i = 0; i < ds.size(); ++i) {
        for (Eigen::Index j = 0; j < ds.dim(); ++j) out << fmt17(ds.points(i, j)) << ',';
        out << (ds.labels[static_cast<std::size_t>(i)] == 1 ? ds.positive_name : ds.negative_name)
            << '\n';
    }
}

void write_points_csv(const Matrix& points, const std::filesystem::path& path,
                      const std::string& prefix) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    for (Eigen::Index j = 0; j < points.cols(); ++j)
        out << (j ? "," : "") << prefix << j + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < points.rows(); ++i) {
        for (Eigen::Index j = 0; j < points.cols(); ++j)
            out << (j ? "," : "") << fmt17(points(i, j));
        out << '\n';
    }
}

Matrix load_points_csv(const std::filesystem::path& path) {
    auto rows = read_rows(path);
    bool header = false;
    for (const auto& c : rows.front())
        if (!parse_double(c)) header = true;
    const std::size_t first = header ? 1 : 0;
    const std::size_t ncol = rows.front().size();
    Matrix pts(static_cast<Eigen::Index>(rows.size() - first), static_cast<Eigen::Index>(ncol));
    for (std::size_t r = first; r < rows.size(); ++r) {
        if (rows[r].size() != ncol)
            throw std::runtime_error("'" + path.string() + "' row " + std::to_string(r + 1) +
                                     ": wrong number of cells");
        for (std::size_t j = 0; j < ncol; ++j) {
            auto v = parse_double(rows[r][j]);
            if (!v)
                throw std::runtime_error("'" + path.string() + "' row " + std::to_string(r + 1) +
                                         ", column " + std::to_string(j + 1) + ": non-numeric value '" +
                                         rows[r][j] + "'");
            pts(static_cast<Eigen::Index>(r - first), static_cast<Eigen::Index>(j)) = *v;
        }
    }
    return pts;
}

// ---------------------------------------------------------------- folds

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] != fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i)
        if (assignment[i] == fold) out.push_back(i);
    return out;
}

FoldPlan stratified_kfold(const LabeledDataset& ds, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
    ds.validate();
    FoldPlan plan{k, std::vector<int>(ds.labels.size(), -1), seed};
    std::size_t offset = 0;
    for (int label : {1, -1}) {
        auto idx = ds.indices_of(label);
        if (idx.size() < static_cast<std::size_t>(k))
            throw std::invalid_argument("stratified_kfold: class " + std::to_string(label) + " has " +
                                        std::to_string(idx.size()) + " points, fewer than k=" +
                                        std::to_string(k));
        Rng rng(seed, "folds", label == 1 ? 1 : 2);
        rng.shuffle(idx);
        for (std::size_t p = 0; p < idx.size(); ++p)
            plan.assignment[idx[p]] = static_cast<int>((offset + p) % static_cast<std::size_t>(k));
        offset = (offset + idx.size()) % static_cast<std::size_t>(k);
    }
    return plan;
}

// ---------------------------------------------------------------- scaling

Vector ScalerState::apply(const Vector& x) const {
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double range = max(j) - min(j);
        const double v = range > 0.0 ? (x(j) - min(j)) / range : 0.0;
        out(j) = std::clamp(v, kScaledLow, kScaledHigh);
    }
    return out;
}

ScalerState fit_scaler(const LabeledDataset& train) {
    if (train.size() == 0) throw std::invalid_argument("fit_scaler: empty dataset");
    return {train.points.colwise().minCoeff().transpose(), train.points.colwise().maxCoeff().transpose()};
}

Matrix apply_scaler(const ScalerState& s, const Matrix& points) {
    if (points.cols() != s.min.size())
        throw std::invalid_argument("apply_scaler: feature count mismatch");
    Matrix out(points.rows(), points.cols());
    for (Eigen::Index i = 0; i < points.rows(); ++i)
        out.row(i) = s.apply(points.row(i).transpose()).transpose();
    return out;
}

LabeledDataset apply_scaler(const ScalerState& s, const LabeledDataset& ds) {
    LabeledDataset out = ds;
    out.points = apply_scaler(s, ds.points);
    return out;
}

// ---------------------------------------------------------------- generators

ArtiPattern parse_pattern(const std::string& name) {
    if (name == "arti1") return ArtiPattern::arti1;
    if (name == "arti2") return ArtiPattern::arti2;
    throw std::invalid_argument("unknown pattern '" + name + "' (expected arti1 or arti2)");
}

LabeledDataset gen_artificial(ArtiPattern pattern, int n_minority, int imbalance_rate, double noise,
                              std::uint64_t seed) {
    if (imbalance_rate < 1) throw std::invalid_argument("gen_artificial: imbalance rate must be >= 1");
    if (n_minority < 10) throw std::invalid_argument("gen_artificial: n_minority must be >= 10");
    if (!(noise >= 0.0)) throw std::invalid_argument("gen_artificial: noise must be >= 0");

    const int n_major = n_minority * imbalance_rate;
    Rng rng(seed, "gen", pattern == ArtiPattern::arti1 ? 1 : 2);
    LabeledDataset ds;
    ds.name = pattern == ArtiPattern::arti1 ? "arti1" : "arti2";
    ds.points.resize(n_minority + n_major, 2);
    ds.labels.assign(static_cast<std::size_t>(n_minority), 1);
    ds.labels.resize(static_cast<std::size_t>(n_minority + n_major), -1);

    // Semi-axes of the arti1 ellipse; the minority fills radius [0, 0.8] and
    // the majority ring radius [1.2, 2.0] (radii relative to the ellipse).
    constexpr double ax = 2.0, ay = 1.0;
    for (int i = 0; i < n_minority + n_major; ++i) {
        const bool minority = i < n_minority;
        double x1, x2;
        if (pattern == ArtiPattern::arti1) {
            const double lo = minority ? 0.0 : 1.2 * 1.2;
            const double hi = minority ? 0.8 * 0.8 : 2.0 * 2.0;
            const double rho = std::sqrt(rng.uniform(lo, hi));  // uniform over area
            const double theta = rng.uniform(0.0, 2.0 * M_PI);
            x1 = ax * rho * std::cos(theta);
            x2 = ay * rho * std::sin(theta);
        } else {
            x1 = rng.uniform(-2.0, 2.0);
            const double offset = 0.3 + rng.uniform(0.0, 1.5);
            x2 = 0.5 * x1 * x1 + (minority ? offset : -offset);
        }
        ds.points(i, 0) = x1 + noise * rng.normal();
        ds.points(i, 1) = x2 + noise * rng.normal();
    }
    return ds;
}

}  // namespace qsurf
