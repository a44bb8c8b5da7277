#include "qsurf/cv.hpp"

#include "qsurf/predict.hpp"
#include "qsurf/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace qsurf {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> labels_scaled(const Model& m, const Matrix& X) {
    if (!m.is_svm()) return predict_labels_scaled(m.twin(), X);
    std::vector<int> out(static_cast<std::size_t>(X.rows()));
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        out[static_cast<std::size_t>(i)] = predict_svm(m.svm(), X.row(i).transpose()).label;
    return out;
}

template <class F>
double mean_of(const std::vector<CvEntry>& es, F f) {
    double s = 0.0;
    std::size_t n = 0;
    for (const auto& e : es)
        if (e.ok) {
            s += f(e);
            ++n;
        }
    return n ? s / static_cast<double>(n) : std::nan("");
}

struct Cell {
    int repeat;
    int fold;
    std::vector<std::size_t> train, test;
};

std::vector<Cell> make_cells(const LabeledDataset& ds, const CvOptions& o) {
    if (o.k < 2) throw std::invalid_argument("cv: k must be at least 2");
    if (o.repeats < 1) throw std::invalid_argument("cv: repeats must be at least 1");
    std::vector<Cell> cells;
    for (int r = 0; r < o.repeats; ++r) {
        const FoldPlan plan = stratified_kfold(ds, o.k, repeat_seed(o.seed, r));
        for (int f = 0; f < o.k; ++f) cells.push_back({r, f, plan.train_rows(f), plan.test_rows(f)});
    }
    return cells;
}

std::vector<int> subset_labels(const LabeledDataset& ds, const std::vector<std::size_t>& rows) {
    std::vector<int> y;
    y.reserve(rows.size());
    for (auto r : rows) y.push_back(ds.labels[r]);
    return y;
}

void collect_warnings(CVReport& rep) {
    for (const auto& e : rep.entries)
        if (!e.ok)
            rep.warnings.push_back("repeat " + std::to_string(e.repeat) + " fold " + std::to_string(e.fold) +
                                   " excluded: " + e.error);
}

ModelParams apply_point(ModelParams p, const std::map<std::string, double>& point) {
    for (const auto& [k, v] : point) p.set(k, v);
    return p;
}

}  // namespace

Metrics score_labels(const std::vector<int>& truth, const std::vector<int>& pred) {
    if (truth.size() != pred.size()) throw std::invalid_argument("score_labels: length mismatch");
    if (truth.empty()) throw std::invalid_argument("score_labels: no labels");
    double tp = 0, tn = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] == 1) (pred[i] == 1 ? tp : fn) += 1;
        else (pred[i] == 1 ? fp : tn) += 1;
    }
    Metrics m;
    m.accuracy = (tp + tn) / static_cast<double>(truth.size());
    // A class absent from the fold contributes nothing to the balanced mean.
    double recall_sum = 0.0;
    int classes = 0;
    if (tp + fn > 0) recall_sum += tp / (tp + fn), ++classes;
    if (tn + fp > 0) recall_sum += tn / (tn + fp), ++classes;
    m.balanced_accuracy = recall_sum / classes;
    m.f1 = tp > 0 ? 2 * tp / (2 * tp + fp + fn) : 0.0;
    return m;
}

std::size_t CVReport::failures() const {
    return static_cast<std::size_t>(std::count_if(entries.begin(), entries.end(), [](const auto& e) { return !e.ok; }));
}

double CVReport::mean() const {
    return 100.0 * mean_of(entries, [](const CvEntry& e) { return e.metrics.accuracy; });
}

double CVReport::stddev() const {
    const double mu = mean() / 100.0;
    return 100.0 * std::sqrt(mean_of(entries, [mu](const CvEntry& e) {
                       const double d = e.metrics.accuracy - mu;
                       return d * d;
                   }));
}

double CVReport::mean_balanced() const {
    return 100.0 * mean_of(entries, [](const CvEntry& e) { return e.metrics.balanced_accuracy; });
}

double CVReport::mean_f1() const {
    return 100.0 * mean_of(entries, [](const CvEntry& e) { return e.metrics.f1; });
}

double CVReport::fit_seconds() const {
    double s = 0.0;
    for (const auto& e : entries) s += e.fit_seconds;
    return s;
}

std::uint64_t repeat_seed(std::uint64_t seed, int repeat) {
    return derive_seed(seed, "cv", static_cast<std::uint64_t>(repeat));
}

std::uint64_t cell_seed(std::uint64_t seed, int repeat, int fold) {
    return derive_seed(seed, "cell", static_cast<std::uint64_t>(repeat), static_cast<std::uint64_t>(fold));
}

CVReport run_cv(const CellPredictor& predictor, const LabeledDataset& ds, const CvOptions& opts) {
    ds.validate_for_training();
    const auto cells = make_cells(ds, opts);
    CVReport rep;
    rep.dataset_id = ds.name;
    rep.k = opts.k;
    rep.repeats = opts.repeats;
    rep.seed = opts.seed;
    rep.entries.resize(cells.size());
    const int n = static_cast<int>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int i = 0; i < n; ++i) {
        const Cell& c = cells[static_cast<std::size_t>(i)];
        CvEntry& e = rep.entries[static_cast<std::size_t>(i)];
        e.repeat = c.repeat;
        e.fold = c.fold;
        try {
            const auto t0 = Clock::now();
            const auto pred =
                predictor(ds.subset(c.train), select_rows(ds.points, c.test), cell_seed(opts.seed, c.repeat, c.fold));
            e.fit_seconds = seconds_since(t0);
            e.metrics = score_labels(subset_labels(ds, c.test), pred);
            e.ok = true;
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
    }
    collect_warnings(rep);
    return rep;
}

CVReport run_cv(const std::string& model_id, const LabeledDataset& ds, const ModelParams& p,
                const CvOptions& opts) {
    const ModelSpec& spec = model_spec(model_id);
    p.validate();
    auto predictor = [&](const LabeledDataset& train, const Matrix& test, std::uint64_t seed) {
        const PreparedFit prep(spec, train, seed, opts.prepare);
        return labels_scaled(prep.fit(p), prep.transform(test));
    };
    CVReport rep = run_cv(predictor, ds, opts);
    rep.model_id = model_id;
    rep.params = p;
    return rep;
}

Grid default_grid(const ModelSpec& spec) {
    std::vector<double> pow2;
    for (int e = -5; e <= 5; ++e) pow2.push_back(std::ldexp(1.0, e));
    Grid g;
    for (const auto& axis : spec.grid_axes) {
        if (axis == "eps")
            g[axis] = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
        else
            g[axis] = pow2;
    }
    return g;
}

std::vector<std::map<std::string, double>> expand_grid(const Grid& grid) {
    if (grid.empty()) throw std::invalid_argument("grid_search: empty grid");
    std::vector<std::pair<std::string, std::vector<double>>> axes;
    for (const auto& [name, values] : grid) {
        if (values.empty()) throw std::invalid_argument("grid_search: axis '" + name + "' has no values");
        auto v = values;
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        axes.emplace_back(name, std::move(v));
    }
    std::vector<std::map<std::string, double>> out{{}};
    for (const auto& [name, values] : axes) {
        std::vector<std::map<std::string, double>> next;
        next.reserve(out.size() * values.size());
        for (const auto& partial : out)
            for (double v : values) {
                auto pt = partial;
                pt[name] = v;
                next.push_back(std::move(pt));
            }
        out = std::move(next);
    }
    return out;
}

GridResult grid_search(const std::string& model_id, const LabeledDataset& ds, const Grid& grid,
                       const ModelParams& base, const CvOptions& opts) {
    const ModelSpec& spec = model_spec(model_id);
    ds.validate_for_training();
    const auto points = expand_grid(grid);
    std::vector<ModelParams> params;
    params.reserve(points.size());
    for (const auto& pt : points) {
        params.push_back(apply_point(base, pt));
        params.back().validate();
    }

    const auto cells = make_cells(ds, opts);
    const std::size_t np = points.size(), nc = cells.size();
    // results[point * nc + cell]
    std::vector<CvEntry> results(np * nc);
    const int n = static_cast<int>(nc);
#pragma omp parallel for schedule(dynamic) num_threads(max_threads())
    for (int i = 0; i < n; ++i) {
        const auto ci = static_cast<std::size_t>(i);
        const Cell& c = cells[ci];
        const std::vector<int> truth = subset_labels(ds, c.test);
        std::optional<PreparedFit> prep;
        Matrix X;
        std::string prep_error;
        double prep_seconds = 0.0;
        try {
            const auto t0 = Clock::now();
            prep.emplace(spec, ds.subset(c.train), cell_seed(opts.seed, c.repeat, c.fold), opts.prepare);
            X = prep->transform(select_rows(ds.points, c.test));
            prep_seconds = seconds_since(t0);
        } catch (const std::exception& ex) {
            prep_error = ex.what();
        }
        for (std::size_t pi = 0; pi < np; ++pi) {
            CvEntry& e = results[pi * nc + ci];
            e.repeat = c.repeat;
            e.fold = c.fold;
            if (!prep) {
                e.error = prep_error;
                continue;
            }
            try {
                const auto t0 = Clock::now();
                const Model m = prep->fit(params[pi]);
                e.fit_seconds = prep_seconds + seconds_since(t0);
                e.metrics = score_labels(truth, labels_scaled(m, X));
                e.ok = true;
            } catch (const std::exception& ex) {
                e.error = ex.what();
            }
        }
    }

    std::size_t best = 0;
    std::size_t best_fail = nc + 1;
    double best_mean = -1.0;
    for (std::size_t pi = 0; pi < np; ++pi) {
        std::size_t fail = 0;
        double s = 0.0;
        for (std::size_t ci = 0; ci < nc; ++ci) {
            const CvEntry& e = results[pi * nc + ci];
            if (e.ok) s += e.metrics.accuracy;
            else ++fail;
        }
        if (fail == nc) continue;
        const double mean = s / static_cast<double>(nc - fail);
        // Points come in lexicographic order, so only a strict improvement moves the best.
        if (fail < best_fail || (fail == best_fail && mean > best_mean + 1e-12)) {
            best = pi;
            best_fail = fail;
            best_mean = mean;
        }
    }
    if (best_fail == nc + 1) throw std::runtime_error("grid_search: every cell failed for every grid point");

    GridResult out;
    out.points = np;
    out.best = params[best];
    out.best_point = points[best];
    CVReport& rep = out.report;
    rep.model_id = model_id;
    rep.dataset_id = ds.name;
    rep.params = params[best];
    rep.grid_point = points[best];
    rep.k = opts.k;
    rep.repeats = opts.repeats;
    rep.seed = opts.seed;
    rep.entries.assign(results.begin() + static_cast<std::ptrdiff_t>(best * nc),
                       results.begin() + static_cast<std::ptrdiff_t>((best + 1) * nc));
    collect_warnings(rep);
    return out;
}

double TimingResult::variance() const {
    if (samples.empty()) return 0.0;
    const double mu = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
    double s = 0.0;
    for (double x : samples) s += (x - mu) * (x - mu);
    return s / static_cast<double>(samples.size());
}

TimingResult timing_harness(const std::string& model_id, const LabeledDataset& ds, const ModelParams& p,
                            int repeats, std::uint64_t seed, const PrepareOptions& prep) {
    if (repeats < 1) throw std::invalid_argument("timing_harness: repeats must be at least 1");
    const ModelSpec& spec = model_spec(model_id);
    TimingResult r;
    for (int i = 0; i < repeats; ++i) {
        const auto t0 = Clock::now();
        const PreparedFit pf(spec, ds, seed, prep);
        (void)pf.fit(p);
        r.samples.push_back(seconds_since(t0));
    }
    auto s = r.samples;
    std::sort(s.begin(), s.end());
    const std::size_t h = s.size() / 2;
    r.median = s.size() % 2 ? s[h] : 0.5 * (s[h - 1] + s[h]);
    return r;
}

}  // namespace qsurf
