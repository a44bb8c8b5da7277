#include "qsurf/cli.hpp"

#include "qsurf/cv.hpp"
#include "qsurf/kernels.hpp"
#include "qsurf/predict.hpp"
#include "qsurf/report.hpp"
#include "qsurf/stats.hpp"
#include "qsurf/trainer.hpp"

#include <CLI11.hpp>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>

namespace qsurf {
namespace {

namespace fs = std::filesystem;

// Bad flags, config files or parameter values: exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(s);
    while (std::getline(in, cell, sep)) out.push_back(trim(cell));
    return out;
}

double parse_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError(what + ": '" + s + "' is not a number");
    return v;
}

// --- config file -----------------------------------------------------------
//
// key = value lines; '#' starts a comment; [section] lines are ignored.
// Keys are long option names. grid.<axis> = v1, v2, ... adds a grid axis.
// A key is only used when the same option is absent from the command line.

const std::set<std::string> kBoolFlags{"grid", "labels"};

bool argv_has(const std::vector<std::string>& args, const std::string& opt) {
    for (const auto& a : args)
        if (a == opt || a.rfind(opt + "=", 0) == 0) return true;
    return false;
}

bool argv_has_axis(const std::vector<std::string>& args, const std::string& axis) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        std::string v;
        if (args[i] == "--grid-axis" && i + 1 < args.size()) v = args[i + 1];
        else if (args[i].rfind("--grid-axis=", 0) == 0) v = args[i].substr(12);
        if (!v.empty() && trim(v.substr(0, v.find('='))) == axis) return true;
    }
    return false;
}

std::vector<std::string> config_args(const fs::path& path, const std::vector<std::string>& args) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path.string());
    std::vector<std::string> extra;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        if (key.empty() || key == "config")
            throw UsageError(path.string() + ":" + std::to_string(lineno) + ": invalid key '" + key + "'");
        if (key.rfind("grid.", 0) == 0) {
            const std::string axis = key.substr(5);
            if (!argv_has_axis(args, axis)) {
                extra.push_back("--grid-axis");
                extra.push_back(axis + "=" + value);
            }
            continue;
        }
        const std::string opt = "--" + key;
        if (argv_has(args, opt)) continue;
        if (kBoolFlags.count(key)) {
            if (value == "true" || value == "1") extra.push_back(opt);
            else if (value != "false" && value != "0")
                throw UsageError(path.string() + ":" + std::to_string(lineno) + ": " + key + " expects true/false");
            continue;
        }
        extra.push_back(opt + "=" + value);
    }
    return extra;
}

std::optional<fs::path> config_path(const std::vector<std::string>& args) {
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) return fs::path(args[i + 1]);
        if (args[i].rfind("--config=", 0) == 0) return fs::path(args[i].substr(9));
    }
    return std::nullopt;
}

// --- shared option groups ----------------------------------------------------

struct DataOpts {
    std::string label_column;
    std::string positive_label;

    void add(CLI::App* app) {
        app->add_option("--label-column", label_column, "Label column name or 0-based index (default: last)");
        app->add_option("--positive-label", positive_label, "Raw label mapped to +1 (default: minority class)");
    }

    CsvOptions csv() const {
        CsvOptions o;
        if (!label_column.empty()) {
            const bool numeric = label_column.find_first_not_of("0123456789") == std::string::npos;
            if (numeric) o.label_column = static_cast<std::size_t>(std::stoul(label_column));
            else o.label_column = label_column;
        }
        if (!positive_label.empty()) o.positive_label = positive_label;
        return o;
    }

    LabeledDataset load(const std::string& path) const {
        LabeledDataset ds = load_csv(path, csv());
        ds.name = fs::path(path).stem().string();
        return ds;
    }
};

struct ParamOpts {
    std::map<std::string, double> values;  // only what the user gave
    double qp_tol = 1e-6;
    int qp_max_iter = 50000;

    void add(CLI::App* app) {
        const std::vector<std::pair<std::string, std::string>> names{
            {"C", "Sets C1 and C2"},         {"C1", "Penalty for class 2 errors on plane 1"},
            {"C2", "Penalty for class 1 errors on plane 2"},
            {"cu", "Sets Cu and Cuhat"},     {"Cu", "Universum penalty"},
            {"Cuhat", "Reduced-Universum penalty"},
            {"eps", "Universum tolerance in (0,1)"},
            {"lambda", "Sets lambda1 and lambda2"}, {"lambda1", "Regularization, plane 1"},
            {"lambda2", "Regularization, plane 2"},
            {"delta", "System ridge (0 disables; default 1e-8*trace/dim)"}};
        for (const auto& [n, help] : names) {
            app->add_option_function<double>("--" + n, [this, n = n](double v) { values[n] = v; }, help);
        }
        app->add_option("--qp-tol", qp_tol, "QP tolerance")->capture_default_str();
        app->add_option("--qp-max-iter", qp_max_iter, "QP iteration cap")->capture_default_str();
    }

    ModelParams params() const {
        ModelParams p;
        // Shared axes first so C1 etc. can refine them.
        for (const char* shared : {"C", "cu", "lambda"})
            if (auto it = values.find(shared); it != values.end()) p.set(it->first, it->second);
        for (const auto& [k, v] : values)
            if (k != "C" && k != "cu" && k != "lambda") p.set(k, v);
        p.qp_tol = qp_tol;
        p.qp_max_iter = qp_max_iter;
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return p;
    }
};

void check_model_id(const std::string& id) {
    try {
        (void)model_spec(id);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    std::ostringstream o;
    o << std::setprecision(17) << v;
    return o.str();
}

// --- commands ----------------------------------------------------------------

struct TrainCmd {
    DataOpts data;
    ParamOpts params;
    std::string data_path, model, out, diagnostics;
    std::uint64_t seed = 0;
    double fraction = kDefaultUniversumFraction;

    void add(CLI::App* app) {
        app->add_option("--data", data_path, "Training CSV")->required();
        app->add_option("--model", model, "Model id")->required();
        app->add_option("--out", out, "Model file to write")->required();
        app->add_option("--diagnostics", diagnostics, "Diagnostics file (default: <out>.diag.txt)");
        app->add_option("--seed", seed, "RNG seed")->capture_default_str();
        app->add_option("--universum-fraction", fraction, "Share of each class used for Universum pools")
            ->capture_default_str();
        data.add(app);
        params.add(app);
    }

    int run(std::ostream& out_s, std::ostream& err) {
        check_model_id(model);
        const ModelParams p = params.params();
        const LabeledDataset ds = data.load(data_path);
        Model m = train_model(model, ds, p, seed, {fraction, true});
        m.info["dataset"] = ds.name;
        m.info["positive_label"] = ds.positive_name;
        m.info["negative_label"] = ds.negative_name;
        const std::string diag = format_diagnostics(m);
        if (auto it = m.info.find("warning"); it != m.info.end()) err << "warning: " << it->second << "\n";
        const std::string diag_path = diagnostics.empty() ? out + ".diag.txt" : diagnostics;
        const std::string text = serialize_model(m);
        write_text(out, text);
        write_text(diag_path, diag);
        out_s << diag;
        return kExitOk;
    }
};

struct PredictCmd {
    DataOpts data;
    std::string model_path, data_path, out;
    bool labels = false;

    void add(CLI::App* app) {
        app->add_option("--model", model_path, "Model file")->required();
        app->add_option("--data", data_path, "CSV of points")->required();
        app->add_option("--out", out, "Predictions CSV (default: stdout)");
        app->add_flag("--labels", labels, "Last (or --label-column) column holds labels; report accuracy");
        data.add(app);
    }

    int run(std::ostream& out_s, std::ostream&) {
        const Model m = load_model(model_path);
        auto name = [&](int y) {
            const auto key = y == 1 ? "positive_label" : "negative_label";
            const auto it = m.info.find(key);
            return it == m.info.end() ? std::to_string(y) : it->second;
        };
        Matrix X;
        std::vector<int> truth;
        if (labels) {
            CsvOptions o = data.csv();
            if (!o.positive_label && m.info.count("positive_label")) o.positive_label = m.info.at("positive_label");
            LabeledDataset ds = load_csv(data_path, o);
            X = ds.points;
            truth = ds.labels;
        } else {
            X = load_points_csv(data_path);
        }
        const auto pred = predict_batch(m, X);
        std::vector<TextRow> rows;
        std::vector<int> labels_out;
        // Input features followed by the predicted label and the per-class scores.
        TextRow header;
        for (Eigen::Index j = 0; j < X.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
        header.insert(header.end(), {"prediction", "sign", "score1", "score2", "tie"});
        for (std::size_t i = 0; i < pred.size(); ++i) {
            labels_out.push_back(pred[i].label);
            TextRow row;
            for (Eigen::Index j = 0; j < X.cols(); ++j) row.push_back(format_double(X(static_cast<Eigen::Index>(i), j)));
            row.insert(row.end(), {name(pred[i].label), std::to_string(pred[i].label), format_double(pred[i].score1),
                                   format_double(pred[i].score2), pred[i].tie ? "1" : "0"});
            rows.push_back(std::move(row));
        }
        const std::string csv = csv_table(header, rows);
        if (out.empty()) out_s << csv;
        else write_text(out, csv);
        if (labels) {
            const Metrics mt = score_labels(truth, labels_out);
            (out.empty() ? std::cerr : out_s) << "accuracy = " << fixed(100 * mt.accuracy, 4)
                                              << "\nbalanced_accuracy = " << fixed(100 * mt.balanced_accuracy, 4)
                                              << "\nf1 = " << fixed(100 * mt.f1, 4) << "\n";
        }
        return kExitOk;
    }
};

Grid parse_grid_axes(const std::vector<std::string>& axes) {
    Grid g;
    for (const auto& a : axes) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw UsageError("--grid-axis expects name=v1,v2,...; got '" + a + "'");
        const std::string name = trim(a.substr(0, eq));
        std::vector<double> vals;
        for (const auto& v : split(a.substr(eq + 1), ',')) vals.push_back(parse_double(v, "grid axis " + name));
        if (vals.empty()) throw UsageError("grid axis '" + name + "' has no values");
        try {
            ModelParams probe;
            probe.set(name, vals.front());
        } catch (const std::invalid_argument&) {
            throw UsageError("unknown grid axis '" + name + "'");
        }
        g[name] = vals;
    }
    return g;
}

std::string stats_text(const RankTable& t, double alpha, const std::string& proposed, const std::string& baseline,
                       const std::vector<std::string>& notes) {
    std::string s;
    try {
        s = format_stats(compute_stats(t, alpha, proposed, baseline));
    } catch (const std::invalid_argument& e) {
        s = std::string("statistics skipped: ") + e.what() + "\n";
    } catch (const std::out_of_range& e) {
        s = std::string("statistics skipped: ") + e.what() + "\n";
    }
    if (!notes.empty()) {
        s += "\nwarnings\n";
        for (const auto& n : notes) s += "  " + n + "\n";
    }
    return s;
}

struct BenchCmd {
    DataOpts data;
    ParamOpts params;
    std::vector<std::string> data_paths, models, grid_axes;
    std::string out = "bench_out", precomputed, proposed, baseline;
    int k = 5, repeats = 10, timing_repeats = 3;
    std::uint64_t seed = 0;
    bool grid = false;
    double alpha = 0.05;
    double fraction = kDefaultUniversumFraction;

    void add(CLI::App* app) {
        app->add_option("--data", data_paths, "Dataset CSVs")->delimiter(',');
        app->add_option("--models", models, "Model ids")->delimiter(',');
        app->add_option("--out", out, "Output directory")->capture_default_str();
        app->add_option("--precomputed", precomputed, "Accuracy matrix CSV; skips training");
        app->add_option("--k", k, "Folds")->capture_default_str();
        app->add_option("--repeats", repeats, "CV repeats")->capture_default_str();
        app->add_option("--timing-repeats", timing_repeats, "Fits per timing measurement")->capture_default_str();
        app->add_option("--seed", seed, "RNG seed")->capture_default_str();
        app->add_flag("--grid", grid, "Grid-search each model (default axes unless --grid-axis given)");
        app->add_option("--grid-axis", grid_axes, "Axis as name=v1,v2,... (repeatable)");
        app->add_option("--alpha", alpha, "Significance level")->capture_default_str();
        app->add_option("--proposed", proposed, "Wilcoxon model (default: best average rank)");
        app->add_option("--baseline", baseline, "Wilcoxon comparator (default: second-best average rank)");
        app->add_option("--universum-fraction", fraction, "Share of each class used for Universum pools")
            ->capture_default_str();
        data.add(app);
        params.add(app);
    }

    int run(std::ostream& out_s, std::ostream& err) {
        if (!precomputed.empty()) {
            const RankTable t = load_accuracy_table(precomputed);
            const std::string stats = stats_text(t, alpha, proposed, baseline, {});
            fs::create_directories(out);
            write_text(fs::path(out) / "accuracy.csv", accuracy_csv(t));
            write_text(fs::path(out) / "accuracy.md", accuracy_markdown(t));
            write_text(fs::path(out) / "stats.txt", stats);
            out_s << stats;
            return kExitOk;
        }
        if (!baseline.empty() && std::find(models.begin(), models.end(), baseline) == models.end())
            models.push_back(baseline);
        if (models.size() < 2) throw UsageError("bench needs at least 2 models (or 1 model plus --baseline)");
        if (data_paths.empty()) throw UsageError("bench needs --data or --precomputed");
        for (const auto& m : models) check_model_id(m);
        if (k < 2 || repeats < 1 || timing_repeats < 1) throw UsageError("k >= 2, repeats >= 1, timing-repeats >= 1");
        const ModelParams base = params.params();
        const Grid explicit_axes = parse_grid_axes(grid_axes);
        if (!explicit_axes.empty()) grid = true;

        std::vector<LabeledDataset> sets;
        for (const auto& p : data_paths) sets.push_back(data.load(p));
        std::vector<std::string> dnames;
        for (const auto& s : sets) dnames.push_back(s.name);

        CvOptions cv;
        cv.k = k;
        cv.repeats = repeats;
        cv.seed = seed;
        cv.prepare.universum_fraction = fraction;

        const auto P = static_cast<Eigen::Index>(sets.size()), Q = static_cast<Eigen::Index>(models.size());
        Matrix acc(P, Q), sd(P, Q), secs(P, Q);
        std::vector<CVReport> reports;
        std::vector<std::string> notes;
        for (Eigen::Index j = 0; j < Q; ++j) {
            const ModelSpec& spec = model_spec(models[static_cast<std::size_t>(j)]);
            for (Eigen::Index i = 0; i < P; ++i) {
                const LabeledDataset& ds = sets[static_cast<std::size_t>(i)];
                err << "[bench] " << spec.id << " on " << ds.name << "\n";
                CVReport rep;
                rep.model_id = spec.id;
                rep.dataset_id = ds.name;
                rep.params = base;
                try {
                    if (grid) {
                        Grid g = default_grid(spec);
                        for (auto& [axis, vals] : g)
                            if (auto it = explicit_axes.find(axis); it != explicit_axes.end()) vals = it->second;
                        rep = grid_search(spec.id, ds, g, base, cv).report;
                    } else {
                        rep = run_cv(spec.id, ds, base, cv);
                    }
                } catch (const std::exception& e) {
                    rep.warnings.push_back(std::string("run failed: ") + e.what());
                }
                for (const auto& w : rep.warnings) notes.push_back(spec.id + " / " + ds.name + ": " + w);
                double mean = rep.entries.empty() ? std::nan("") : rep.mean();
                if (std::isnan(mean)) {
                    notes.push_back(spec.id + " / " + ds.name + ": no successful cell; ranked with accuracy 0");
                    mean = 0.0;
                }
                acc(i, j) = mean;
                sd(i, j) = rep.entries.empty() || rep.failures() == rep.entries.size() ? 0.0 : rep.stddev();
                try {
                    secs(i, j) = timing_harness(spec.id, ds, rep.params, timing_repeats, seed, cv.prepare).median;
                } catch (const std::exception&) {
                    secs(i, j) = std::nan("");
                }
                reports.push_back(std::move(rep));
            }
        }
        const RankTable t = rank_table(acc, dnames, models);
        const std::string stats = stats_text(t, alpha, proposed, baseline, notes);
        const fs::path dir(out);
        fs::create_directories(dir);
        write_text(dir / "accuracy.csv", accuracy_csv(t, &sd));
        write_text(dir / "accuracy.md", accuracy_markdown(t, &sd));
        write_text(dir / "params.csv", params_csv(reports));
        write_text(dir / "cv_details.csv", cv_details_csv(reports));
        write_text(dir / "stats.txt", stats);
        write_text(dir / "timing.csv", timing_csv(dnames, models, secs));
        write_text(dir / "timing.md", timing_markdown(dnames, models, secs));
        out_s << accuracy_markdown(t, &sd) << "\n" << stats;
        return kExitOk;
    }
};

struct GenCmd {
    std::string pattern = "arti1", out;
    int n_minority = 50, rate = 3;
    double noise = 0.05;
    std::uint64_t seed = 0;

    void add(CLI::App* app) {
        app->add_option("--pattern", pattern, "arti1 or arti2")->capture_default_str();
        app->add_option("--n-minority", n_minority, "Minority class size")->capture_default_str();
        app->add_option("--rate", rate, "Imbalance rate (majority/minority)")->capture_default_str();
        app->add_option("--noise", noise, "Gaussian noise std")->capture_default_str();
        app->add_option("--seed", seed, "RNG seed")->capture_default_str();
        app->add_option("--out", out, "Output CSV")->required();
    }

    int run(std::ostream& out_s, std::ostream&) {
        ArtiPattern pat;
        try {
            pat = parse_pattern(pattern);
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        if (n_minority < 1 || rate < 1 || noise < 0) throw UsageError("need n-minority >= 1, rate >= 1, noise >= 0");
        const LabeledDataset ds = gen_artificial(pat, n_minority, rate, noise, seed);
        write_csv(ds, out);
        out_s << "wrote " << ds.size() << " points (" << ds.count(1) << " minority) to " << out << "\n";
        return kExitOk;
    }
};

struct GridExportCmd {
    std::string model_path, out;
    std::vector<double> bounds;
    int resolution = 101;

    void add(CLI::App* app) {
        app->add_option("--model", model_path, "Model file (2-D)")->required();
        app->add_option("--bounds", bounds, "x1min,x1max,x2min,x2max (default: training range)")
            ->delimiter(',')
            ->expected(4);
        app->add_option("--resolution", resolution, "Points per axis")->capture_default_str();
        app->add_option("--out", out, "Output CSV (default: stdout)");
    }

    int run(std::ostream& out_s, std::ostream&) {
        if (resolution < 2) throw UsageError("--resolution must be at least 2");
        const Model m = load_model(model_path);
        if (m.dim() != 2) throw std::runtime_error("grid-export needs a 2-D model; this one has n = " + std::to_string(m.dim()));
        std::array<double, 4> b{0.0, 1.0, 0.0, 1.0};
        if (!bounds.empty()) {
            std::copy(bounds.begin(), bounds.end(), b.begin());
        } else if (m.scaler) {
            b = {m.scaler->min(0), m.scaler->max(0), m.scaler->min(1), m.scaler->max(1)};
        }
        if (!(b[0] < b[1]) || !(b[2] < b[3])) throw UsageError("--bounds must satisfy min < max on both axes");
        const int r = resolution;
        Matrix X(static_cast<Eigen::Index>(r) * r, 2);
        for (int j = 0; j < r; ++j)
            for (int i = 0; i < r; ++i) {
                const Eigen::Index row = static_cast<Eigen::Index>(j) * r + i;
                X(row, 0) = b[0] + (b[1] - b[0]) * i / (r - 1);
                X(row, 1) = b[2] + (b[3] - b[2]) * j / (r - 1);
            }
        const auto pred = predict_batch(m, X);
        std::vector<TextRow> rows;
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            const auto& p = pred[static_cast<std::size_t>(i)];
            rows.push_back({format_double(X(i, 0)), format_double(X(i, 1)), format_double(p.score1),
                            format_double(p.score2), std::to_string(p.label)});
        }
        const std::string csv = csv_table({"x1", "x2", "score1", "score2", "label"}, rows);
        if (out.empty()) out_s << csv;
        else write_text(out, csv);
        return kExitOk;
    }
};

struct StatsCmd {
    std::string input, out, proposed, baseline;
    double alpha = 0.05;

    void add(CLI::App* app) {
        app->add_option("--precomputed,--input", input, "Accuracy matrix CSV (datasets x models)")->required();
        app->add_option("--out", out, "Write the report here instead of stdout");
        app->add_option("--alpha", alpha, "Significance level")->capture_default_str();
        app->add_option("--proposed", proposed, "Wilcoxon model (default: best average rank)");
        app->add_option("--baseline", baseline, "Wilcoxon comparator (default: second-best average rank)");
    }

    int run(std::ostream& out_s, std::ostream&) {
        const RankTable t = load_accuracy_table(input);
        const std::string s = stats_text(t, alpha, proposed, baseline, {});
        if (out.empty()) out_s << s;
        else write_text(out, s);
        return kExitOk;
    }
};

void apply_thread_env() {
    const char* env = std::getenv("QSURF_THREADS");
    if (!env || !*env) return;
    int n = 0;
    try {
        n = std::stoi(env);
    } catch (const std::exception&) {
        n = 0;
    }
    if (n < 1) throw UsageError(std::string("QSURF_THREADS must be a positive integer, got '") + env + "'");
    set_max_threads(n);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args(argv, argv + argc);
    try {
        apply_thread_env();
        if (auto cfg = config_path(args)) {
            const auto extra = config_args(*cfg, args);
            args.insert(args.end(), extra.begin(), extra.end());
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"Quadratic-surface twin SVM toolkit"};
    app.require_subcommand(1);
    std::string config_file;
    TrainCmd train;
    PredictCmd predict;
    BenchCmd bench;
    GenCmd gen;
    GridExportCmd grid_export;
    StatsCmd stats;
    std::function<int(std::ostream&, std::ostream&)> action;
    auto sub = [&](const char* name, const char* help, auto& cmd) {
        CLI::App* s = app.add_subcommand(name, help);
        s->add_option("--config", config_file, "key = value file; command-line flags win");
        cmd.add(s);
        s->callback([&] { action = [&](std::ostream& o, std::ostream& e) { return cmd.run(o, e); }; });
    };
    sub("train", "Fit a model and write it with diagnostics", train);
    sub("predict", "Label points with a saved model", predict);
    sub("bench", "Cross-validate models on datasets and compare them", bench);
    sub("gen", "Generate an artificial dataset", gen);
    sub("grid-export", "Evaluate a 2-D model on a regular grid", grid_export);
    sub("stats", "Friedman, Nemenyi and Wilcoxon tests on an accuracy matrix", stats);

    std::vector<const char*> cargv;
    for (const auto& a : args) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }
    try {
        return action(out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}

}  // namespace qsurf
