#include "qsurf/stats.hpp"

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qsurf {
namespace {

// Average ranks of `v` in the order given by `before` (1-based), grouping
// neighbours that `same` considers equal.
template <class Before, class Same>
std::vector<double> average_ranks(const std::vector<double>& v, Before before, Same same) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return before(v[a], v[b]); });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i + 1;
        while (j < idx.size() && same(v[idx[j - 1]], v[idx[j]])) ++j;
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t t = i; t < j; ++t) r[idx[t]] = avg;
        i = j;
    }
    return r;
}

}  // namespace

RankTable rank_table(const Matrix& acc, std::vector<std::string> datasets, std::vector<std::string> models,
                     double tie_tol) {
    if (acc.rows() < 1 || acc.cols() < 2) throw std::invalid_argument("rank_table: need at least 1 dataset and 2 models");
    if (!acc.allFinite()) throw std::invalid_argument("rank_table: accuracy matrix has non-finite entries");
    if (datasets.empty())
        for (Eigen::Index i = 0; i < acc.rows(); ++i) datasets.push_back("d" + std::to_string(i + 1));
    if (models.empty())
        for (Eigen::Index j = 0; j < acc.cols(); ++j) models.push_back("m" + std::to_string(j + 1));
    if (static_cast<Eigen::Index>(datasets.size()) != acc.rows() ||
        static_cast<Eigen::Index>(models.size()) != acc.cols())
        throw std::invalid_argument("rank_table: name count does not match the matrix");
    RankTable t{std::move(datasets), std::move(models), acc, Matrix(acc.rows(), acc.cols()), Vector()};
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
        std::vector<double> row(static_cast<std::size_t>(acc.cols()));
        for (Eigen::Index j = 0; j < acc.cols(); ++j) row[static_cast<std::size_t>(j)] = acc(i, j);
        const auto r = average_ranks(
            row, [](double a, double b) { return a > b; },
            [tie_tol](double a, double b) { return std::abs(a - b) <= tie_tol; });
        for (Eigen::Index j = 0; j < acc.cols(); ++j) t.ranks(i, j) = r[static_cast<std::size_t>(j)];
    }
    t.average = t.ranks.colwise().mean().transpose();
    return t;
}

double f_critical(double d1, double d2, double alpha) {
    boost::math::fisher_f_distribution<double> f(d1, d2);
    return boost::math::quantile(boost::math::complement(f, alpha));
}

FriedmanResult friedman_from_average_ranks(const Vector& R, int p, double alpha) {
    const int q = static_cast<int>(R.size());
    if (p < 2 || q < 2) throw std::invalid_argument("friedman_test: need p >= 2 datasets and q >= 2 models");
    FriedmanResult f;
    f.p = p;
    f.q = q;
    f.alpha = alpha;
    const double pd = p, qd = q;
    f.chi2 = 12.0 * pd / (qd * (qd + 1.0)) * (R.squaredNorm() - qd * (qd + 1.0) * (qd + 1.0) / 4.0);
    const double den = pd * (qd - 1.0) - f.chi2;
    f.ff = den > 0.0 ? (pd - 1.0) * f.chi2 / den : std::numeric_limits<double>::infinity();
    f.critical = f_critical(qd - 1.0, (pd - 1.0) * (qd - 1.0), alpha);
    f.reject = f.ff > f.critical;
    return f;
}

FriedmanResult friedman_test(const RankTable& t, double alpha) {
    return friedman_from_average_ranks(t.average, t.p(), alpha);
}

double nemenyi_q05(int q) {
    static const double table[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
    if (q < 2 || q > 10) throw std::out_of_range("nemenyi: q_0.05 tabulated for 2..10 models only");
    return table[q - 2];
}

double nemenyi_cd(int p, int q, double q_alpha) {
    if (p < 2 || q < 2) throw std::invalid_argument("nemenyi_cd: need p, q >= 2");
    if (!(q_alpha > 0.0)) throw std::invalid_argument("nemenyi_cd: q_alpha must be positive");
    return q_alpha * std::sqrt(q * (q + 1.0) / (6.0 * p));
}

NemenyiResult nemenyi(const Vector& R, int p, double q_alpha) {
    const int q = static_cast<int>(R.size());
    NemenyiResult n;
    n.q_alpha = q_alpha;
    n.cd = nemenyi_cd(p, q, q_alpha);
    n.significant.assign(static_cast<std::size_t>(q), std::vector<bool>(static_cast<std::size_t>(q), false));
    for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
            n.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = std::abs(R(i) - R(j)) > n.cd;
    return n;
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& deltas, double alpha) {
    const int p = static_cast<int>(deltas.size());
    if (p < 5) throw std::invalid_argument("wilcoxon: need at least 5 paired differences");
    for (double d : deltas)
        if (!std::isfinite(d)) throw std::invalid_argument("wilcoxon: non-finite difference");
    constexpr double zero_tol = 1e-12;
    std::vector<double> mag(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i) mag[i] = std::abs(deltas[i]) <= zero_tol ? 0.0 : std::abs(deltas[i]);
    const auto r = average_ranks(
        mag, [](double a, double b) { return a < b; },
        [](double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(a, b)); });
    WilcoxonResult w;
    w.p = p;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (mag[i] == 0.0) {
            w.r_plus += 0.5 * r[i];
            w.r_minus += 0.5 * r[i];
        } else if (deltas[i] > 0.0) {
            w.r_plus += r[i];
        } else {
            w.r_minus += r[i];
        }
    }
    w.r_min = std::min(w.r_plus, w.r_minus);
    const double pd = p;
    w.z = (w.r_min - pd * (pd + 1.0) / 4.0) / std::sqrt(pd * (pd + 1.0) * (2.0 * pd + 1.0) / 24.0);
    w.z_critical = boost::math::quantile(boost::math::normal_distribution<double>(), alpha / 2.0);
    w.reject = w.z < w.z_critical;
    return w;
}

StatsReport compute_stats(const RankTable& t, double alpha, const std::string& proposed, const std::string& baseline) {
    StatsReport s;
    s.table = t;
    s.friedman = friedman_test(t, alpha);
    s.nemenyi = nemenyi(t.average, t.p(), nemenyi_q05(t.q()));
    auto find = [&](const std::string& name) {
        const auto it = std::find(t.models.begin(), t.models.end(), name);
        if (it == t.models.end()) throw std::invalid_argument("stats: unknown model '" + name + "'");
        return static_cast<Eigen::Index>(it - t.models.begin());
    };
    // Best and second-best average rank, first occurrence on ties.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(t.q()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return t.average(a) < t.average(b); });
    const Eigen::Index a = proposed.empty() ? order[0] : find(proposed);
    Eigen::Index b = baseline.empty() ? (order[0] == a ? order[1] : order[0]) : find(baseline);
    if (a == b) throw std::invalid_argument("stats: proposed and baseline must differ");
    s.proposed = t.models[static_cast<std::size_t>(a)];
    s.baseline = t.models[static_cast<std::size_t>(b)];
    if (t.p() >= 5) {
        std::vector<double> d(static_cast<std::size_t>(t.p()));
        for (int i = 0; i < t.p(); ++i) d[static_cast<std::size_t>(i)] = t.accuracy(i, a) - t.accuracy(i, b);
        s.wilcoxon = wilcoxon_signed_rank(d, alpha);
    }
    return s;
}

std::string format_stats(const StatsReport& r) {
    const RankTable& t = r.table;
    std::ostringstream o;
    o << std::fixed << std::setprecision(4);
    o << "datasets p = " << t.p() << "\nmodels q = " << t.q() << "\nalpha = " << r.friedman.alpha << "\n\n";
    o << "average ranks" << (t.average_given ? " (from input; not recomputed from the cells)" : "") << "\n";
    for (int j = 0; j < t.q(); ++j) o << "  " << t.models[static_cast<std::size_t>(j)] << " = " << t.average(j) << "\n";
    const auto& f = r.friedman;
    o << "\nfriedman\n  sum R^2 = " << t.average.squaredNorm() << "\n  chi2_F = " << f.chi2 << "\n  F_F = " << f.ff
      << "\n  df = (" << f.q - 1 << ", " << (f.p - 1) * (f.q - 1) << ")\n  F critical = " << f.critical
      << "\n  decision = " << (f.reject ? "reject H0 (models differ)" : "fail to reject H0") << "\n";
    o << "\nnemenyi\n  q_alpha = " << r.nemenyi.q_alpha << "\n  CD = " << r.nemenyi.cd << "\n  significant pairs\n";
    bool any = false;
    for (int i = 0; i < t.q(); ++i)
        for (int j = i + 1; j < t.q(); ++j) {
            if (!r.nemenyi.significant[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) continue;
            any = true;
            o << "    " << t.models[static_cast<std::size_t>(i)] << " vs " << t.models[static_cast<std::size_t>(j)]
              << " (|diff| = " << std::abs(t.average(i) - t.average(j)) << ")\n";
        }
    if (!any) o << "    none\n";
    o << "\nwilcoxon (" << r.proposed << " - " << r.baseline << ")\n";
    if (!r.wilcoxon) {
        o << "  skipped: fewer than 5 datasets\n";
    } else {
        const auto& w = *r.wilcoxon;
        o << "  R+ = " << w.r_plus << "\n  R- = " << w.r_minus << "\n  R_min = " << w.r_min << "\n  z = " << w.z
          << "\n  z critical = " << w.z_critical
          << "\n  decision = " << (w.reject ? "reject H0 (pair differs)" : "fail to reject H0") << "\n";
    }
    return o.str();
}

}  // namespace qsurf
