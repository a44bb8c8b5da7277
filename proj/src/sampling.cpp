#include "qsurf/sampling.hpp"

#include "qsurf/rng.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qsurf {

Matrix gen_universum_avg(const LabeledDataset& ds, const UniversumOptions& opts, std::uint64_t seed) {
    if (!(opts.fraction > 0.0 && opts.fraction <= 1.0))
        throw std::invalid_argument("gen_universum_avg: fraction must be in (0, 1]");
    if (opts.count && *opts.count < 1) throw std::invalid_argument("gen_universum_avg: count must be >= 1");
    const auto pos = ds.indices_of(1);
    const auto neg = ds.indices_of(-1);
    if (pos.empty() || neg.empty()) throw std::invalid_argument("gen_universum_avg: empty class");

    auto pool = [&](const std::vector<std::size_t>& idx, int tag) {
        const auto k = static_cast<std::size_t>(std::ceil(opts.fraction * static_cast<double>(idx.size()) - 1e-12));
        Rng rng(seed, "universum-pool", static_cast<std::uint64_t>(tag));
        std::vector<std::size_t> out;
        for (auto i : rng.sample(idx.size(), std::max<std::size_t>(k, 1))) out.push_back(idx[i]);
        return out;
    };
    const auto pp = pool(pos, 1);
    const auto pn = pool(neg, 2);

    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    pairs.reserve(pp.size() * pn.size());
    for (auto a : pp)
        for (auto b : pn) pairs.emplace_back(a, b);
    Rng rng(seed, "universum-pairs");
    rng.shuffle(pairs);

    const std::size_t count = opts.count.value_or(pairs.size());
    Matrix U(static_cast<Eigen::Index>(count), ds.dim());
    for (std::size_t j = 0; j < count; ++j) {
        const auto [a, b] = pairs[j % pairs.size()];
        U.row(static_cast<Eigen::Index>(j)) =
            0.5 * (ds.points.row(static_cast<Eigen::Index>(a)) + ds.points.row(static_cast<Eigen::Index>(b)));
    }
    return U;
}

UndersampledPair undersample_majority(const LabeledDataset& ds, std::uint64_t seed) {
    const auto pos = ds.indices_of(1);
    const auto neg = ds.indices_of(-1);
    if (pos.size() > neg.size())
        throw std::invalid_argument("undersample_majority: minority class (" + std::to_string(pos.size()) +
                                    ") is larger than majority class (" + std::to_string(neg.size()) +
                                    "); relabel so that +1 is the minority");
    Rng rng(seed, "undersample");
    UndersampledPair out;
    for (auto i : rng.sample(neg.size(), pos.size())) out.majority_rows.push_back(neg[i]);
    out.A = select_rows(ds.points, pos);
    out.B_tilde = select_rows(ds.points, out.majority_rows);
    return out;
}

UniversumBudgets universum_budgets(std::size_t n_minority, std::size_t n_majority) {
    if (n_minority < 1 || n_majority < n_minority)
        throw std::invalid_argument("universum_budgets: need n_majority >= n_minority >= 1");
    return {n_majority - n_minority, (n_minority + 1) / 2};
}

Matrix reduce_universum(const Matrix& U, std::size_t g, std::uint64_t seed) {
    if (g > static_cast<std::size_t>(U.rows()))
        throw std::invalid_argument("reduce_universum: g=" + std::to_string(g) + " exceeds " +
                                    std::to_string(U.rows()) + " Universum points");
    Rng rng(seed, "reduce-universum");
    return select_rows(U, rng.sample(static_cast<std::size_t>(U.rows()), g));
}

ImbalanceSample imbalance_sample(const LabeledDataset& ds, std::uint64_t seed, double fraction) {
    ds.validate_for_training();
    ImbalanceSample s;
    s.pair = undersample_majority(ds, seed);
    const auto budgets = universum_budgets(ds.count(1), ds.count(-1));
    auto& u = s.universum;
    u.seed = seed;
    u.r = budgets.r;
    u.g_nominal = budgets.g;
    u.g = std::min(budgets.g, budgets.r);
    if (u.r > 0) {
        u.U = gen_universum_avg(ds, {fraction, u.r}, seed);
        u.U_hat = reduce_universum(u.U, u.g, seed);
    } else {
        u.U.resize(0, ds.dim());
        u.U_hat.resize(0, ds.dim());
    }
    return s;
}

}  // namespace qsurf
