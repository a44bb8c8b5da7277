#include "qsurf/trainer.hpp"

#include <sstream>
#include <stdexcept>

namespace qsurf {

const std::vector<ModelSpec>& model_registry() {
    using F = FeatureMap;
    using S = Solver;
    static const std::vector<ModelSpec> r{
        {"svm", F::linear, S::svm_dual, false, false, {"C"}},
        {"tsvm", F::linear, S::box_dual, false, false, {"C"}},
        {"ls-tsvm", F::linear, S::closed_form, false, false, {"C"}},
        {"u-tsvm", F::linear, S::box_dual, true, false, {"C", "cu", "eps"}},
        {"ls-u-tsvm", F::linear, S::closed_form, true, false, {"C", "cu", "eps"}},
        {"qtsvm", F::quadratic, S::primal_qp, false, false, {"C"}},
        {"ls-qtsvm", F::quadratic, S::closed_form, false, false, {"C"}},
        {"u-qtsvm", F::quadratic, S::primal_qp, true, false, {"C", "cu", "eps"}},
        {"ls-u-qtsvm", F::quadratic, S::closed_form, true, false, {"C", "cu", "eps"}},
        {"im-u-qtsvm", F::quadratic, S::primal_qp, true, true, {"C", "cu", "eps", "lambda"}},
        {"im-ls-u-qtsvm", F::quadratic, S::closed_form, true, true, {"C", "cu", "eps", "lambda"}},
    };
    return r;
}

const ModelSpec& model_spec(const std::string& id) {
    for (const auto& s : model_registry())
        if (s.id == id) return s;
    std::string valid;
    for (const auto& s : model_registry()) valid += (valid.empty() ? "" : ", ") + s.id;
    throw std::invalid_argument("unknown model id '" + id + "' (valid: " + valid + ")");
}

namespace {

LsVariant ls_variant(const std::string& id) {
    if (id == "ls-tsvm") return LsVariant::ls_tsvm;
    if (id == "ls-u-tsvm") return LsVariant::ls_u_tsvm;
    if (id == "ls-qtsvm") return LsVariant::ls_qtsvm;
    if (id == "ls-u-qtsvm") return LsVariant::ls_u_qtsvm;
    return LsVariant::im_ls_u_qtsvm;
}

}  // namespace

PreparedFit::PreparedFit(const ModelSpec& spec, const LabeledDataset& train, std::uint64_t seed,
                         const PrepareOptions& opts)
    : spec_(spec), seed_(seed) {
    train.validate_for_training();
    if (opts.scale) {
        scaler_ = fit_scaler(train);
        train_ = apply_scaler(*scaler_, train);
    } else {
        train_ = train;
    }
    info_["seed"] = std::to_string(seed);
    A_ = train_.positives();
    B_ = train_.negatives();
    if (spec.imbalance) {
        const ImbalanceSample s = imbalance_sample(train_, seed, opts.universum_fraction);
        B_tilde_ = s.pair.B_tilde;
        U_ = s.universum.U;
        U_hat_ = s.universum.U_hat;
        info_["r"] = std::to_string(s.universum.r);
        info_["g"] = std::to_string(s.universum.g);
        if (s.universum.g < s.universum.g_nominal)
            warnings_.push_back("g clamped from " + std::to_string(s.universum.g_nominal) + " to r=" +
                                std::to_string(s.universum.r));
        if (s.universum.r == 0) warnings_.push_back("r=0: Universum terms omitted");
    } else if (spec.universum) {
        U_ = gen_universum_avg(train_, {opts.universum_fraction, std::nullopt}, seed);
        info_["universum"] = std::to_string(U_.rows());
    }
    if (spec.solver == Solver::closed_form) {
        const Eigen::Index n = train_.dim(), d = feature_size(spec.map, n);
        auto stats = [&](const Matrix& X) { return X.rows() ? set_stats(X, spec.map) : SetStats::empty(d); };
        stats_ = LsStats{spec.map, n, stats(A_), stats(B_), stats(B_tilde_), stats(U_), stats(U_hat_)};
    }
    if (!warnings_.empty()) {
        std::string all;
        for (const auto& w : warnings_) all += (all.empty() ? "" : "; ") + w;
        info_["warning"] = all;
    }
}

Model PreparedFit::fit(const ModelParams& p) const {
    p.validate();
    Model m;
    m.id = spec_.id;
    m.scaler = scaler_;
    m.info = info_;
    switch (spec_.solver) {
    case Solver::closed_form:
        m.body = fit_ls_from_stats(ls_variant(spec_.id), stats_, p);
        break;
    case Solver::svm_dual: {
        QPOptions o;
        o.tol = p.qp_tol;
        o.max_iter = p.qp_max_iter;
        SvmModel s = fit_svm_dual(train_, p.C1, o);
        s.params = p;
        m.body = std::move(s);
        break;
    }
    case Solver::box_dual:
        m.body = spec_.universum ? fit_u_tsvm_dual(A_, B_, U_, p) : fit_tsvm_dual(A_, B_, p);
        break;
    case Solver::primal_qp:
        if (spec_.imbalance)
            m.body = fit_im_u_qtsvm_sets(A_, B_, B_tilde_, U_, U_hat_, p);
        else if (spec_.universum)
            m.body = fit_u_qtsvm(A_, B_, U_, p);
        else
            m.body = fit_qtsvm(A_, B_, p);
        break;
    }
    return m;
}

Matrix PreparedFit::transform(const Matrix& raw) const {
    return scaler_ ? apply_scaler(*scaler_, raw) : raw;
}

Model train_model(const std::string& id, const LabeledDataset& train, const ModelParams& p, std::uint64_t seed,
                  const PrepareOptions& opts) {
    return PreparedFit(model_spec(id), train, seed, opts).fit(p);
}

}  // namespace qsurf
