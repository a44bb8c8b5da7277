#pragma once

// Model registry. Training is split in two steps so a grid search can reuse
// everything that does not depend on the parameters: `prepare` scales the
// split, draws Universum/undersampling sets and accumulates statistics;
// `fit` solves for one parameter point.

#include "qsurf/closed_form.hpp"
#include "qsurf/hinge.hpp"
#include "qsurf/model.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qsurf {

enum class Solver { closed_form, box_dual, primal_qp, svm_dual };

struct ModelSpec {
    std::string id;
    FeatureMap map;
    Solver solver;
    bool universum;  // uses a generated Universum set
    bool imbalance;  // runs the undersampling / budget protocol
    std::vector<std::string> grid_axes;
};

const std::vector<ModelSpec>& model_registry();
/// Throws std::invalid_argument listing the valid ids.
const ModelSpec& model_spec(const std::string& id);

struct PrepareOptions {
    double universum_fraction = 0.10;
    bool scale = true;
};

class PreparedFit {
public:
    PreparedFit(const ModelSpec& spec, const LabeledDataset& train, std::uint64_t seed,
                const PrepareOptions& opts = {});

    /// Fits one parameter point; the returned model carries the scaler.
    Model fit(const ModelParams& p) const;
    /// Scaled copy of raw points, in the space the models are fitted in.
    Matrix transform(const Matrix& raw) const;

    const ModelSpec& spec() const { return spec_; }
    const std::map<std::string, std::string>& info() const { return info_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

private:
    ModelSpec spec_;
    std::uint64_t seed_;
    std::optional<ScalerState> scaler_;
    LabeledDataset train_;  // scaled
    Matrix A_, B_, U_, B_tilde_, U_hat_;
    LsStats stats_;
    std::map<std::string, std::string> info_;
    std::vector<std::string> warnings_;
};

/// prepare + fit in one step.
Model train_model(const std::string& id, const LabeledDataset& train, const ModelParams& p, std::uint64_t seed,
                  const PrepareOptions& opts = {});

}  // namespace qsurf
