#ifndef HRV_SCHEMES_HPP
#define HRV_SCHEMES_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hrv/features.hpp"

namespace hrv {

enum class SchemeKind { pca, stepwise, all };

const char* to_string(SchemeKind k);
SchemeKind scheme_kind_from_string(const std::string& s);

struct PcaParams {
    double variance_target = 0.90;
};

struct StepwiseParams {
    double entry_p = 0.05;
    double removal_p = 0.10;
};

/// A fitted ANN input scheme: either a PCA projection (with the
/// standardization that preceded it), a stepwise-selected column subset, or
/// the identity pass-through of all 17 features.
struct InputScheme {
    SchemeKind kind = SchemeKind::all;

    // pca
    ColumnStats pca_stats;          // cohort-level standardization
    Eigen::MatrixXd basis;          // columns = retained components
    Eigen::VectorXd eigenvalues;    // all positive eigenvalues, descending
    Eigen::VectorXd explained;      // explained-variance ratios, descending
    double cumulative_explained = 0.0;

    // stepwise
    std::vector<std::size_t> selected; // column indices in selection order

    std::vector<std::string> warnings;

    std::size_t dimension() const;
    std::vector<std::string> input_names() const;

    /// Map one raw 17-feature row onto the scheme's input space.
    Eigen::VectorXd transform(const FeatureVector& row) const;
    Eigen::MatrixXd transform(const Eigen::MatrixXd& rows) const;
};

/// Principal-component scheme: eigen-decomposition of the covariance of the
/// standardized matrix, keeping the smallest k whose cumulative
/// explained-variance ratio reaches params.variance_target.
InputScheme pca_fit(const Eigen::MatrixXd& standardized, const PcaParams& params = {},
                    const ColumnStats* stats = nullptr);

/// Project an already-standardized row onto the retained components.
Eigen::VectorXd pca_transform(const InputScheme& scheme, const Eigen::VectorXd& standardized_row);

/// Forward-backward stepwise OLS of the numeric label (0 = normal, 1 = ihd)
/// on the matrix columns: add the candidate with the smallest coefficient
/// p-value while it is below entry_p, then drop included features whose
/// p-value reaches removal_p; repeat to fixpoint. Ties break on column
/// order. Throws EmptySelectionError when nothing passes entry_p.
InputScheme stepwise_select(const Eigen::MatrixXd& standardized,
                            const std::vector<ClassLabel>& labels,
                            const StepwiseParams& params = {});

/// Same selection on an arbitrary numeric target.
InputScheme stepwise_select_numeric(const Eigen::MatrixXd& standardized,
                                    const Eigen::VectorXd& target,
                                    const StepwiseParams& params = {});

InputScheme all_features_scheme();

void save_scheme(const std::filesystem::path& path, const InputScheme& scheme);
InputScheme load_scheme(const std::filesystem::path& path);

/// JSON payloads, shared by the scheme file and the model bundle.
std::string scheme_to_json_string(const InputScheme& scheme);
InputScheme scheme_from_json_string(const std::string& text);

} // namespace hrv

#endif // HRV_SCHEMES_HPP
