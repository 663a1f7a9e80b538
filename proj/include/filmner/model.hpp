#ifndef FILMNER_MODEL_HPP
#define FILMNER_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "filmner/features.hpp"

namespace filmner {

enum class Penalty { kL1, kL2 };

std::string penalty_name(Penalty p);
Penalty penalty_from_name(const std::string& name);

// Regularized logistic regression over standardized features. Weights live
// in standardized space; the standardization transform is part of the model.
struct LinearModel {
  std::vector<std::string> feature_names;
  std::vector<double> weights;
  double bias = 0.0;
  Penalty penalty = Penalty::kL2;
  double strength = 0.0;
  double decision_threshold = 0.5;
  std::vector<double> feature_mean;
  std::vector<double> feature_scale;  // 1.0 for constant columns
  std::uint64_t seed = 0;
};

double sigmoid(double z);

// sigmoid(weights . standardize(x) + bias). Rejects dimension mismatches.
double predict_proba(const LinearModel& m, const FeatureVector& x);
double predict_proba_flat(const LinearModel& m, const std::vector<double>& x);

// Mean log-loss plus the penalty term (lambda * ||w||_1 or
// lambda/2 * ||w||_2^2; bias unpenalized) on an already-standardized matrix.
double regularized_loss(const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y,
                        const std::vector<double>& w, double b,
                        Penalty penalty, double strength);

// Analytic gradient of regularized_loss; last entry is d/d bias. For L1 the
// penalty subgradient sign(w) is used, which is exact off the axes.
std::vector<double> loss_gradient(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y,
                                  const std::vector<double>& w, double b,
                                  Penalty penalty, double strength);

// Unregularized mean log-loss of a fitted model on raw (unstandardized) rows.
double mean_log_loss(const LinearModel& m,
                     const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y);

struct TrainOptions {
  Penalty penalty = Penalty::kL2;
  double strength = 1.0;
  std::uint64_t seed = 0;
};

// Full-batch proximal gradient descent from zero init, fixed step 1/L with L
// from the logistic curvature bound, 5000 iteration cap, stop when the
// parameter change drops below 1e-9. Deterministic: identical inputs give
// bit-identical models. Rejects single-class data and non-finite features.
// loss_trace, when given, receives the regularized objective per iteration.
LinearModel train(const std::vector<FeatureVector>& features,
                  const std::vector<int>& labels, const TrainOptions& options,
                  std::vector<double>* loss_trace = nullptr);

LinearModel train_matrix(const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels,
                         const std::vector<std::string>& feature_names,
                         const TrainOptions& options,
                         std::vector<double>* loss_trace = nullptr);

// Candidate vectors and labels for one transcript, used as the grouping unit
// for inner cross-validation.
struct LabeledFeatureGroup {
  std::string channel_id;
  std::string episode_id;
  std::vector<FeatureVector> features;
  std::vector<int> labels;
};

struct HyperParams {
  Penalty penalty = Penalty::kL2;
  double strength = 1.0;
  double decision_threshold = 0.5;
};

// Default search grid: strengths {0.001, 0.01, 0.1, 1, 10} x {L1, L2}.
std::vector<std::pair<Penalty, double>> default_model_grid();

// 3-fold inner cross-validation over the groups (grouped by channel when
// more than 3 channels are present): picks the (penalty, strength) and then
// decision threshold in {0.1..0.9} maximizing mean inner-fold F1. Ties break
// toward stronger regularization, then toward threshold 0.5.
HyperParams select_hyperparameters(
    const std::vector<LabeledFeatureGroup>& groups,
    const std::vector<std::pair<Penalty, double>>& grid,
    std::uint64_t seed = 0);

// Permutation test per feature column: the p-value is the fraction of
// label-preserving column permutations whose refit log-loss improvement over
// a column-ablated refit meets or exceeds the unpermuted improvement.
// Deterministic given seed; requires trials >= 100.
std::vector<double> feature_significance(
    const std::vector<FeatureVector>& features, const std::vector<int>& labels,
    const LinearModel& m, int trials, std::uint64_t seed);

}  // namespace filmner

#endif
