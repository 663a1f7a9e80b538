#include "filmner/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "filmner/util.hpp"

namespace filmner {

namespace {

constexpr int kMaxIterations = 5000;
constexpr double kParamTolerance = 1e-9;

// log(1 + exp(s)) - y*s, stable for large |s|.
double logistic_term(double s, int y) {
  double soft = s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s));
  return soft - y * s;
}

double penalty_term(const std::vector<double>& w, Penalty penalty,
                    double strength) {
  double acc = 0.0;
  if (penalty == Penalty::kL1) {
    for (double v : w) acc += std::abs(v);
    return strength * acc;
  }
  for (double v : w) acc += v * v;
  return 0.5 * strength * acc;
}

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

void standardization_stats(const std::vector<std::vector<double>>& rows,
                           std::vector<double>& mean,
                           std::vector<double>& scale) {
  const std::size_t n = rows.size(), d = rows.front().size();
  mean.assign(d, 0.0);
  scale.assign(d, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) mean[j] += r[j];
  for (std::size_t j = 0; j < d; ++j) mean[j] /= static_cast<double>(n);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < d; ++j) {
      double c = r[j] - mean[j];
      scale[j] += c * c;
    }
  for (std::size_t j = 0; j < d; ++j) {
    scale[j] = std::sqrt(scale[j] / static_cast<double>(n));
    if (scale[j] == 0.0) scale[j] = 1.0;  // constant column
  }
}

std::vector<std::vector<double>> flatten_all(
    const std::vector<FeatureVector>& features) {
  std::vector<std::vector<double>> rows;
  rows.reserve(features.size());
  for (const auto& f : features) rows.push_back(f.flatten());
  return rows;
}

}  // namespace

std::string penalty_name(Penalty p) {
  return p == Penalty::kL1 ? "l1" : "l2";
}

Penalty penalty_from_name(const std::string& name) {
  if (name == "l1") return Penalty::kL1;
  if (name == "l2") return Penalty::kL2;
  throw std::invalid_argument("unknown penalty: " + name);
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  double e = std::exp(z);
  return e / (1.0 + e);
}

double predict_proba_flat(const LinearModel& m, const std::vector<double>& x) {
  if (x.size() != m.weights.size())
    throw std::invalid_argument("predict_proba: dimension mismatch");
  double z = m.bias;
  for (std::size_t j = 0; j < x.size(); ++j)
    z += m.weights[j] * (x[j] - m.feature_mean[j]) / m.feature_scale[j];
  return sigmoid(z);
}

double predict_proba(const LinearModel& m, const FeatureVector& x) {
  return predict_proba_flat(m, x.flatten());
}

double regularized_loss(const std::vector<std::vector<double>>& X,
                        const std::vector<int>& y,
                        const std::vector<double>& w, double b,
                        Penalty penalty, double strength) {
  double acc = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double s = b + std::inner_product(X[i].begin(), X[i].end(), w.begin(), 0.0);
    acc += logistic_term(s, y[i]);
  }
  return acc / static_cast<double>(X.size()) + penalty_term(w, penalty, strength);
}

std::vector<double> loss_gradient(const std::vector<std::vector<double>>& X,
                                  const std::vector<int>& y,
                                  const std::vector<double>& w, double b,
                                  Penalty penalty, double strength) {
  const std::size_t n = X.size(), d = w.size();
  std::vector<double> grad(d + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s = b + std::inner_product(X[i].begin(), X[i].end(), w.begin(), 0.0);
    double r = sigmoid(s) - y[i];
    for (std::size_t j = 0; j < d; ++j) grad[j] += r * X[i][j];
    grad[d] += r;
  }
  for (auto& g : grad) g /= static_cast<double>(n);
  for (std::size_t j = 0; j < d; ++j) {
    if (penalty == Penalty::kL2)
      grad[j] += strength * w[j];
    else
      grad[j] += strength * (w[j] > 0 ? 1.0 : (w[j] < 0 ? -1.0 : 0.0));
  }
  return grad;
}

double mean_log_loss(const LinearModel& m,
                     const std::vector<std::vector<double>>& X,
                     const std::vector<int>& y) {
  if (X.empty()) throw std::invalid_argument("mean_log_loss: empty data");
  double acc = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    double z = m.bias;
    for (std::size_t j = 0; j < X[i].size(); ++j)
      z += m.weights[j] * (X[i][j] - m.feature_mean[j]) / m.feature_scale[j];
    acc += logistic_term(z, y[i]);
  }
  return acc / static_cast<double>(X.size());
}

LinearModel train_matrix(const std::vector<std::vector<double>>& rows,
                         const std::vector<int>& labels,
                         const std::vector<std::string>& feature_names,
                         const TrainOptions& options,
                         std::vector<double>* loss_trace) {
  if (rows.empty() || rows.size() != labels.size())
    throw std::invalid_argument("train: empty data or label size mismatch");
  const std::size_t n = rows.size(), d = rows.front().size();
  bool has_pos = false, has_neg = false;
  for (int y : labels) {
    if (y != 0 && y != 1)
      throw std::invalid_argument("train: labels must be 0/1");
    (y ? has_pos : has_neg) = true;
  }
  if (!has_pos || !has_neg)
    throw std::invalid_argument("train: both classes must be present");
  for (const auto& r : rows) {
    if (r.size() != d) throw std::invalid_argument("train: ragged rows");
    for (double v : r)
      if (!std::isfinite(v))
        throw std::invalid_argument("train: non-finite feature value");
  }

  LinearModel m;
  m.feature_names = feature_names;
  m.penalty = options.penalty;
  m.strength = options.strength;
  m.seed = options.seed;
  standardization_stats(rows, m.feature_mean, m.feature_scale);

  std::vector<std::vector<double>> X(n, std::vector<double>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      X[i][j] = (rows[i][j] - m.feature_mean[j]) / m.feature_scale[j];

  // Curvature bound for the logistic loss: (1/4n) sum_i ||(x_i, 1)||^2,
  // plus lambda for the L2 term.
  double sq = 0.0;
  for (const auto& r : X) {
    for (double v : r) sq += v * v;
    sq += 1.0;
  }
  double lipschitz = sq / (4.0 * static_cast<double>(n));
  if (options.penalty == Penalty::kL2) lipschitz += options.strength;
  if (lipschitz <= 0.0) lipschitz = 1.0;
  const double step = 1.0 / lipschitz;

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  std::vector<double> sigma(n), grad(d);
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    if (loss_trace)
      loss_trace->push_back(
          regularized_loss(X, labels, w, b, options.penalty, options.strength));
    for (std::size_t i = 0; i < n; ++i) {
      double s = b;
      const auto& xi = X[i];
      for (std::size_t j = 0; j < d; ++j) s += w[j] * xi[j];
      sigma[i] = sigmoid(s) - labels[i];
    }
    std::fill(grad.begin(), grad.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double r = sigma[i];
      const auto& xi = X[i];
      for (std::size_t j = 0; j < d; ++j) grad[j] += r * xi[j];
      gb += r;
    }
    double inv_n = 1.0 / static_cast<double>(n);
    double delta = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      double g = grad[j] * inv_n;
      double next;
      if (options.penalty == Penalty::kL2) {
        next = w[j] - step * (g + options.strength * w[j]);
      } else {
        next = soft_threshold(w[j] - step * g, step * options.strength);
      }
      delta = std::max(delta, std::abs(next - w[j]));
      w[j] = next;
    }
    double next_b = b - step * gb * inv_n;
    delta = std::max(delta, std::abs(next_b - b));
    b = next_b;
    if (delta < kParamTolerance) break;
  }

  m.weights = std::move(w);
  m.bias = b;
  return m;
}

LinearModel train(const std::vector<FeatureVector>& features,
                  const std::vector<int>& labels, const TrainOptions& options,
                  std::vector<double>* loss_trace) {
  return train_matrix(flatten_all(features), labels,
                      FeatureVector::component_names(), options, loss_trace);
}

std::vector<std::pair<Penalty, double>> default_model_grid() {
  std::vector<std::pair<Penalty, double>> grid;
  for (double s : {0.001, 0.01, 0.1, 1.0, 10.0}) {
    grid.emplace_back(Penalty::kL1, s);
    grid.emplace_back(Penalty::kL2, s);
  }
  return grid;
}

namespace {

struct FoldData {
  std::vector<std::vector<double>> train_rows;
  std::vector<int> train_labels;
  std::vector<std::vector<double>> val_rows;
  std::vector<int> val_labels;
};

double f1_at_threshold(const LinearModel& m,
                       const std::vector<std::vector<double>>& rows,
                       const std::vector<int>& labels, double threshold) {
  std::size_t tp = 0, fp = 0, fn = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool pred = predict_proba_flat(m, rows[i]) >= threshold;
    if (pred && labels[i])
      ++tp;
    else if (pred && !labels[i])
      ++fp;
    else if (!pred && labels[i])
      ++fn;
  }
  double p = (tp + fp) ? static_cast<double>(tp) / (tp + fp) : 0.0;
  double r = (tp + fn) ? static_cast<double>(tp) / (tp + fn) : 0.0;
  return (p + r) > 0 ? 2.0 * p * r / (p + r) : 0.0;
}

}  // namespace

HyperParams select_hyperparameters(
    const std::vector<LabeledFeatureGroup>& groups,
    const std::vector<std::pair<Penalty, double>>& grid, std::uint64_t seed) {
  if (grid.empty())
    throw std::invalid_argument("select_hyperparameters: empty grid");
  if (groups.empty())
    throw std::invalid_argument("select_hyperparameters: no groups");

  // Deduplicate the grid; selection is invariant to repeats.
  std::vector<std::pair<Penalty, double>> points;
  {
    std::set<std::pair<double, int>> seen;
    for (const auto& [p, s] : grid)
      if (seen.insert({s, p == Penalty::kL1 ? 1 : 2}).second)
        points.emplace_back(p, s);
  }

  std::vector<std::string> channels, episodes;
  for (const auto& g : groups) {
    channels.push_back(g.channel_id);
    episodes.push_back(g.episode_id);
  }
  std::vector<int> fold_of = internal_fold_assignment(channels, episodes, 3);

  std::vector<FoldData> folds(3);
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    for (int f = 0; f < 3; ++f) {
      bool in_val = fold_of[gi] == f;
      auto& rows = in_val ? folds[f].val_rows : folds[f].train_rows;
      auto& labels = in_val ? folds[f].val_labels : folds[f].train_labels;
      for (std::size_t i = 0; i < groups[gi].features.size(); ++i) {
        rows.push_back(groups[gi].features[i].flatten());
        labels.push_back(groups[gi].labels[i]);
      }
    }
  }

  const std::vector<double> thresholds = {0.1, 0.2, 0.3, 0.4, 0.5,
                                          0.6, 0.7, 0.8, 0.9};
  HyperParams best;
  best.penalty = points.front().first;
  best.strength = points.front().second;
  best.decision_threshold = 0.5;
  double best_f1 = -1.0;

  auto prefer = [](const HyperParams& a, double fa, const HyperParams& b,
                   double fb) {
    if (fa != fb) return fa > fb;
    if (a.strength != b.strength) return a.strength > b.strength;
    if (a.penalty != b.penalty) return a.penalty == Penalty::kL2;
    double da = std::abs(a.decision_threshold - 0.5);
    double db = std::abs(b.decision_threshold - 0.5);
    if (da != db) return da < db;
    return a.decision_threshold < b.decision_threshold;
  };

  for (const auto& [penalty, strength] : points) {
    TrainOptions opt{penalty, strength, seed};
    // Mean F1 per threshold across usable folds.
    std::vector<double> f1_sum(thresholds.size(), 0.0);
    int usable = 0;
    for (const auto& fold : folds) {
      if (fold.train_rows.empty() || fold.val_rows.empty()) continue;
      bool has_pos = false, has_neg = false;
      for (int y : fold.train_labels) (y ? has_pos : has_neg) = true;
      if (!has_pos || !has_neg) continue;
      LinearModel m = train_matrix(fold.train_rows, fold.train_labels,
                                   FeatureVector::component_names(), opt);
      for (std::size_t ti = 0; ti < thresholds.size(); ++ti)
        f1_sum[ti] += f1_at_threshold(m, fold.val_rows, fold.val_labels,
                                      thresholds[ti]);
      ++usable;
    }
    for (std::size_t ti = 0; ti < thresholds.size(); ++ti) {
      double mean_f1 = usable ? f1_sum[ti] / usable : 0.0;
      HyperParams hp{penalty, strength, thresholds[ti]};
      if (best_f1 < 0 || prefer(hp, mean_f1, best, best_f1)) {
        best = hp;
        best_f1 = mean_f1;
      }
    }
  }
  return best;
}

std::vector<double> feature_significance(
    const std::vector<FeatureVector>& features, const std::vector<int>& labels,
    const LinearModel& m, int trials, std::uint64_t seed) {
  if (trials < 100)
    throw std::invalid_argument("feature_significance: trials must be >= 100");
  std::vector<std::vector<double>> rows = flatten_all(features);
  if (rows.empty()) throw std::invalid_argument("feature_significance: no data");
  const std::size_t d = rows.front().size();
  TrainOptions opt{m.penalty, m.strength, m.seed};

  LinearModel full = train_matrix(rows, labels, m.feature_names, opt);
  double loss_full = mean_log_loss(full, rows, labels);

  std::vector<double> p_values(d, 1.0);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<std::vector<double>> ablated = rows;
    for (auto& r : ablated) r[j] = 0.0;
    LinearModel m_ablated = train_matrix(ablated, labels, m.feature_names, opt);
    double loss_ablated = mean_log_loss(m_ablated, ablated, labels);
    double observed = loss_ablated - loss_full;

    std::mt19937_64 rng(mix_seed(seed, j));
    std::vector<double> column(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i][j];
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
      std::vector<double> permuted = column;
      std::shuffle(permuted.begin(), permuted.end(), rng);
      std::vector<std::vector<double>> trial_rows = rows;
      for (std::size_t i = 0; i < rows.size(); ++i)
        trial_rows[i][j] = permuted[i];
      LinearModel m_perm = train_matrix(trial_rows, labels, m.feature_names, opt);
      double improvement =
          loss_ablated - mean_log_loss(m_perm, trial_rows, labels);
      if (improvement >= observed - 1e-12) ++hits;
    }
    p_values[j] = static_cast<double>(hits) / trials;
  }
  return p_values;
}

}  // namespace filmner
