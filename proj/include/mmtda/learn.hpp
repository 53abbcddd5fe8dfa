#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mmtda/dataio.hpp"
#include "mmtda/featurize.hpp"
#include "mmtda/mapper.hpp"

namespace mmtda::learn {

/// Index of the largest entry; ties go to the smallest index.
std::size_t argmax(std::span<const double> values);

// ---------------------------------------------------------------------------
// Multinomial logistic regression

struct LogRegOptions {
  double l2 = 1.0;
  /// > 0 switches to proximal gradient steps (soft-thresholding) for a sparse fit.
  double l1 = 0.0;
  std::size_t max_iters = 2000;
  double grad_tol = 1e-6;
};

/// Weights are C rows of (m + 1): m feature weights followed by the intercept.
struct LogRegModel {
  std::size_t num_classes = 0;
  std::size_t num_features = 0;
  std::vector<double> weights;
  double l2 = 0.0;
  std::size_t iterations = 0;

  std::span<const double> class_weights(std::size_t c) const {
    return {weights.data() + c * (num_features + 1), num_features + 1};
  }
};

/// Row-major design matrix view.
struct MatrixView {
  std::span<const double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::span<const double> row(std::size_t i) const { return data.subspan(i * cols, cols); }
};

/// Summed cross-entropy plus (l2/2)*||W||^2. The intercepts are penalised
/// along with the feature weights.
double logreg_objective(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                        std::span<const double> weights, double l2);
/// Gradient of logreg_objective, written into `grad` (same layout as weights).
void logreg_gradient(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                     std::span<const double> weights, double l2, std::span<double> grad);

/// Full-batch gradient descent from zero with Barzilai-Borwein trial steps
/// and Armijo backtracking. Stops after max_iters or when ||grad|| < grad_tol.
LogRegModel train_logreg(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                         const LogRegOptions& options = {});

/// Softmax class probabilities.
std::vector<double> predict_logreg(const LogRegModel& model, std::span<const double> x);
int predict_class(const LogRegModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// One-vs-rest SVM

enum class KernelKind { Linear, Rbf };

struct SvmOptions {
  KernelKind kernel = KernelKind::Rbf;
  double C = 1.0;
  /// RBF width; <= 0 selects 1 / (d * variance of all training feature values).
  double gamma = 0.0;
  /// Pegasos passes over the data (linear kernel).
  std::size_t epochs = 10;
  /// Dual coordinate-ascent sweeps (RBF kernel).
  std::size_t sweeps = 30;
  /// RBF training sets larger than this are subsampled uniformly (seeded).
  std::size_t max_train_points = 3000;
  std::uint64_t seed = 0;
};

struct SvmModel {
  KernelKind kernel = KernelKind::Linear;
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  double gamma = 0.0;
  // Linear: per class, w (dim) and b, applied to x - center.
  std::vector<double> center;
  std::vector<double> w;
  std::vector<double> b;
  // RBF: support vectors (row-major) and per-class coefficients alpha_i*y_i,
  // decision_c(x) = sum_i coef[c][i] * (K(sv_i, x) + 1).
  std::vector<double> support;
  std::vector<double> coef;  // num_classes x num_support

  std::size_t num_support() const { return dim == 0 ? 0 : support.size() / dim; }
};

SvmModel train_svm(std::span<const double> coords, std::size_t dim, std::span<const int> y,
                   std::size_t num_classes, const SvmOptions& options);

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x);
int svm_predict(const SvmModel& model, std::span<const double> x);

/// Most frequent vote; ties go to the smallest class index.
int majority_vote(std::span<const int> votes, std::size_t num_classes);
/// Classifies every datapoint of `sample_coords` and returns the majority.
int svm_vote_predict(const SvmModel& model, std::span<const double> sample_coords);

// ---------------------------------------------------------------------------
// Cross-validation

struct CvSpec {
  std::size_t folds = 3;
  bool stratified = true;
  std::uint64_t seed = 0;
};

struct FoldAssignment {
  std::vector<int> fold_of;  // per sample
  std::size_t folds = 0;
  bool stratified = false;
  std::string warning;
};

/// Stratified: each class is shuffled and dealt round-robin with a counter
/// that carries across classes. Falls back to an unstratified shuffle (with a
/// warning) when some class has fewer members than folds.
FoldAssignment assign_folds(std::span<const int> labels, std::size_t num_classes, const CvSpec& spec);

struct CvResult {
  double accuracy = 0.0;
  std::vector<int> predictions;  // out-of-fold, per sample
  FoldAssignment folds;
};

/// Called once per fold with the pooled training datapoints and the held-out samples.
using FoldObserver =
    std::function<void(std::size_t fold, std::span<const std::size_t> train_points,
                       std::span<const std::size_t> test_samples)>;

CvResult cv_accuracy_tda(const NodeCountMatrix& matrix, const CvSpec& spec, const LogRegOptions& options = {});

CvResult cv_accuracy_svm(const SampledData& sampled, const CvSpec& spec, const SvmOptions& options,
                         const FoldObserver& observer = {});

/// Leakage-free variant: the graph is rebuilt from the training samples of
/// each fold and every held-out datapoint joins the nodes of its nearest
/// training datapoint.
CvResult cv_accuracy_tda_strict(const SampledData& sampled, const mapper::MapperParams& params,
                                const CvSpec& spec, const LogRegOptions& options = {},
                                bool normalize_counts = false);

}  // namespace mmtda::learn
