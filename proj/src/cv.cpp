#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>

#include "mmtda/error.hpp"
#include "mmtda/learn.hpp"
#include "mmtda/rng.hpp"

namespace mmtda::learn {

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

double accuracy_of(std::span<const int> predictions, std::span<const int> labels) {
  std::size_t correct = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) correct += predictions[i] == labels[i];
  return static_cast<double>(correct) / static_cast<double>(labels.size());
}

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

Split split_samples(const FoldAssignment& folds, std::size_t fold) {
  Split s;
  for (std::size_t i = 0; i < folds.fold_of.size(); ++i)
    (static_cast<std::size_t>(folds.fold_of[i]) == fold ? s.test : s.train).push_back(i);
  return s;
}

bool has_two_classes(std::span<const int> labels) {
  return std::adjacent_find(labels.begin(), labels.end(), std::not_equal_to<>()) != labels.end();
}

// Most frequent label; the fallback prediction when a training fold is single-class.
int mode_label(std::span<const int> labels, std::size_t num_classes) { return majority_vote(labels, num_classes); }

}  // namespace

FoldAssignment assign_folds(std::span<const int> labels, std::size_t num_classes, const CvSpec& spec) {
  const std::size_t n = labels.size();
  if (spec.folds < 2) throw ParameterError("cv: folds must be >= 2");
  if (n < spec.folds)
    throw PreconditionError("cv: " + std::to_string(n) + " samples cannot fill " + std::to_string(spec.folds) +
                            " folds");
  FoldAssignment out;
  out.folds = spec.folds;
  out.fold_of.assign(n, 0);
  Rng rng(spec.seed);

  std::vector<std::vector<std::size_t>> by_class(num_classes);
  for (std::size_t i = 0; i < n; ++i) {
    if (labels[i] < 0 || static_cast<std::size_t>(labels[i]) >= num_classes)
      throw PreconditionError("cv: label out of range");
    by_class[static_cast<std::size_t>(labels[i])].push_back(i);
  }

  bool stratify = spec.stratified;
  if (stratify) {
    for (std::size_t c = 0; c < num_classes; ++c) {
      if (!by_class[c].empty() && by_class[c].size() < spec.folds) {
        stratify = false;
        out.warning = "class " + std::to_string(c) + " has " + std::to_string(by_class[c].size()) +
                      " samples, fewer than " + std::to_string(spec.folds) + " folds; using unstratified folds";
        break;
      }
    }
  }
  out.stratified = stratify;

  std::size_t counter = 0;
  if (stratify) {
    for (auto& members : by_class) {
      shuffle(members, rng);
      for (std::size_t i : members) out.fold_of[i] = static_cast<int>(counter++ % spec.folds);
    }
  } else {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    shuffle(all, rng);
    for (std::size_t i : all) out.fold_of[i] = static_cast<int>(counter++ % spec.folds);
  }
  return out;
}

CvResult cv_accuracy_tda(const NodeCountMatrix& matrix, const CvSpec& spec, const LogRegOptions& options) {
  const std::size_t n = matrix.rows;
  const std::size_t m = matrix.cols;
  CvResult result;
  result.folds = assign_folds(matrix.sample_labels, matrix.num_classes, spec);
  result.predictions.assign(n, 0);

  std::vector<double> X;
  std::vector<int> y;
  for (std::size_t fold = 0; fold < spec.folds; ++fold) {
    const Split split = split_samples(result.folds, fold);
    X.clear();
    y.clear();
    for (std::size_t i : split.train) {
      const auto r = matrix.row(i);
      X.insert(X.end(), r.begin(), r.end());
      y.push_back(matrix.sample_labels[i]);
    }
    if (!has_two_classes(y)) {
      const int guess = mode_label(y, matrix.num_classes);
      for (std::size_t i : split.test) result.predictions[i] = guess;
      continue;
    }
    const auto model = train_logreg(MatrixView{X, split.train.size(), m}, y, matrix.num_classes, options);
    for (std::size_t i : split.test) result.predictions[i] = predict_class(model, matrix.row(i));
  }
  result.accuracy = accuracy_of(result.predictions, matrix.sample_labels);
  return result;
}

CvResult cv_accuracy_svm(const SampledData& sampled, const CvSpec& spec, const SvmOptions& options,
                         const FoldObserver& observer) {
  const std::size_t n = sampled.num_samples();
  const std::size_t d = sampled.dim;
  const std::size_t k = sampled.k;
  CvResult result;
  result.folds = assign_folds(sampled.labels, sampled.num_classes, spec);
  result.predictions.assign(n, 0);

  std::vector<double> X;
  std::vector<int> y;
  std::vector<std::size_t> train_points;
  for (std::size_t fold = 0; fold < spec.folds; ++fold) {
    const Split split = split_samples(result.folds, fold);
    X.clear();
    y.clear();
    train_points.clear();
    // Whole samples go to one side; datapoints are never split.
    for (std::size_t s : split.train) {
      const auto block = sampled.sample_block(s);
      X.insert(X.end(), block.begin(), block.end());
      y.insert(y.end(), k, sampled.labels[s]);
      for (std::size_t p = s * k; p < (s + 1) * k; ++p) train_points.push_back(p);
    }
    if (observer) observer(fold, train_points, split.test);
    if (!has_two_classes(y)) {
      const int guess = mode_label(y, sampled.num_classes);
      for (std::size_t s : split.test) result.predictions[s] = guess;
      continue;
    }
    SvmOptions fold_options = options;
    fold_options.seed = mix_seed({options.seed, fold});
    const auto model = train_svm(X, d, y, sampled.num_classes, fold_options);
    for (std::size_t s : split.test) result.predictions[s] = svm_vote_predict(model, sampled.sample_block(s));
  }
  result.accuracy = accuracy_of(result.predictions, sampled.labels);
  return result;
}

CvResult cv_accuracy_tda_strict(const SampledData& sampled, const mapper::MapperParams& params, const CvSpec& spec,
                                const LogRegOptions& options, bool normalize_counts) {
  const std::size_t n = sampled.num_samples();
  const std::size_t d = sampled.dim;
  const std::size_t k = sampled.k;
  CvResult result;
  result.folds = assign_folds(sampled.labels, sampled.num_classes, spec);
  result.predictions.assign(n, 0);

  for (std::size_t fold = 0; fold < spec.folds; ++fold) {
    const Split split = split_samples(result.folds, fold);

    // Training cloud with samples renumbered 0..train-1.
    SampledData train;
    train.dim = d;
    train.k = k;
    train.num_classes = sampled.num_classes;
    for (std::size_t t = 0; t < split.train.size(); ++t) {
      const std::size_t s = split.train[t];
      const auto block = sampled.sample_block(s);
      train.coords.insert(train.coords.end(), block.begin(), block.end());
      train.owner.insert(train.owner.end(), k, static_cast<int>(t));
      train.labels.push_back(sampled.labels[s]);
    }
    if (!has_two_classes(train.labels)) {
      const int guess = mode_label(train.labels, sampled.num_classes);
      for (std::size_t s : split.test) result.predictions[s] = guess;
      continue;
    }
    const auto graph = mapper::build_graph(train, params);
    NodeCountMatrix mat = node_count_matrix(graph, train);
    if (normalize_counts) mat = normalize_by_k(mat, k);
    const auto model = train_logreg(MatrixView{mat.counts, mat.rows, mat.cols}, mat.sample_labels,
                                    mat.num_classes, options);

    std::vector<std::vector<std::size_t>> nodes_of(train.size());
    for (const auto& node : graph.nodes)
      for (std::size_t p : node.members) nodes_of[p].push_back(node.id);

    std::vector<double> counts(graph.num_nodes());
    for (std::size_t s : split.test) {
      std::fill(counts.begin(), counts.end(), 0.0);
      const auto block = sampled.sample_block(s);
      for (std::size_t i = 0; i < k; ++i) {
        const double* q = block.data() + i * d;
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t p = 0; p < train.size(); ++p) {
          const double* x = train.coords.data() + p * d;
          double ss = 0.0;
          for (std::size_t c = 0; c < d; ++c) ss += (q[c] - x[c]) * (q[c] - x[c]);
          if (ss < best) {
            best = ss;
            nearest = p;
          }
        }
        for (std::size_t node : nodes_of[nearest]) counts[node] += 1.0;
      }
      if (normalize_counts)
        for (double& v : counts) v /= static_cast<double>(k);
      result.predictions[s] = predict_class(model, counts);
    }
  }
  result.accuracy = accuracy_of(result.predictions, sampled.labels);
  return result;
}

}  // namespace mmtda::learn
