#include <algorithm>
#include <cmath>
#include <numeric>

#include "mmtda/error.hpp"
#include "mmtda/learn.hpp"
#include "mmtda/rng.hpp"

namespace mmtda::learn {

namespace {

double sq_dist(const double* a, const double* b, std::size_t d) {
  double s = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double v = a[c] - b[c];
    s += v * v;
  }
  return s;
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[rng.below(i)]);
}

// Pegasos on the augmented input (x - center, R), R = RMS norm of the
// centred inputs. Treating the bias as a regularised extra coordinate keeps
// the fit equivariant under x -> s*x with C -> C/s^2.
void train_linear(SvmModel& model, std::span<const double> coords, std::span<const int> y,
                  const SvmOptions& options, Rng& rng) {
  const std::size_t d = model.dim;
  const std::size_t n = y.size();
  model.center.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) model.center[c] += coords[i * d + c];
  for (double& v : model.center) v /= static_cast<double>(n);

  std::vector<double> xs(n * d);
  double r2 = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < d; ++c) {
      const double v = coords[i * d + c] - model.center[c];
      xs[i * d + c] = v;
      r2 += v * v;
    }
  r2 /= static_cast<double>(n);
  const double r = r2 > 0.0 ? std::sqrt(r2) : 1.0;

  const double lambda = 1.0 / (options.C * static_cast<double>(n));
  const double radius = 1.0 / std::sqrt(lambda);
  const std::size_t epochs = std::max<std::size_t>(1, options.epochs);

  model.w.assign(model.num_classes * d, 0.0);
  model.b.assign(model.num_classes, 0.0);
  std::vector<std::size_t> order(n);
  std::vector<double> wa(d + 1), avg(d + 1);

  for (std::size_t cls = 0; cls < model.num_classes; ++cls) {
    std::fill(wa.begin(), wa.end(), 0.0);
    std::fill(avg.begin(), avg.end(), 0.0);
    std::size_t averaged = 0;
    std::size_t t = 0;
    for (std::size_t e = 0; e < epochs; ++e) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      shuffle(order, rng);
      for (std::size_t i : order) {
        ++t;
        const double eta = 1.0 / (lambda * static_cast<double>(t));
        const double label = y[i] == static_cast<int>(cls) ? 1.0 : -1.0;
        const double* x = xs.data() + i * d;
        double margin = wa[d] * r;
        for (std::size_t c = 0; c < d; ++c) margin += wa[c] * x[c];
        margin *= label;
        const double shrink = 1.0 - 1.0 / static_cast<double>(t);
        for (double& v : wa) v *= shrink;
        if (margin < 1.0) {
          for (std::size_t c = 0; c < d; ++c) wa[c] += eta * label * x[c];
          wa[d] += eta * label * r;
        }
        double norm2 = 0.0;
        for (double v : wa) norm2 += v * v;
        if (norm2 > radius * radius) {
          const double s = radius / std::sqrt(norm2);
          for (double& v : wa) v *= s;
        }
        // Average the iterates of the final epoch.
        if (e + 1 == epochs) {
          ++averaged;
          for (std::size_t c = 0; c <= d; ++c) avg[c] += (wa[c] - avg[c]) / static_cast<double>(averaged);
        }
      }
    }
    std::copy_n(avg.begin(), d, model.w.begin() + static_cast<std::ptrdiff_t>(cls * d));
    model.b[cls] = avg[d] * r;
  }
}

// Dual coordinate ascent for the hinge loss with kernel K + 1 (the constant
// absorbs the bias). One kernel matrix is shared by all one-vs-rest problems.
void train_rbf(SvmModel& model, std::span<const double> coords, std::span<const int> y, const SvmOptions& options,
               Rng& rng) {
  const std::size_t d = model.dim;
  const std::size_t n = y.size();
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    K[i * n + i] = 2.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = std::exp(-model.gamma * sq_dist(&coords[i * d], &coords[j * d], d)) + 1.0;
      K[i * n + j] = k;
      K[j * n + i] = k;
    }
  }

  std::vector<double> alpha(model.num_classes * n, 0.0);
  std::vector<double> f(n);
  std::vector<std::size_t> order(n);
  const std::size_t sweeps = std::max<std::size_t>(1, options.sweeps);
  for (std::size_t cls = 0; cls < model.num_classes; ++cls) {
    double* a = alpha.data() + cls * n;
    std::fill(f.begin(), f.end(), 0.0);
    for (std::size_t s = 0; s < sweeps; ++s) {
      std::iota(order.begin(), order.end(), std::size_t{0});
      shuffle(order, rng);
      double max_change = 0.0;
      for (std::size_t i : order) {
        const double yi = y[i] == static_cast<int>(cls) ? 1.0 : -1.0;
        const double g = yi * f[i] - 1.0;
        const double updated = std::clamp(a[i] - g / K[i * n + i], 0.0, options.C);
        const double delta = updated - a[i];
        if (delta == 0.0) continue;
        a[i] = updated;
        max_change = std::max(max_change, std::abs(delta));
        const double scale = delta * yi;
        const double* krow = K.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) f[j] += scale * krow[j];
      }
      if (max_change == 0.0) break;
    }
  }

  // Keep rows that carry weight for at least one class.
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t cls = 0; cls < model.num_classes; ++cls)
      if (alpha[cls * n + i] > 0.0) {
        keep.push_back(i);
        break;
      }
  model.support.clear();
  model.support.reserve(keep.size() * d);
  for (std::size_t i : keep) model.support.insert(model.support.end(), &coords[i * d], &coords[i * d] + d);
  model.coef.assign(model.num_classes * keep.size(), 0.0);
  for (std::size_t cls = 0; cls < model.num_classes; ++cls)
    for (std::size_t s = 0; s < keep.size(); ++s) {
      const std::size_t i = keep[s];
      const double yi = y[i] == static_cast<int>(cls) ? 1.0 : -1.0;
      model.coef[cls * keep.size() + s] = alpha[cls * n + i] * yi;
    }
}

}  // namespace

SvmModel train_svm(std::span<const double> coords, std::size_t dim, std::span<const int> y,
                   std::size_t num_classes, const SvmOptions& options) {
  if (dim == 0 || coords.size() != y.size() * dim) throw PreconditionError("svm: data shape mismatch");
  if (!(options.C > 0.0)) throw ParameterError("svm: C must be > 0");
  for (double v : coords)
    if (!std::isfinite(v)) throw PreconditionError("svm: non-finite feature value");
  std::vector<bool> seen(num_classes, false);
  std::size_t distinct = 0;
  for (int l : y) {
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes) throw PreconditionError("svm: label out of range");
    if (!seen[static_cast<std::size_t>(l)]) {
      seen[static_cast<std::size_t>(l)] = true;
      ++distinct;
    }
  }
  if (distinct < 2) throw PreconditionError("svm: training data contains a single class");

  Rng rng(options.seed);
  SvmModel model;
  model.kernel = options.kernel;
  model.dim = dim;
  model.num_classes = num_classes;

  if (options.kernel == KernelKind::Linear) {
    train_linear(model, coords, y, options, rng);
    return model;
  }

  // RBF: optionally thin the training set, then fit.
  std::vector<double> sub_coords;
  std::vector<int> sub_y;
  std::span<const double> fit_coords = coords;
  std::span<const int> fit_y = y;
  if (options.max_train_points > 0 && y.size() > options.max_train_points) {
    std::vector<std::size_t> idx(y.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < options.max_train_points; ++i)
      std::swap(idx[i], idx[i + rng.below(idx.size() - i)]);
    idx.resize(options.max_train_points);
    std::sort(idx.begin(), idx.end());
    for (std::size_t i : idx) {
      sub_coords.insert(sub_coords.end(), &coords[i * dim], &coords[i * dim] + dim);
      sub_y.push_back(y[i]);
    }
    fit_coords = sub_coords;
    fit_y = sub_y;
  }

  if (options.gamma > 0.0) {
    model.gamma = options.gamma;
  } else {
    double mean = 0.0;
    for (double v : fit_coords) mean += v;
    mean /= static_cast<double>(fit_coords.size());
    double var = 0.0;
    for (double v : fit_coords) var += (v - mean) * (v - mean);
    var /= static_cast<double>(fit_coords.size());
    model.gamma = var > 0.0 ? 1.0 / (static_cast<double>(dim) * var) : 1.0;
  }
  train_rbf(model, fit_coords, fit_y, options, rng);
  return model;
}

std::vector<double> svm_scores(const SvmModel& model, std::span<const double> x) {
  if (x.size() != model.dim) throw PreconditionError("svm: input dimension mismatch");
  const std::size_t d = model.dim;
  std::vector<double> scores(model.num_classes, 0.0);
  if (model.kernel == KernelKind::Linear) {
    for (std::size_t cls = 0; cls < model.num_classes; ++cls) {
      double s = model.b[cls];
      for (std::size_t c = 0; c < d; ++c) s += model.w[cls * d + c] * (x[c] - model.center[c]);
      scores[cls] = s;
    }
    return scores;
  }
  const std::size_t ns = model.num_support();
  for (std::size_t s = 0; s < ns; ++s) {
    const double k = std::exp(-model.gamma * sq_dist(&model.support[s * d], x.data(), d)) + 1.0;
    for (std::size_t cls = 0; cls < model.num_classes; ++cls) scores[cls] += model.coef[cls * ns + s] * k;
  }
  return scores;
}

int svm_predict(const SvmModel& model, std::span<const double> x) {
  const auto s = svm_scores(model, x);
  return static_cast<int>(argmax(s));
}

int majority_vote(std::span<const int> votes, std::size_t num_classes) {
  if (votes.empty()) throw PreconditionError("majority_vote: no votes");
  std::vector<std::size_t> tally(num_classes, 0);
  for (int v : votes) {
    if (v < 0 || static_cast<std::size_t>(v) >= num_classes) throw PreconditionError("majority_vote: bad class");
    ++tally[static_cast<std::size_t>(v)];
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < num_classes; ++c)
    if (tally[c] > tally[best]) best = c;
  return static_cast<int>(best);
}

int svm_vote_predict(const SvmModel& model, std::span<const double> sample_coords) {
  const std::size_t d = model.dim;
  if (sample_coords.empty() || sample_coords.size() % d != 0)
    throw PreconditionError("svm_vote_predict: sample must hold at least one datapoint");
  std::vector<int> votes;
  votes.reserve(sample_coords.size() / d);
  for (std::size_t i = 0; i < sample_coords.size(); i += d) votes.push_back(svm_predict(model, sample_coords.subspan(i, d)));
  return majority_vote(votes, model.num_classes);
}

}  // namespace mmtda::learn
