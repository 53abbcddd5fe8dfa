#include <algorithm>
#include <cmath>
#include <limits>

#include "mmtda/error.hpp"
#include "mmtda/learn.hpp"

namespace mmtda::learn {

namespace {

void check_inputs(const MatrixView& X, std::span<const int> y, std::size_t num_classes) {
  if (X.data.size() != X.rows * X.cols) throw PreconditionError("logreg: matrix shape does not match data");
  if (y.size() != X.rows) throw PreconditionError("logreg: label count does not match rows");
  for (double v : X.data)
    if (!std::isfinite(v)) throw PreconditionError("logreg: non-finite feature value");
  for (int l : y)
    if (l < 0 || static_cast<std::size_t>(l) >= num_classes) throw PreconditionError("logreg: label out of range");
}

// Scores s_c = w_c . x + b_c for one row.
void class_scores(std::span<const double> weights, std::size_t num_classes, std::span<const double> x,
                  std::span<double> scores) {
  const std::size_t stride = x.size() + 1;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const double* w = weights.data() + c * stride;
    double s = w[x.size()];
    for (std::size_t j = 0; j < x.size(); ++j) s += w[j] * x[j];
    scores[c] = s;
  }
}

// Replaces scores by softmax probabilities; returns log-sum-exp.
double softmax_inplace(std::span<double> scores) {
  const double mx = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (double& s : scores) {
    s = std::exp(s - mx);
    z += s;
  }
  for (double& s : scores) s /= z;
  return mx + std::log(z);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double smooth_objective(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                        std::span<const double> weights, double l2) {
  std::vector<double> scores(num_classes);
  double loss = 0.0;
  for (std::size_t i = 0; i < X.rows; ++i) {
    class_scores(weights, num_classes, X.row(i), scores);
    const double target = scores[static_cast<std::size_t>(y[i])];
    const double mx = *std::max_element(scores.begin(), scores.end());
    double z = 0.0;
    for (double s : scores) z += std::exp(s - mx);
    loss += mx + std::log(z) - target;
  }
  return loss + 0.5 * l2 * dot(weights, weights);
}

}  // namespace

std::size_t argmax(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

double logreg_objective(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                        std::span<const double> weights, double l2) {
  check_inputs(X, y, num_classes);
  if (weights.size() != num_classes * (X.cols + 1)) throw PreconditionError("logreg: weight size mismatch");
  return smooth_objective(X, y, num_classes, weights, l2);
}

void logreg_gradient(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                     std::span<const double> weights, double l2, std::span<double> grad) {
  const std::size_t stride = X.cols + 1;
  if (weights.size() != num_classes * stride || grad.size() != weights.size())
    throw PreconditionError("logreg: weight size mismatch");
  for (std::size_t k = 0; k < grad.size(); ++k) grad[k] = l2 * weights[k];
  std::vector<double> p(num_classes);
  for (std::size_t i = 0; i < X.rows; ++i) {
    const auto x = X.row(i);
    class_scores(weights, num_classes, x, p);
    softmax_inplace(p);
    p[static_cast<std::size_t>(y[i])] -= 1.0;
    for (std::size_t c = 0; c < num_classes; ++c) {
      double* g = grad.data() + c * stride;
      const double r = p[c];
      if (r == 0.0) continue;
      for (std::size_t j = 0; j < X.cols; ++j) g[j] += r * x[j];
      g[X.cols] += r;
    }
  }
}

LogRegModel train_logreg(const MatrixView& X, std::span<const int> y, std::size_t num_classes,
                         const LogRegOptions& options) {
  check_inputs(X, y, num_classes);
  if (num_classes < 2) throw PreconditionError("logreg: need at least two classes");
  if (!(options.l2 >= 0.0) || !(options.l1 >= 0.0)) throw ParameterError("logreg: penalties must be >= 0");
  {
    std::vector<bool> seen(num_classes, false);
    std::size_t distinct = 0;
    for (int l : y)
      if (!seen[static_cast<std::size_t>(l)]) {
        seen[static_cast<std::size_t>(l)] = true;
        ++distinct;
      }
    if (distinct < 2) throw PreconditionError("logreg: training labels contain a single class");
  }

  const std::size_t stride = X.cols + 1;
  const std::size_t nw = num_classes * stride;
  const bool proximal = options.l1 > 0.0;

  LogRegModel model;
  model.num_classes = num_classes;
  model.num_features = X.cols;
  model.l2 = options.l2;
  model.weights.assign(nw, 0.0);

  std::vector<double> grad(nw), next(nw), next_grad(nw);
  auto& w = model.weights;
  logreg_gradient(X, y, num_classes, w, options.l2, grad);
  double f = smooth_objective(X, y, num_classes, w, options.l2);
  double step = 1.0 / (1.0 + options.l2);

  auto soft_threshold = [&](std::span<double> v, double t) {
    for (std::size_t c = 0; c < num_classes; ++c)
      for (std::size_t j = 0; j < X.cols; ++j) {
        double& x = v[c * stride + j];
        x = std::copysign(std::max(0.0, std::abs(x) - t), x);
      }
  };

  std::size_t it = 0;
  for (; it < options.max_iters; ++it) {
    const double gnorm2 = dot(grad, grad);
    if (!proximal && std::sqrt(gnorm2) < options.grad_tol) break;

    double f_next = 0.0;
    double move2 = 0.0;
    for (int tries = 0;; ++tries) {
      for (std::size_t k = 0; k < nw; ++k) next[k] = w[k] - step * grad[k];
      if (proximal) soft_threshold(next, step * options.l1);
      f_next = smooth_objective(X, y, num_classes, next, options.l2);
      move2 = 0.0;
      double lin = 0.0;
      for (std::size_t k = 0; k < nw; ++k) {
        const double d = next[k] - w[k];
        move2 += d * d;
        lin += grad[k] * d;
      }
      // Armijo for plain GD; quadratic upper-bound test for the proximal step.
      const bool accept = proximal ? f_next <= f + lin + move2 / (2.0 * step) + 1e-12 * std::abs(f)
                                   : f_next <= f - 1e-4 * step * gnorm2;
      if (accept || tries > 60) break;
      step *= 0.5;
    }

    logreg_gradient(X, y, num_classes, next, options.l2, next_grad);
    double sy = 0.0;
    for (std::size_t k = 0; k < nw; ++k) sy += (next[k] - w[k]) * (next_grad[k] - grad[k]);
    const double prev_step = step;
    step = sy > 0.0 ? move2 / sy : 2.0 * step;
    step = std::clamp(step, 1e-12, 1e6);

    std::swap(w, next);
    std::swap(grad, next_grad);
    f = f_next;
    if (proximal && std::sqrt(move2) / prev_step < options.grad_tol) {
      ++it;
      break;
    }
    if (move2 == 0.0) {
      ++it;
      break;
    }
  }
  model.iterations = it;
  for (double v : w)
    if (!std::isfinite(v)) throw Error("logreg: optimisation diverged");
  return model;
}

std::vector<double> predict_logreg(const LogRegModel& model, std::span<const double> x) {
  if (x.size() != model.num_features)
    throw PreconditionError("predict_logreg: expected " + std::to_string(model.num_features) + " features, got " +
                            std::to_string(x.size()));
  std::vector<double> p(model.num_classes);
  class_scores(model.weights, model.num_classes, x, p);
  softmax_inplace(p);
  return p;
}

int predict_class(const LogRegModel& model, std::span<const double> x) {
  const auto p = predict_logreg(model, x);
  return static_cast<int>(argmax(p));
}

}  // namespace mmtda::learn
