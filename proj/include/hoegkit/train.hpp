#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "hoegkit/model.hpp"

namespace hoegkit {

/// Worker count from HOEGKIT_THREADS (default: hardware concurrency, at least 1).
std::size_t thread_budget();

/// Runs fn(i) for i in [0, n) over at most thread_budget() threads.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

struct AdamOptions {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

class Adam {
 public:
  Adam(const ModelParams& shape, AdamOptions options);

  void step(ModelParams& params, const ModelParams& grads);
  std::size_t steps() const { return steps_; }

 private:
  AdamOptions options_;
  ModelParams first_moment_;
  ModelParams second_moment_;
  std::size_t steps_ = 0;
};

/// Tracks the best validation loss; signals a stop after `patience` epochs without
/// strict improvement. Patience 0 never stops.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  /// Records the loss of the next epoch (1-based). Returns true when training should stop.
  bool update(double validation_loss);
  bool improved_last() const { return improved_last_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }

 private:
  std::size_t patience_;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t stale_ = 0;
  bool improved_last_ = false;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

struct Metrics {
  double mae = 0.0;
  double mse = 0.0;
  std::size_t count = 0;
  double predict_seconds = 0.0;
};

struct TrainReport {
  double initial_train_loss = 0.0;
  double initial_validation_loss = 0.0;
  std::vector<double> train_loss;       // per completed epoch, train_loss kind
  std::vector<double> validation_loss;  // per completed epoch, stopping_loss kind
  std::size_t best_epoch = 0;           // 1-based
  std::size_t epochs_run = 0;
  double fit_seconds = 0.0;
  double predict_seconds = 0.0;
  Metrics train_metrics;
  Metrics validation_metrics;
  Metrics test_metrics;
};

struct TrainResult {
  ModelParams params;
  TrainReport report;
};

/// Mini-batch Adam over whole graphs with early stopping on the validation split.
///
/// The batch loss averages over every target of the batch. Batches are formed from a
/// per-epoch seeded shuffle and gradients are reduced in graph order, so results are
/// identical for any thread count. Returns the parameters of the best validation epoch.
TrainResult train(const std::vector<GraphView>& graphs, const std::vector<std::size_t>& train_split,
                  const std::vector<std::size_t>& validation_split, const Signature& signature,
                  const ModelConfig& cfg, bool pooled = false);

/// Target-averaged loss of `params` over a subset of graphs.
double dataset_loss(const std::vector<GraphView>& graphs, const std::vector<std::size_t>& subset,
                    const ModelParams& params, LossKind kind);

using Predictor = std::function<std::vector<double>(const GraphView&)>;

/// MAE/MSE over every target of the subset, plus wall-clock prediction time.
Metrics evaluate(const Predictor& predictor, const std::vector<GraphView>& graphs,
                 const std::vector<std::size_t>& subset);

Predictor model_predictor(const ModelParams& params);

/// Median with the mean-of-middle-pair convention for even counts.
double median(std::vector<double> values);

class MedianBaseline {
 public:
  static MedianBaseline fit(const std::vector<double>& train_targets);
  double value() const { return value_; }
  std::vector<double> predict(const GraphView& graph) const;
  Predictor predictor() const;

 private:
  double value_ = 0.0;
};

/// Every target of the subset, in graph order.
std::vector<double> collect_targets(const std::vector<GraphView>& graphs,
                                    const std::vector<std::size_t>& subset);

}  // namespace hoegkit
