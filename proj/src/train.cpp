#include "hoegkit/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <random>
#include <stdexcept>
#include <thread>

#include "hoegkit/features.hpp"

namespace hoegkit {

std::size_t thread_budget() {
  if (const char* env = std::getenv("HOEGKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(thread_budget(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

Adam::Adam(const ModelParams& shape, AdamOptions options)
    : options_(options), first_moment_(zeros_like(shape)), second_moment_(zeros_like(shape)) {}

void Adam::step(ModelParams& params, const ModelParams& grads) {
  ++steps_;
  const double t = static_cast<double>(steps_);
  const double correction1 = 1.0 - std::pow(options_.beta1, t);
  const double correction2 = 1.0 - std::pow(options_.beta2, t);
  auto p = params.tensors();
  auto g = grads.tensors();
  auto m = first_moment_.tensors();
  auto v = second_moment_.tensors();
  for (std::size_t k = 0; k < p.size(); ++k) {
    auto pd = p[k]->data();
    auto gd = g[k]->data();
    auto md = m[k]->data();
    auto vd = v[k]->data();
    for (std::size_t i = 0; i < pd.size(); ++i) {
      md[i] = options_.beta1 * md[i] + (1.0 - options_.beta1) * gd[i];
      vd[i] = options_.beta2 * vd[i] + (1.0 - options_.beta2) * gd[i] * gd[i];
      const double m_hat = md[i] / correction1;
      const double v_hat = vd[i] / correction2;
      pd[i] -= options_.learning_rate * m_hat / (std::sqrt(v_hat) + options_.epsilon);
    }
  }
}

bool EarlyStopping::update(double validation_loss) {
  ++epoch_;
  improved_last_ = validation_loss < best_loss_;
  if (improved_last_) {
    best_loss_ = validation_loss;
    best_epoch_ = epoch_;
    stale_ = 0;
  } else {
    ++stale_;
  }
  return patience_ > 0 && stale_ >= patience_;
}

std::vector<double> collect_targets(const std::vector<GraphView>& graphs,
                                    const std::vector<std::size_t>& subset) {
  std::vector<double> out;
  for (std::size_t i : subset) {
    out.insert(out.end(), graphs.at(i).targets.begin(), graphs.at(i).targets.end());
  }
  return out;
}

double dataset_loss(const std::vector<GraphView>& graphs, const std::vector<std::size_t>& subset,
                    const ModelParams& params, LossKind kind) {
  std::vector<std::vector<double>> predictions(subset.size());
  parallel_for(subset.size(), [&](std::size_t i) { predictions[i] = forward(graphs[subset[i]], params); });
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto& targets = graphs[subset[i]].targets;
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const double d = predictions[i][k] - targets[k];
      sum += kind == LossKind::mae ? std::abs(d) : d * d;
    }
    count += targets.size();
  }
  if (count == 0) throw std::invalid_argument("dataset_loss: no targets");
  return sum / static_cast<double>(count);
}

namespace {

void add_into(ModelParams& acc, const ModelParams& g) {
  auto a = acc.tensors();
  auto b = g.tensors();
  for (std::size_t k = 0; k < a.size(); ++k) {
    auto ad = a[k]->data();
    auto bd = b[k]->data();
    for (std::size_t i = 0; i < ad.size(); ++i) ad[i] += bd[i];
  }
}

}  // namespace

TrainResult train(const std::vector<GraphView>& graphs, const std::vector<std::size_t>& train_split,
                  const std::vector<std::size_t>& validation_split, const Signature& signature,
                  const ModelConfig& cfg, bool pooled) {
  if (train_split.empty()) throw std::invalid_argument("train: empty training split");
  if (validation_split.empty()) throw std::invalid_argument("train: empty validation split");
  if (cfg.batch_size == 0) throw std::invalid_argument("train: batch_size must be positive");

  const auto started = std::chrono::steady_clock::now();
  TrainResult result{init_params(signature, cfg, pooled), {}};
  ModelParams& params = result.params;
  TrainReport& report = result.report;
  for (std::size_t i : train_split) check_compatible(graphs.at(i), params);
  for (std::size_t i : validation_split) check_compatible(graphs.at(i), params);

  Adam adam(params, {cfg.learning_rate, 0.9, 0.999, 1e-8});
  EarlyStopping stopper(cfg.early_stop_patience);
  ModelParams best = params;
  std::mt19937_64 epoch_seeds(cfg.seed ^ 0x9e3779b97f4a7c15ULL);

  report.initial_train_loss = dataset_loss(graphs, train_split, params, cfg.train_loss);
  report.initial_validation_loss = dataset_loss(graphs, validation_split, params, cfg.stopping_loss);

  std::vector<std::size_t> order = train_split;
  for (std::size_t epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    order = train_split;
    seeded_shuffle(order, epoch_seeds());
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(order.size(), start + cfg.batch_size);
      const std::size_t batch = end - start;
      double normalizer = 0.0;
      for (std::size_t i = start; i < end; ++i) normalizer += static_cast<double>(graphs[order[i]].targets.size());
      if (normalizer == 0.0) continue;

      std::vector<ModelParams> partial(batch, zeros_like(params));
      parallel_for(batch, [&](std::size_t b) {
        loss_and_gradient(graphs[order[start + b]], params, cfg.train_loss, normalizer, partial[b]);
      });
      ModelParams grads = zeros_like(params);
      for (const auto& g : partial) add_into(grads, g);
      adam.step(params, grads);
    }

    report.train_loss.push_back(dataset_loss(graphs, train_split, params, cfg.train_loss));
    report.validation_loss.push_back(dataset_loss(graphs, validation_split, params, cfg.stopping_loss));
    report.epochs_run = epoch;
    const bool stop = stopper.update(report.validation_loss.back());
    if (stopper.improved_last()) best = params;
    if (stop) break;
  }

  report.best_epoch = stopper.best_epoch();
  params = std::move(best);
  report.fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

Metrics evaluate(const Predictor& predictor, const std::vector<GraphView>& graphs,
                 const std::vector<std::size_t>& subset) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::vector<double>> predictions(subset.size());
  parallel_for(subset.size(), [&](std::size_t i) { predictions[i] = predictor(graphs.at(subset[i])); });
  Metrics m;
  m.predict_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  for (std::size_t i = 0; i < subset.size(); ++i) {
    const auto& targets = graphs[subset[i]].targets;
    if (predictions[i].size() != targets.size()) {
      throw std::invalid_argument("evaluate: prediction count does not match targets");
    }
    for (std::size_t k = 0; k < targets.size(); ++k) {
      const double d = predictions[i][k] - targets[k];
      m.mae += std::abs(d);
      m.mse += d * d;
    }
    m.count += targets.size();
  }
  if (m.count > 0) {
    m.mae /= static_cast<double>(m.count);
    m.mse /= static_cast<double>(m.count);
  }
  return m;
}

Predictor model_predictor(const ModelParams& params) {
  return [&params](const GraphView& g) { return forward(g, params); };
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

MedianBaseline MedianBaseline::fit(const std::vector<double>& train_targets) {
  MedianBaseline b;
  b.value_ = median(train_targets);
  return b;
}

std::vector<double> MedianBaseline::predict(const GraphView& graph) const {
  return std::vector<double>(graph.targets.size(), value_);
}

Predictor MedianBaseline::predictor() const {
  return [value = value_](const GraphView& g) { return std::vector<double>(g.targets.size(), value); };
}

}  // namespace hoegkit
