#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "hoegkit/encoders.hpp"
#include "hoegkit/matrix.hpp"

namespace hoegkit {

enum class LossKind { mae, mse };
const char* to_string(LossKind kind);
LossKind parse_loss_kind(const std::string& text);

/// Mean |p - t| or mean (p - t)^2. Throws on empty or mismatched input.
double loss(std::span<const double> predictions, std::span<const double> targets, LossKind kind);

struct ModelConfig {
  std::size_t hidden_dim = 24;
  double learning_rate = 0.01;
  std::size_t mp_layers = 2;
  std::size_t post_layers = 1;
  double dropout = 0.0;
  std::size_t batch_size = 16;
  std::size_t max_epochs = 30;
  /// 0 disables early stopping.
  std::size_t early_stop_patience = 4;
  std::uint64_t seed = 0;
  LossKind train_loss = LossKind::mse;
  LossKind stopping_loss = LossKind::mae;

  /// Throws std::invalid_argument when a tunable value lies outside its grid.
  void check_grid_domains() const;
  bool operator==(const ModelConfig&) const = default;
};

inline constexpr std::size_t kHiddenDimGrid[] = {8, 16, 24, 32, 48, 64, 128, 256};
inline constexpr double kLearningRateGrid[] = {0.01, 0.001};

/// Typed relation of a graph: messages flow from `source_type` nodes to `target_type` nodes.
struct Relation {
  std::size_t source_type = 0;
  std::size_t target_type = 0;
  const EdgeIndex* edges = nullptr;
};

/// Non-owning view of one training graph. Node type `target_type` carries targets.
struct GraphView {
  std::vector<const Matrix*> features;
  std::vector<Relation> relations;
  std::span<const double> targets;
  std::size_t target_type = 0;

  std::size_t num_nodes(std::size_t type) const { return features.at(type)->cols(); }
};

GraphView view_of(const Hoeg& graph);
GraphView view_of(const Efg& graph);

/// Node types, input widths and relations a parameter set is shaped for.
struct Signature {
  struct RelationSlot {
    std::string name;
    std::size_t source_type = 0;
    std::size_t target_type = 0;
    bool operator==(const RelationSlot&) const = default;
  };
  std::vector<std::string> node_types;
  std::vector<std::size_t> feature_dims;
  std::vector<RelationSlot> relations;
  std::size_t target_type = 0;

  bool operator==(const Signature&) const = default;
};

Signature signature_of(const Hoeg& graph);
Signature signature_of(const Efg& graph);

struct LayerParams {
  std::vector<Matrix> self_weight;     // per node type, H x H
  std::vector<Matrix> bias;            // per node type, H x 1
  std::vector<Matrix> message_weight;  // per relation, H x H
  Matrix prelu_slope;                  // 1 x 1

  bool operator==(const LayerParams&) const = default;
};

/// Parameters of the heterogeneous message-passing regressor.
///
///   h0_v = W_in[type(v)] x_v + b_in[type(v)]
///   z_v  = W_self[type(v)] h_v + sum_r W_r sum_{u -r-> v} h_u + b[type(v)]
///   h'_v = PReLU(z_v)                         (one learnable slope per layer)
///   y_v  = w_head . h_v + b_head              (node mode, target-type nodes)
///   y    = w_head . mean_v h_v + b_head       (pooled mode)
struct ModelParams {
  Signature signature;
  std::size_t hidden_dim = 0;
  bool pooled = false;
  std::vector<Matrix> input_weight;  // per node type, H x d_t
  std::vector<Matrix> input_bias;    // per node type, H x 1
  std::vector<LayerParams> layers;
  Matrix head_weight;  // 1 x H
  Matrix head_bias;    // 1 x 1

  std::vector<Matrix*> tensors();
  std::vector<const Matrix*> tensors() const;
  std::vector<std::string> tensor_names() const;
  std::size_t num_scalars() const;

  bool operator==(const ModelParams&) const = default;
};

/// Glorot-uniform weights, zero biases, PReLU slopes at 0.25.
ModelParams init_params(const Signature& signature, const ModelConfig& cfg, bool pooled = false);

/// Same shapes, every entry zero.
ModelParams zeros_like(const ModelParams& params);

/// Throws std::invalid_argument naming the first tensor whose shape disagrees with the graph.
void check_compatible(const GraphView& graph, const ModelParams& params);

struct ForwardCache {
  std::vector<std::vector<Matrix>> states;       // [layer 0..L][node type]
  std::vector<std::vector<Matrix>> pre_activation;  // [layer 1..L - 1][node type]
  std::vector<std::vector<Matrix>> aggregated;   // [layer 1..L - 1][relation]
  std::vector<double> pooled_state;
  std::vector<double> predictions;
};

ForwardCache forward_cached(const GraphView& graph, const ModelParams& params);
std::vector<double> forward(const GraphView& graph, const ModelParams& params);

/// Accumulates d(loss)/d(params) into `grads` given d(loss)/d(prediction).
void backward(const GraphView& graph, const ModelParams& params, const ForwardCache& cache,
              std::span<const double> prediction_grads, ModelParams& grads);

/// Loss contribution sum_v l(p_v, t_v) / normalizer and its gradient (accumulated).
double loss_and_gradient(const GraphView& graph, const ModelParams& params, LossKind kind,
                         double normalizer, ModelParams& grads);

}  // namespace hoegkit
