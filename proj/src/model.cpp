#include "hoegkit/model.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace hoegkit {

const char* to_string(LossKind kind) { return kind == LossKind::mae ? "mae" : "mse"; }

LossKind parse_loss_kind(const std::string& text) {
  if (text == "mae" || text == "MAE") return LossKind::mae;
  if (text == "mse" || text == "MSE") return LossKind::mse;
  throw std::invalid_argument("unknown loss '" + text + "'");
}

double loss(std::span<const double> predictions, std::span<const double> targets, LossKind kind) {
  if (predictions.size() != targets.size()) throw std::invalid_argument("loss: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("loss: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const double d = predictions[i] - targets[i];
    sum += kind == LossKind::mae ? std::abs(d) : d * d;
  }
  return sum / static_cast<double>(predictions.size());
}

void ModelConfig::check_grid_domains() const {
  if (std::find(std::begin(kHiddenDimGrid), std::end(kHiddenDimGrid), hidden_dim) ==
      std::end(kHiddenDimGrid)) {
    throw std::invalid_argument("hidden_dim " + std::to_string(hidden_dim) +
                                " is not one of {8,16,24,32,48,64,128,256}");
  }
  if (std::find(std::begin(kLearningRateGrid), std::end(kLearningRateGrid), learning_rate) ==
      std::end(kLearningRateGrid)) {
    throw std::invalid_argument("learning_rate must be 0.01 or 0.001");
  }
  if (mp_layers != 2) throw std::invalid_argument("mp_layers is fixed at 2");
  if (post_layers != 1) throw std::invalid_argument("post_layers is fixed at 1");
  if (dropout != 0.0) throw std::invalid_argument("dropout is fixed at 0.0");
  if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
}

GraphView view_of(const Hoeg& graph) {
  GraphView v;
  for (const auto& m : graph.features) v.features.push_back(&m);
  for (std::size_t r = 0; r < graph.edge_types.size(); ++r) {
    const auto& et = graph.edge_types[r];
    v.relations.push_back({graph.node_type_index(et.subject), graph.node_type_index(et.object),
                           &graph.adjacency[r]});
  }
  v.targets = graph.targets;
  v.target_type = graph.node_type_index(kEventNodeType);
  return v;
}

GraphView view_of(const Efg& graph) {
  GraphView v;
  v.features.push_back(&graph.features);
  v.relations.push_back({0, 0, &graph.adjacency});
  v.targets = graph.targets;
  v.target_type = 0;
  return v;
}

Signature signature_of(const Hoeg& graph) {
  Signature s;
  s.node_types = graph.node_types;
  for (const auto& m : graph.features) s.feature_dims.push_back(m.rows());
  for (const auto& et : graph.edge_types) {
    s.relations.push_back({to_string(et), graph.node_type_index(et.subject),
                           graph.node_type_index(et.object)});
  }
  s.target_type = graph.node_type_index(kEventNodeType);
  return s;
}

Signature signature_of(const Efg& graph) {
  Signature s;
  s.node_types = {kEventNodeType};
  s.feature_dims = {graph.features.rows()};
  s.relations.push_back({to_string(EdgeType{kEventNodeType, kFollows, kEventNodeType}), 0, 0});
  s.target_type = 0;
  return s;
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out;
  for (auto& m : input_weight) out.push_back(&m);
  for (auto& m : input_bias) out.push_back(&m);
  for (auto& layer : layers) {
    for (auto& m : layer.self_weight) out.push_back(&m);
    for (auto& m : layer.bias) out.push_back(&m);
    for (auto& m : layer.message_weight) out.push_back(&m);
    out.push_back(&layer.prelu_slope);
  }
  out.push_back(&head_weight);
  out.push_back(&head_bias);
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  auto mutable_ptrs = const_cast<ModelParams*>(this)->tensors();
  return {mutable_ptrs.begin(), mutable_ptrs.end()};
}

std::vector<std::string> ModelParams::tensor_names() const {
  std::vector<std::string> out;
  for (const auto& t : signature.node_types) out.push_back("input_weight[" + t + "]");
  for (const auto& t : signature.node_types) out.push_back("input_bias[" + t + "]");
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "layer" + std::to_string(l + 1) + ".";
    for (const auto& t : signature.node_types) out.push_back(prefix + "self_weight[" + t + "]");
    for (const auto& t : signature.node_types) out.push_back(prefix + "bias[" + t + "]");
    for (const auto& r : signature.relations) out.push_back(prefix + "message_weight" + r.name);
    out.push_back(prefix + "prelu_slope");
  }
  out.push_back("head_weight");
  out.push_back("head_bias");
  return out;
}

std::size_t ModelParams::num_scalars() const {
  std::size_t n = 0;
  for (const auto* m : tensors()) n += m->size();
  return n;
}

namespace {

Matrix glorot(std::size_t rows, std::size_t cols, std::mt19937_64& rng) {
  Matrix m(rows, cols);
  if (rows + cols == 0) return m;
  const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-bound, bound);
  for (double& v : m.data()) v = dist(rng);
  return m;
}

}  // namespace

ModelParams init_params(const Signature& signature, const ModelConfig& cfg, bool pooled) {
  if (cfg.hidden_dim == 0) throw std::invalid_argument("hidden_dim must be positive");
  if (signature.node_types.size() != signature.feature_dims.size()) {
    throw std::invalid_argument("signature: node type and feature dim counts differ");
  }
  const std::size_t h = cfg.hidden_dim;
  const std::size_t types = signature.node_types.size();
  std::mt19937_64 rng(cfg.seed);

  ModelParams p;
  p.signature = signature;
  p.hidden_dim = h;
  p.pooled = pooled;
  for (std::size_t t = 0; t < types; ++t) {
    p.input_weight.push_back(glorot(h, signature.feature_dims[t], rng));
    p.input_bias.emplace_back(h, 1);
  }
  for (std::size_t l = 0; l < cfg.mp_layers; ++l) {
    LayerParams layer;
    for (std::size_t t = 0; t < types; ++t) {
      layer.self_weight.push_back(glorot(h, h, rng));
      layer.bias.emplace_back(h, 1);
    }
    for (std::size_t r = 0; r < signature.relations.size(); ++r) {
      layer.message_weight.push_back(glorot(h, h, rng));
    }
    layer.prelu_slope = Matrix(1, 1, 0.25);
    p.layers.push_back(std::move(layer));
  }
  p.head_weight = glorot(1, h, rng);
  p.head_bias = Matrix(1, 1);
  return p;
}

ModelParams zeros_like(const ModelParams& params) {
  ModelParams z = params;
  for (auto* m : z.tensors()) m->fill(0.0);
  return z;
}

void check_compatible(const GraphView& graph, const ModelParams& params) {
  const auto& sig = params.signature;
  const std::size_t h = params.hidden_dim;
  if (graph.features.size() != sig.node_types.size()) {
    throw std::invalid_argument("graph has " + std::to_string(graph.features.size()) +
                                " node types, parameters expect " +
                                std::to_string(sig.node_types.size()));
  }
  if (graph.relations.size() != sig.relations.size()) {
    throw std::invalid_argument("graph has " + std::to_string(graph.relations.size()) +
                                " edge types, parameters expect " +
                                std::to_string(sig.relations.size()));
  }
  for (std::size_t t = 0; t < sig.node_types.size(); ++t) {
    require_shape(params.input_weight[t], h, graph.features[t]->rows(),
                  "input_weight[" + sig.node_types[t] + "]");
  }
  for (std::size_t r = 0; r < sig.relations.size(); ++r) {
    const auto& rel = graph.relations[r];
    if (rel.source_type != sig.relations[r].source_type ||
        rel.target_type != sig.relations[r].target_type) {
      throw std::invalid_argument("edge type " + sig.relations[r].name + " connects different node types");
    }
    const std::size_t ns = graph.num_nodes(rel.source_type);
    const std::size_t nt = graph.num_nodes(rel.target_type);
    for (std::size_t e = 0; e < rel.edges->size(); ++e) {
      if (rel.edges->source[e] >= ns || rel.edges->target[e] >= nt) {
        throw std::invalid_argument("adjacency" + sig.relations[r].name + ": index out of range");
      }
    }
  }
  if (graph.target_type != sig.target_type) throw std::invalid_argument("target node type differs");
  const std::size_t expected_targets = params.pooled ? 1 : graph.num_nodes(graph.target_type);
  if (graph.targets.size() != expected_targets) {
    throw std::invalid_argument("targets: expected " + std::to_string(expected_targets) +
                                " values, got " + std::to_string(graph.targets.size()));
  }
}

namespace {

void add_bias(Matrix& z, const Matrix& bias) {
  for (std::size_t r = 0; r < z.rows(); ++r) {
    const double b = bias(r, 0);
    for (std::size_t c = 0; c < z.cols(); ++c) z(r, c) += b;
  }
}

void add_row_sums(const Matrix& m, Matrix& out) {
  for (std::size_t r = 0; r < m.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) s += m(r, c);
    out(r, 0) += s;
  }
}

/// out[:, target] += h[:, source] for every edge.
void scatter_sum(const Matrix& h, const EdgeIndex& edges, Matrix& out) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t u = edges.source[e], v = edges.target[e];
    for (std::size_t r = 0; r < h.rows(); ++r) out(r, v) += h(r, u);
  }
}

/// out[:, source] += g[:, target] for every edge.
void gather_back(const Matrix& g, const EdgeIndex& edges, Matrix& out) {
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::size_t u = edges.source[e], v = edges.target[e];
    for (std::size_t r = 0; r < g.rows(); ++r) out(r, u) += g(r, v);
  }
}

}  // namespace

ForwardCache forward_cached(const GraphView& graph, const ModelParams& params) {
  check_compatible(graph, params);
  const std::size_t h = params.hidden_dim;
  const std::size_t types = graph.features.size();
  ForwardCache cache;

  std::vector<Matrix> state(types);
  for (std::size_t t = 0; t < types; ++t) {
    state[t] = Matrix(h, graph.num_nodes(t));
    gemm_acc(params.input_weight[t], *graph.features[t], state[t]);
    add_bias(state[t], params.input_bias[t]);
  }
  cache.states.push_back(state);

  for (const auto& layer : params.layers) {
    const double slope = layer.prelu_slope(0, 0);
    std::vector<Matrix> z(types);
    for (std::size_t t = 0; t < types; ++t) {
      z[t] = Matrix(h, graph.num_nodes(t));
      gemm_acc(layer.self_weight[t], cache.states.back()[t], z[t]);
    }
    std::vector<Matrix> agg;
    for (std::size_t r = 0; r < graph.relations.size(); ++r) {
      const auto& rel = graph.relations[r];
      Matrix a(h, graph.num_nodes(rel.target_type));
      scatter_sum(cache.states.back()[rel.source_type], *rel.edges, a);
      gemm_acc(layer.message_weight[r], a, z[rel.target_type]);
      agg.push_back(std::move(a));
    }
    std::vector<Matrix> next(types);
    for (std::size_t t = 0; t < types; ++t) {
      add_bias(z[t], layer.bias[t]);
      next[t] = z[t];
      for (double& v : next[t].data()) {
        if (v <= 0.0) v *= slope;
      }
    }
    cache.pre_activation.push_back(std::move(z));
    cache.aggregated.push_back(std::move(agg));
    cache.states.push_back(std::move(next));
  }

  const Matrix& out = cache.states.back()[graph.target_type];
  const double b = params.head_bias(0, 0);
  if (params.pooled) {
    cache.pooled_state.assign(h, 0.0);
    const std::size_t n = out.cols();
    for (std::size_t r = 0; r < h; ++r) {
      double s = 0.0;
      for (std::size_t c = 0; c < n; ++c) s += out(r, c);
      cache.pooled_state[r] = n == 0 ? 0.0 : s / static_cast<double>(n);
    }
    double y = b;
    for (std::size_t r = 0; r < h; ++r) y += params.head_weight(0, r) * cache.pooled_state[r];
    cache.predictions = {y};
  } else {
    cache.predictions.assign(out.cols(), b);
    for (std::size_t c = 0; c < out.cols(); ++c) {
      double y = b;
      for (std::size_t r = 0; r < h; ++r) y += params.head_weight(0, r) * out(r, c);
      cache.predictions[c] = y;
    }
  }
  return cache;
}

std::vector<double> forward(const GraphView& graph, const ModelParams& params) {
  return forward_cached(graph, params).predictions;
}

void backward(const GraphView& graph, const ModelParams& params, const ForwardCache& cache,
              std::span<const double> prediction_grads, ModelParams& grads) {
  const std::size_t h = params.hidden_dim;
  const std::size_t types = graph.features.size();
  const std::size_t layers = params.layers.size();
  if (prediction_grads.size() != cache.predictions.size()) {
    throw std::invalid_argument("backward: gradient length does not match predictions");
  }

  std::vector<Matrix> d_state(types);
  for (std::size_t t = 0; t < types; ++t) d_state[t] = Matrix(h, graph.num_nodes(t));

  const Matrix& out = cache.states.back()[graph.target_type];
  Matrix& d_out = d_state[graph.target_type];
  if (params.pooled) {
    const double g = prediction_grads[0];
    grads.head_bias(0, 0) += g;
    for (std::size_t r = 0; r < h; ++r) grads.head_weight(0, r) += g * cache.pooled_state[r];
    const std::size_t n = out.cols();
    for (std::size_t c = 0; c < n; ++c) {
      for (std::size_t r = 0; r < h; ++r) {
        d_out(r, c) += g * params.head_weight(0, r) / static_cast<double>(n);
      }
    }
  } else {
    for (std::size_t c = 0; c < out.cols(); ++c) {
      const double g = prediction_grads[c];
      grads.head_bias(0, 0) += g;
      for (std::size_t r = 0; r < h; ++r) {
        grads.head_weight(0, r) += g * out(r, c);
        d_out(r, c) += g * params.head_weight(0, r);
      }
    }
  }

  for (std::size_t l = layers; l-- > 0;) {
    const LayerParams& layer = params.layers[l];
    LayerParams& g_layer = grads.layers[l];
    const double slope = layer.prelu_slope(0, 0);
    const auto& z = cache.pre_activation[l];
    const auto& prev = cache.states[l];

    std::vector<Matrix> d_prev(types);
    std::vector<Matrix> dz(types);
    for (std::size_t t = 0; t < types; ++t) {
      d_prev[t] = Matrix(h, graph.num_nodes(t));
      dz[t] = d_state[t];
      double d_slope = 0.0;
      auto dz_data = dz[t].data();
      auto z_data = z[t].data();
      for (std::size_t i = 0; i < dz_data.size(); ++i) {
        if (z_data[i] <= 0.0) {
          d_slope += dz_data[i] * z_data[i];
          dz_data[i] *= slope;
        }
      }
      g_layer.prelu_slope(0, 0) += d_slope;
      add_row_sums(dz[t], g_layer.bias[t]);
      gemm_nt_acc(dz[t], prev[t], g_layer.self_weight[t]);
      gemm_tn_acc(layer.self_weight[t], dz[t], d_prev[t]);
    }
    for (std::size_t r = 0; r < graph.relations.size(); ++r) {
      const auto& rel = graph.relations[r];
      const Matrix& dzt = dz[rel.target_type];
      gemm_nt_acc(dzt, cache.aggregated[l][r], g_layer.message_weight[r]);
      Matrix d_agg(h, dzt.cols());
      gemm_tn_acc(layer.message_weight[r], dzt, d_agg);
      gather_back(d_agg, *rel.edges, d_prev[rel.source_type]);
    }
    d_state = std::move(d_prev);
  }

  for (std::size_t t = 0; t < types; ++t) {
    gemm_nt_acc(d_state[t], *graph.features[t], grads.input_weight[t]);
    add_row_sums(d_state[t], grads.input_bias[t]);
  }
}

double loss_and_gradient(const GraphView& graph, const ModelParams& params, LossKind kind,
                         double normalizer, ModelParams& grads) {
  const ForwardCache cache = forward_cached(graph, params);
  std::vector<double> dpred(cache.predictions.size());
  double total = 0.0;
  for (std::size_t i = 0; i < dpred.size(); ++i) {
    const double d = cache.predictions[i] - graph.targets[i];
    if (kind == LossKind::mse) {
      total += d * d;
      dpred[i] = 2.0 * d / normalizer;
    } else {
      total += std::abs(d);
      dpred[i] = (d > 0.0 ? 1.0 : d < 0.0 ? -1.0 : 0.0) / normalizer;
    }
  }
  backward(graph, params, cache, dpred, grads);
  return total / normalizer;
}

}  // namespace hoegkit
