#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hoegkit/graph_io.hpp"
#include "hoegkit/ocel_io.hpp"
#include "hoegkit/pipeline.hpp"
#include "hoegkit/synthetic.hpp"
#include "json.hpp"

namespace hoegkit::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::string input;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string encoder;
  std::string extraction;
  std::string splits;
  std::string prefix;
  std::string dataset;
  std::string checkpoint;
  std::string path;
  std::size_t synthetic = 0;
  std::optional<std::size_t> hidden_dim;
  std::optional<double> learning_rate;
  std::optional<std::size_t> epochs;
  std::optional<std::size_t> batch_size;
  std::optional<std::size_t> patience;
  std::vector<std::size_t> hidden_dims;
  std::vector<double> learning_rates;
  bool chronological = false;
  bool zero_fill = false;
};

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) throw UsageError("cannot create " + path.parent_path().string() + ": " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("write failed: " + path.string());
}

std::array<double, 3> parse_splits(const std::string& text) {
  std::array<double, 3> ratios{};
  std::stringstream ss(text);
  std::string part;
  std::size_t n = 0;
  while (std::getline(ss, part, ',')) {
    if (n == 3) throw UsageError("--splits expects three comma-separated ratios");
    try {
      std::size_t used = 0;
      ratios[n] = std::stod(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::logic_error&) {
      throw UsageError("--splits: not a number: '" + part + "'");
    }
    ++n;
  }
  if (n != 3) throw UsageError("--splits expects three comma-separated ratios");
  return ratios;
}

RunConfig build_config(const Options& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) {
    try {
      cfg = run_config_from_json(json::parse(read_text(o.config_path)));
    } catch (const json::exception& e) {
      throw UsageError("config " + o.config_path + ": " + e.what());
    }
  }
  if (!o.input.empty()) cfg.input = o.input;
  if (!o.out.empty()) cfg.out = o.out;
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.model.seed = *o.seed;
  }
  if (!o.encoder.empty()) cfg.encoder = parse_encoder(o.encoder);
  if (!o.extraction.empty()) cfg.extraction = o.extraction;
  if (!o.splits.empty()) cfg.splits = parse_splits(o.splits);
  if (!o.prefix.empty()) cfg.prefix = o.prefix;
  if (!o.dataset.empty()) cfg.dataset = o.dataset;
  if (o.chronological) cfg.chronological_split = true;
  if (o.zero_fill) cfg.zero_fill_numeric = true;
  if (o.hidden_dim) cfg.model.hidden_dim = *o.hidden_dim;
  if (o.learning_rate) cfg.model.learning_rate = *o.learning_rate;
  if (o.epochs) cfg.model.max_epochs = *o.epochs;
  if (o.batch_size) cfg.model.batch_size = *o.batch_size;
  if (o.patience) cfg.model.early_stop_patience = *o.patience;
  if (cfg.dataset.empty()) {
    cfg.dataset = !cfg.input.empty() ? fs::path(cfg.input).stem().string()
                                     : (o.synthetic > 0 ? "synthetic" : "");
  }
  if (o.synthetic == 0) {
    if (cfg.input.empty()) throw UsageError("no input log (use --input or --synthetic N)");
    if (!fs::exists(cfg.input)) throw UsageError("input does not exist: " + cfg.input);
  }
  return cfg;
}

EventLog load_log(const Options& o, const RunConfig& cfg) {
  if (o.synthetic > 0) {
    SyntheticOptions s;
    s.executions = o.synthetic;
    s.seed = cfg.seed + 1;
    return make_synthetic_log(s);
  }
  return read_ocel_file(cfg.input).log;
}

void print_warnings(const ParseReport& report, std::ostream& err) {
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
}

int cmd_validate(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string path = !o.path.empty() ? o.path : o.input;
  if (path.empty()) throw UsageError("validate: no input file");
  if (!fs::exists(path)) throw UsageError("input does not exist: " + path);
  ParseOptions popts;
  popts.strict_references = false;
  const ParsedLog parsed = parse_ocel(read_text(path), popts);
  print_warnings(parsed.report, err);
  const auto violations = validate(parsed.log, {o.zero_fill});
  for (const auto& v : violations) out << v.entity << ": " << v.rule << "\n";
  if (!violations.empty()) return kExitDomain;
  out << "ok: " << parsed.report.events << " events, " << parsed.report.objects << " objects, "
      << parsed.report.types << " object types\n";
  return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
  const RunConfig cfg = build_config(o);
  const EventLog log = load_log(o, cfg);
  out << format_stats_row(log_stats(log, parse_strategy(cfg.extraction))) << "\n";
  return kExitOk;
}

int cmd_extract(const Options& o, std::ostream& out) {
  const RunConfig cfg = build_config(o);
  const EventLog log = load_log(o, cfg);
  const auto executions = extract(log, parse_strategy(cfg.extraction));
  for (std::size_t k = 0; k < executions.size(); ++k) {
    const auto& px = executions[k];
    out << k << " events=" << px.events.size() << " edges=" << px.edges.size() << " objects=";
    for (std::size_t i = 0; i < px.object_ids.size(); ++i) out << (i ? "," : "") << px.object_ids[i];
    out << "\n";
  }
  return kExitOk;
}

std::string graph_file_name(std::size_t g) {
  std::ostringstream ss;
  ss << "graph_" << std::setw(5) << std::setfill('0') << g << ".json";
  return ss.str();
}

int cmd_encode(const Options& o, std::ostream& out) {
  const RunConfig cfg = build_config(o);
  const PreparedData data = prepare(load_log(o, cfg), cfg);
  const fs::path dir(cfg.out);
  const std::size_t n = data.views.size();
  json graphs = json::array();
  for (std::size_t g = 0; g < n; ++g) {
    const std::string name = graph_file_name(g);
    write_text(dir / name, cfg.encoder == EncoderKind::hoeg ? serialize_hoeg(data.hoegs[g])
                                                             : serialize_efg(data.efgs[g]));
    const std::size_t x = data.graph_execution[g];
    graphs.push_back({{"file", name}, {"execution", x}, {"split", to_string(data.splits.of_execution[x])}});
  }
  json executions = json::array();
  for (std::size_t x = 0; x < data.executions.size(); ++x) {
    executions.push_back({{"execution", x},
                          {"split", to_string(data.splits.of_execution[x])},
                          {"events", data.executions[x].events.size()},
                          {"objects", data.executions[x].object_ids}});
  }
  json manifest = {{"encoder", to_string(cfg.encoder)},
                   {"schema_version", kGraphSchemaVersion},
                   {"config", to_json(cfg)},
                   {"features", to_json(data.features)},
                   {"stats", to_json(data.stats)},
                   {"executions", executions},
                   {"graphs", graphs}};
  write_text(dir / "manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << n << " graph" << (n == 1 ? "" : "s") << " and manifest.json to " << dir.string() << "\n";
  return kExitOk;
}

std::string metrics_text(const std::vector<MetricsRow>& rows) {
  std::ostringstream ss;
  write_metrics_csv(ss, rows);
  return ss.str();
}

int cmd_train(const Options& o, std::ostream& out) {
  const RunConfig cfg = build_config(o);
  cfg.model.check_grid_domains();
  const PreparedData data = prepare(load_log(o, cfg), cfg);
  const TrainOutcome outcome = run_training(data, cfg);
  const fs::path dir(cfg.out);
  write_text(dir / "checkpoint.json", serialize_checkpoint(outcome.checkpoint));
  write_text(dir / "train_report.json", to_json(outcome.report).dump(2) + "\n");
  const std::string csv = metrics_text({outcome.model_row, outcome.median_row});
  write_text(dir / "metrics.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_evaluate(const Options& o, std::ostream& out) {
  RunConfig cfg = build_config(o);
  const std::string ckpt_path =
      !o.checkpoint.empty() ? o.checkpoint : (fs::path(cfg.out) / "checkpoint.json").string();
  if (!fs::exists(ckpt_path)) throw UsageError("checkpoint does not exist: " + ckpt_path);
  Checkpoint ckpt;
  try {
    ckpt = parse_checkpoint(read_text(ckpt_path));
  } catch (const json::exception& e) {
    throw UsageError("checkpoint " + ckpt_path + ": " + e.what());
  }
  cfg.encoder = parse_encoder(ckpt.encoder);
  cfg.model = ckpt.model_config;
  const PreparedData data = prepare(load_log(o, cfg), cfg, FittedFeatures{ckpt.features, ckpt.stats});
  for (const auto& view : data.views) check_compatible(view, ckpt.params);
  const MetricsRow row = evaluate_model(data, ckpt.params, cfg);
  const std::string csv = metrics_text({row});
  write_text(fs::path(cfg.out) / "evaluation.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_grid(const Options& o, std::ostream& out) {
  RunConfig cfg = build_config(o);
  std::set<std::size_t> hds(o.hidden_dims.begin(), o.hidden_dims.end());
  std::set<double> lrs(o.learning_rates.begin(), o.learning_rates.end());
  if (hds.empty()) hds.insert(std::begin(kHiddenDimGrid), std::end(kHiddenDimGrid));
  if (lrs.empty()) lrs.insert(std::begin(kLearningRateGrid), std::end(kLearningRateGrid));
  for (std::size_t hd : hds) {
    for (double lr : lrs) {
      ModelConfig m = cfg.model;
      m.hidden_dim = hd;
      m.learning_rate = lr;
      m.check_grid_domains();
    }
  }
  const PreparedData data = prepare(load_log(o, cfg), cfg);
  std::vector<MetricsRow> rows;
  for (std::size_t hd : hds) {
    for (double lr : lrs) {
      cfg.model.hidden_dim = hd;
      cfg.model.learning_rate = lr;
      rows.push_back(run_training(data, cfg).model_row);
    }
  }
  const std::string csv = metrics_text(rows);
  write_text(fs::path(cfg.out) / "grid.csv", csv);
  out << csv;
  return kExitOk;
}

int cmd_fixture(const Options& o, std::ostream& out) {
  const fs::path path = !o.path.empty() ? fs::path(o.path)
                                        : fs::path(o.out.empty() ? "." : o.out) / "otc_fixture.jsonocel";
  write_text(path, serialize_ocel(build_otc_fixture()));
  out << "wrote " << path.string() << "\n";
  return kExitOk;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--config", o.config_path, "JSON run configuration");
  sub->add_option("--input", o.input, "JSON-OCEL input log");
  sub->add_option("--out", o.out, "Output directory");
  sub->add_option("--seed", o.seed, "Split and initialization seed");
  sub->add_option("--encoder", o.encoder, "Graph encoding")->check(CLI::IsMember({"efg", "hoeg", "efg_ss"}));
  sub->add_option("--extraction", o.extraction, "cc or leading:TYPE");
  sub->add_option("--splits", o.splits, "Train,validation,test ratios, e.g. 0.7,0.15,0.15");
  sub->add_option("--dataset", o.dataset, "Dataset label for metrics rows");
  sub->add_option("--synthetic", o.synthetic, "Use a generated log with N executions instead of --input");
  sub->add_flag("--chronological", o.chronological, "Split by start time instead of shuffling");
  sub->add_flag("--zero-fill", o.zero_fill, "Encode missing numeric attributes as 0");
}

void add_model(CLI::App* sub, Options& o) {
  sub->add_option("--hidden-dim", o.hidden_dim, "Hidden dimension");
  sub->add_option("--lr", o.learning_rate, "Learning rate");
  sub->add_option("--epochs", o.epochs, "Maximum epochs");
  sub->add_option("--batch-size", o.batch_size, "Graphs per batch");
  sub->add_option("--patience", o.patience, "Early stopping patience (0 disables)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Remaining-time prediction on object-centric event logs"};
  app.require_subcommand(1);
  Options o;

  auto* validate_cmd = app.add_subcommand("validate", "Parse and check a JSON-OCEL log");
  validate_cmd->add_option("path", o.path, "Log file");
  validate_cmd->add_option("--input", o.input, "Log file");
  validate_cmd->add_flag("--zero-fill", o.zero_fill, "Tolerate missing numeric attributes");

  auto* stats_cmd = app.add_subcommand("stats", "Print log statistics");
  add_common(stats_cmd, o);
  auto* extract_cmd = app.add_subcommand("extract", "List process executions");
  add_common(extract_cmd, o);
  auto* encode_cmd = app.add_subcommand("encode", "Write one graph file per execution plus a manifest");
  add_common(encode_cmd, o);
  encode_cmd->add_option("--prefix", o.prefix, "Truncate graphs after this event id");
  auto* train_cmd = app.add_subcommand("train", "Train a model and the median baseline");
  add_common(train_cmd, o);
  add_model(train_cmd, o);
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a checkpoint");
  add_common(evaluate_cmd, o);
  evaluate_cmd->add_option("--checkpoint", o.checkpoint, "Checkpoint file (default OUT/checkpoint.json)");
  auto* grid_cmd = app.add_subcommand("grid", "Sweep hidden dimension and learning rate");
  add_common(grid_cmd, o);
  add_model(grid_cmd, o);
  grid_cmd->add_option("--hidden-dims", o.hidden_dims, "Hidden dimensions to sweep")->delimiter(',');
  grid_cmd->add_option("--learning-rates", o.learning_rates, "Learning rates to sweep")->delimiter(',');
  auto* fixture_cmd = app.add_subcommand("fixture", "Write the running-example log");
  fixture_cmd->add_option("path", o.path, "Output file");
  fixture_cmd->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Error& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (validate_cmd->parsed()) return cmd_validate(o, out, err);
    if (stats_cmd->parsed()) return cmd_stats(o, out);
    if (extract_cmd->parsed()) return cmd_extract(o, out);
    if (encode_cmd->parsed()) return cmd_encode(o, out);
    if (train_cmd->parsed()) return cmd_train(o, out);
    if (evaluate_cmd->parsed()) return cmd_evaluate(o, out);
    if (grid_cmd->parsed()) return cmd_grid(o, out);
    if (fixture_cmd->parsed()) return cmd_fixture(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace hoegkit::cli
