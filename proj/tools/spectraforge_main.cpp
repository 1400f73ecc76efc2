#include "CLI11.hpp"

#include "spectraforge/augment.hpp"
#include "spectraforge/errors.hpp"
#include "spectraforge/gcl.hpp"
#include "spectraforge/graph.hpp"
#include "spectraforge/report.hpp"
#include "spectraforge/spco.hpp"
#include "spectraforge/spectral.hpp"
#include "spectraforge/verify.hpp"
#include "spectraforge/version.hpp"

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace sf = spectraforge;

namespace {

sf::RunManifest make_manifest(const std::string& command,
                              const sf::Json& config, std::uint64_t seed,
                              const std::vector<std::string>& inputs) {
  sf::RunManifest m;
  m.command = command;
  m.config = config;
  m.seed = seed;
  m.toolkit_version = sf::kVersion;
  for (const std::string& path : inputs) {
    m.input_hashes[path] = sf::file_digest_hex(path);
  }
  return m;
}

void write_sidecar_manifest(const std::string& path,
                            const sf::RunManifest& manifest) {
  sf::write_text_file(path + ".manifest.json",
                      sf::canonical_json(manifest.to_json()) + "\n");
}

sf::Band parse_band(const std::string& s) {
  if (s == "low") return sf::Band::low;
  if (s == "high") return sf::Band::high;
  return sf::Band::both;
}

std::uint64_t resolve_seed(std::uint64_t flag_seed) {
  const char* env = std::getenv("SPECTRAFORGE_SEED");
  if (env == nullptr || *env == '\0') return flag_seed;
  char* end = nullptr;
  unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') {
    throw sf::ValidationError("SPECTRAFORGE_SEED is not an unsigned integer");
  }
  return v;
}

struct SpectrumArgs {
  std::string graph;
  std::string matrix = "laplacian";
  int bins = sf::kDefaultSpectrumBins;
  std::string output = "spectrum.tsv";
  std::uint64_t seed = 0;
};

int run_spectrum(const SpectrumArgs& args) {
  sf::Graph g = sf::load_edge_list(args.graph);
  sf::SpectralDecomposition dec =
      sf::decompose(sf::normalized_laplacian(g), sf::MatrixSource::laplacian);
  sf::Vector amp = args.matrix == "adjacency"
                       ? sf::Vector(sf::Vector::Ones(g.n) - dec.lambdas)
                       : dec.lambdas;
  sf::SpectrumCurve curve = sf::spectrum_curve(dec, amp, args.bins);
  sf::Json payload;
  payload["columns"] = {"lambda_lo", "lambda_hi", "amplitude", "count"};
  sf::Json rows = sf::Json::array();
  for (int b = 0; b < curve.amplitudes.size(); ++b) {
    rows.push_back({curve.band_edges(b), curve.band_edges(b + 1),
                    curve.amplitudes(b), curve.counts(b)});
  }
  payload["rows"] = rows;
  sf::Json config = {{"graph", args.graph},
                     {"matrix", args.matrix},
                     {"bins", args.bins},
                     {"output", args.output}};
  sf::write_report(payload, args.output, sf::ReportFormat::tsv,
                   make_manifest("spectrum", config, args.seed, {args.graph}));
  return 0;
}

struct AugmentArgs {
  std::string graph;
  std::string kind;
  double rate = 0.2;
  std::uint64_t seed = 0;
  std::string output = "augmented.edges";
};

int run_augment(const AugmentArgs& args) {
  sf::Graph g = sf::load_edge_list(args.graph);
  std::uint64_t seed = resolve_seed(args.seed);
  sf::TopologyAugment kind = sf::TopologyAugment::edge_drop;
  if (args.kind == "node-drop") kind = sf::TopologyAugment::node_drop;
  if (args.kind == "edge-perturb") kind = sf::TopologyAugment::edge_perturb;
  if (args.kind == "subgraph") kind = sf::TopologyAugment::subgraph;
  sf::Graph view = sf::random_topology_augment(g, kind, args.rate, seed);
  sf::save_edge_list(view, args.output);
  sf::Json config = {{"graph", args.graph},
                     {"kind", args.kind},
                     {"rate", args.rate},
                     {"output", args.output}};
  write_sidecar_manifest(args.output,
                         make_manifest("augment", config, seed, {args.graph}));
  return 0;
}

struct GameCheckArgs {
  std::string graph_a;
  std::string graph_b;
  int bins = sf::kDefaultSpectrumBins;
  std::string output = "game.json";
  std::uint64_t seed = 0;
};

int run_game_check(const GameCheckArgs& args) {
  auto curve = [&](const std::string& path) {
    sf::Graph g = sf::load_edge_list(path);
    sf::SpectralDecomposition dec = sf::decompose(
        sf::normalized_laplacian(g), sf::MatrixSource::laplacian);
    return sf::spectrum_curve(dec, sf::Vector::Ones(g.n) - dec.lambdas,
                              args.bins);
  };
  sf::GameReport rep = sf::game_margin(curve(args.graph_a),
                                       curve(args.graph_b));
  sf::Json payload;
  payload["strict_pass"] = rep.strict_pass;
  payload["fraction_pass"] = rep.fraction_pass;
  payload["margin"] = rep.margin;
  payload["low_band_diffs"] = rep.low_band_diffs;
  payload["high_band_diffs"] = rep.high_band_diffs;
  sf::Json config = {{"graph_a", args.graph_a},
                     {"graph_b", args.graph_b},
                     {"bins", args.bins},
                     {"output", args.output}};
  sf::write_report(payload, args.output, sf::ReportFormat::json,
                   make_manifest("game-check", config, args.seed,
                                 {args.graph_a, args.graph_b}));
  return 0;
}

struct SpcoArgs {
  std::string graph;
  sf::SpcoConfig cfg;
  std::string marginal = "degree";
  std::string cost = "laplacian";
  std::string trace = "spco_trace.jsonl";
  std::string output = "combined.edges";
};

int run_spco_cmd(const SpcoArgs& args) {
  sf::Graph g = sf::load_edge_list(args.graph);
  sf::SpcoConfig cfg = args.cfg;
  cfg.seed = resolve_seed(cfg.seed);
  if (args.marginal == "degree-normalized") {
    cfg.marginal_mode = sf::MarginalMode::degree_normalized;
  } else if (args.marginal == "uniform") {
    cfg.marginal_mode = sf::MarginalMode::uniform;
  }
  if (args.cost == "identity-plus-laplacian") {
    cfg.cost_kind = sf::CostKind::identity_plus_laplacian;
  } else if (args.cost == "identity-plus-laplacian-sq") {
    cfg.cost_kind = sf::CostKind::identity_plus_laplacian_sq;
  }
  sf::SpcoResult res = sf::run_spco(g, cfg);
  sf::Json config = {{"graph", args.graph},
                     {"theta_final", cfg.theta_final},
                     {"epochs", cfg.total_epochs},
                     {"update_epochs", cfg.update_epochs},
                     {"eps", cfg.eps},
                     {"eta", cfg.eta},
                     {"hops", cfg.hops},
                     {"iters", cfg.iters},
                     {"marginal", args.marginal},
                     {"cost", args.cost},
                     {"trace", args.trace},
                     {"output", args.output}};
  sf::RunManifest manifest =
      make_manifest("spco", config, cfg.seed, {args.graph});
  sf::write_report(sf::trace_json(res.trace), args.trace,
                   sf::ReportFormat::jsonl, manifest);
  sf::save_edge_list(sf::graph_from_dense(res.a_combined), args.output);
  write_sidecar_manifest(args.output, manifest);
  return 0;
}

struct TrainArgs {
  std::string graph;
  std::string features;
  std::string labels;
  sf::TrainConfig cfg;
  std::string similarity = "cosine";
  bool linear = false;
  std::string band = "low";
  double keep_rate = 0.2;
  std::string order = "low-to-high";
  bool drop_base_band = false;
  int train_per_class = 10;
  std::string metrics = "metrics.json";
  std::string embeddings = "embeddings.csv";
};

int run_train(const TrainArgs& args) {
  sf::Graph g = sf::load_edge_list(args.graph);
  g.features = sf::load_features_csv(args.features);
  if (g.features->rows() != g.n) {
    throw sf::ValidationError("feature rows do not match node count");
  }
  std::vector<int> labels = sf::load_labels_csv(args.labels, g.n);
  g.labels = labels;
  sf::TrainConfig cfg = args.cfg;
  cfg.seed = resolve_seed(cfg.seed);
  cfg.linear_encoder = args.linear;
  cfg.similarity =
      args.similarity == "dot" ? sf::Similarity::dot : sf::Similarity::cosine;

  sf::Matrix v1 = sf::normalized_adjacency(g, true);
  sf::SpectralDecomposition dec =
      sf::decompose(sf::normalized_laplacian(g), sf::MatrixSource::laplacian);
  sf::FilterSpec spec;
  spec.band = parse_band(args.band);
  spec.keep_rate = args.keep_rate;
  spec.order = args.order == "high-to-low" ? sf::KeepOrder::high_to_low
                                           : sf::KeepOrder::low_to_high;
  spec.base_band_kept = !args.drop_base_band;
  sf::Matrix v2 = sf::eigenspace_filter_view(dec, spec);

  sf::TrainOutcome out = sf::train_contrastive(
      g, [&](int) { return std::make_pair(v1, v2); }, cfg);
  sf::Splits splits = sf::make_splits(labels, args.train_per_class, cfg.seed);
  sf::EvalMetrics metrics =
      sf::evaluate_embeddings(out.embeddings, labels, splits, cfg.seed);

  sf::Json config = {{"graph", args.graph},
                     {"features", args.features},
                     {"labels", args.labels},
                     {"dim", cfg.dim},
                     {"lr", cfg.lr},
                     {"tau", cfg.tau},
                     {"epochs", cfg.epochs},
                     {"weight_decay", cfg.weight_decay},
                     {"linear", args.linear},
                     {"similarity", args.similarity},
                     {"band", args.band},
                     {"keep_rate", args.keep_rate},
                     {"order", args.order},
                     {"drop_base_band", args.drop_base_band},
                     {"train_per_class", args.train_per_class},
                     {"metrics", args.metrics},
                     {"embeddings", args.embeddings}};
  sf::RunManifest manifest = make_manifest(
      "train", config, cfg.seed, {args.graph, args.features, args.labels});

  sf::Json payload;
  payload["accuracy"] = metrics.accuracy;
  payload["macro_f1"] = metrics.macro_f1;
  payload["micro_f1"] = metrics.micro_f1;
  payload["final_loss"] = -out.loss_trace.back();
  payload["epochs_run"] = static_cast<int>(out.loss_trace.size());
  sf::write_report(payload, args.metrics, sf::ReportFormat::json, manifest);

  std::ostringstream emb;
  for (int i = 0; i < out.embeddings.h.rows(); ++i) {
    for (int j = 0; j < out.embeddings.h.cols(); ++j) {
      emb << (j ? "," : "") << sf::format_g12(out.embeddings.h(i, j));
    }
    emb << "\n";
  }
  sf::write_text_file(args.embeddings, emb.str());
  write_sidecar_manifest(args.embeddings, manifest);
  return 0;
}

int run_verify(const std::string& suite) {
  std::vector<sf::CriterionResult> results = sf::run_acceptance(suite);
  bool all_pass = true;
  for (const sf::CriterionResult& r : results) {
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.suite << "/" << r.name
              << ": " << r.detail << "\n";
  }
  std::cout << (all_pass ? "all criteria passed" : "CRITERIA FAILED") << " ("
            << results.size() << " run)\n";
  return all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spectral graph augmentation toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", sf::kVersion);

  SpectrumArgs spectrum;
  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "bin eigenvalue amplitudes to TSV");
  spectrum_cmd->set_config("--config");
  spectrum_cmd->add_option("--graph", spectrum.graph, "edge-list file")
      ->required();
  spectrum_cmd
      ->add_option("--matrix", spectrum.matrix,
                   "amplitude source on the frequency grid")
      ->check(CLI::IsMember({"laplacian", "adjacency"}));
  spectrum_cmd->add_option("--bins", spectrum.bins, "frequency bins")
      ->check(CLI::PositiveNumber);
  spectrum_cmd->add_option("--output", spectrum.output, "TSV path");
  spectrum_cmd->add_option("--seed", spectrum.seed, "manifest seed");

  AugmentArgs augment;
  CLI::App* augment_cmd =
      app.add_subcommand("augment", "random topology augmentation");
  augment_cmd->set_config("--config");
  augment_cmd->add_option("--graph", augment.graph, "edge-list file")
      ->required();
  augment_cmd->add_option("--kind", augment.kind, "augmentation kind")
      ->required()
      ->check(CLI::IsMember(
          {"edge-drop", "node-drop", "edge-perturb", "subgraph"}));
  augment_cmd->add_option("--rate", augment.rate, "perturbation rate")
      ->check(CLI::Range(0.0, 1.0));
  augment_cmd->add_option("--seed", augment.seed, "rng seed");
  augment_cmd->add_option("--output", augment.output, "edge-list output");

  GameCheckArgs game;
  CLI::App* game_cmd = app.add_subcommand(
      "game-check", "band-wise spectrum comparison of two graphs");
  game_cmd->set_config("--config");
  game_cmd->add_option("--graph-a", game.graph_a, "first edge-list file")
      ->required();
  game_cmd->add_option("--graph-b", game.graph_b, "second edge-list file")
      ->required();
  game_cmd->add_option("--bins", game.bins, "frequency bins")
      ->check(CLI::PositiveNumber);
  game_cmd->add_option("--output", game.output, "JSON path");
  game_cmd->add_option("--seed", game.seed, "manifest seed");

  SpcoArgs spco;
  CLI::App* spco_cmd = app.add_subcommand(
      "spco", "curriculum transport augmentation of a graph");
  spco_cmd->set_config("--config");
  spco_cmd->add_option("--graph", spco.graph, "edge-list file")->required();
  spco_cmd->add_option("--theta-final", spco.cfg.theta_final,
                       "curriculum endpoint");
  spco_cmd->add_option("--epochs", spco.cfg.total_epochs, "total epochs")
      ->check(CLI::PositiveNumber);
  spco_cmd
      ->add_option("--update-epochs", spco.cfg.update_epochs,
                   "plan refresh interval")
      ->check(CLI::PositiveNumber);
  spco_cmd->add_option("--eps", spco.cfg.eps, "entropy regularizer")
      ->check(CLI::PositiveNumber);
  spco_cmd->add_option("--eta", spco.cfg.eta, "combination strength");
  spco_cmd->add_option("--hops", spco.cfg.hops, "scope mask radius")
      ->check(CLI::IsMember({1, 2}));
  spco_cmd->add_option("--iters", spco.cfg.iters, "scaling sweeps per solve")
      ->check(CLI::PositiveNumber);
  spco_cmd->add_option("--marginal", spco.marginal, "marginal mode")
      ->check(CLI::IsMember({"degree", "degree-normalized", "uniform"}));
  spco_cmd->add_option("--cost", spco.cost, "cost profile")
      ->check(CLI::IsMember({"laplacian", "identity-plus-laplacian",
                             "identity-plus-laplacian-sq"}));
  spco_cmd->add_option("--seed", spco.cfg.seed, "rng seed");
  spco_cmd->add_option("--trace", spco.trace, "per-epoch JSONL path");
  spco_cmd->add_option("--output", spco.output, "combined edge-list path");

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand(
      "train", "contrastive training on two views plus linear evaluation");
  train_cmd->set_config("--config");
  train_cmd->add_option("--graph", train.graph, "edge-list file")->required();
  train_cmd->add_option("--features", train.features, "feature CSV")
      ->required();
  train_cmd->add_option("--labels", train.labels, "label CSV")->required();
  train_cmd->add_option("--dim", train.cfg.dim, "embedding width")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--lr", train.cfg.lr, "learning rate")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--tau", train.cfg.tau, "temperature")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--epochs", train.cfg.epochs, "training epochs")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--weight-decay", train.cfg.weight_decay,
                        "weight decay");
  train_cmd->add_flag("--linear", train.linear, "drop the ReLU");
  train_cmd->add_option("--similarity", train.similarity, "similarity kind")
      ->check(CLI::IsMember({"dot", "cosine"}));
  train_cmd->add_option("--seed", train.cfg.seed, "rng seed");
  train_cmd->add_option("--band", train.band, "filtered band of view 2")
      ->check(CLI::IsMember({"low", "high", "both"}));
  train_cmd->add_option("--keep-rate", train.keep_rate, "kept band fraction")
      ->check(CLI::Range(0.0, 1.0));
  train_cmd->add_option("--order", train.order, "kept-from end of the band")
      ->check(CLI::IsMember({"low-to-high", "high-to-low"}));
  train_cmd->add_flag("--drop-base-band", train.drop_base_band,
                      "exclude the non-targeted band from view 2");
  train_cmd
      ->add_option("--train-per-class", train.train_per_class,
                   "training nodes per class")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--metrics", train.metrics, "metrics JSON path");
  train_cmd->add_option("--embeddings", train.embeddings,
                        "embedding CSV path");

  std::string suite;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the acceptance criteria");
  verify_cmd->add_option("--suite", suite, "restrict to one suite")
      ->check(CLI::IsMember({"transport", "spectral", "gcl", "spco"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (spectrum_cmd->parsed()) {
      spectrum.seed = resolve_seed(spectrum.seed);
      return run_spectrum(spectrum);
    }
    if (augment_cmd->parsed()) return run_augment(augment);
    if (game_cmd->parsed()) {
      game.seed = resolve_seed(game.seed);
      return run_game_check(game);
    }
    if (spco_cmd->parsed()) return run_spco_cmd(spco);
    if (train_cmd->parsed()) return run_train(train);
    if (verify_cmd->parsed()) return run_verify(suite);
  } catch (const sf::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const sf::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
