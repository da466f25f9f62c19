#include "cli.hpp"

#include <cstdint>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mderank/corpus.hpp"
#include "mderank/error.hpp"
#include "mderank/evalbench.hpp"
#include "mderank/parallel.hpp"
#include "mderank/pseudo_labelers.hpp"
#include "mderank/triplets.hpp"

namespace mderank::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for invalid settings discovered after parsing; maps to exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

struct Options {
  // Encoder and ranking, shared by every command.
  std::string backend = "transformer";
  std::string model;
  int layer = 12;
  std::string pooling = "max";
  int max_pieces = 512;
  std::string mask_granularity = "piece";
  std::string method = "mderank";
  std::string strategy = "mask_all";
  std::string similarity = "cosine";
  int jobs = 1;
  std::string output;

  // Per-command.
  std::string dataset;
  std::vector<std::string> datasets;
  std::string predictions;
  int top_k = 15;
  std::optional<std::size_t> max_words;
  std::vector<int> ks = {5, 10, 15};
  std::string format = "table";
  std::string theta = "yake_lite";
  int pseudo_top_n = 0;
  int window = 2;
  double damping = 0.85;
  std::string sampling = "absolute";
  int n_triplets = 4;
  std::uint64_t seed = 0;
  bool single_occurrence = false;
  std::string docs_dir;
  std::string keys_dir;
  std::string split_name = "custom";
};

template <typename Fn>
auto as_config(Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const PreconditionError& e) {
    throw ConfigError(e.what());
  } catch (const FormatError& e) {
    throw ConfigError(e.what());
  }
}

MethodSpec method_spec(const Options& o) {
  return as_config([&] {
    MethodSpec spec;
    spec.method = parse_rank_method(o.method);
    spec.strategy = parse_mask_strategy(o.strategy);
    spec.measure = parse_similarity(o.similarity);
    spec.pseudo.window = o.window;
    spec.pseudo.damping = o.damping;
    validate(spec.pseudo);
    return spec;
  });
}

std::optional<Embedder> make_embedder(const Options& o, const MethodSpec& spec) {
  if (!needs_embedder(spec.method)) return std::nullopt;
  return as_config([&] {
    EmbedderConfig cfg;
    cfg.backend = parse_backend_kind(o.backend);
    if (!o.model.empty()) cfg.model_path = o.model;
    if (cfg.backend == BackendKind::kTransformer && !cfg.model_path)
      throw PreconditionError("the transformer backend needs --model or MDERANK_MODEL_DIR");
    cfg.layer = o.layer;
    cfg.pooling = parse_pooling(o.pooling);
    cfg.max_pieces = o.max_pieces;
    cfg.mask_granularity = parse_mask_granularity(o.mask_granularity);
    return std::optional<Embedder>(Embedder::from_config(cfg));
  });
}

DatasetSplit load_dataset(const std::string& path) {
  return as_config([&] { return load_jsonl(path); });
}

// Writes to --output when given, otherwise to `out`.
void emit(const Options& o, std::ostream& out, const std::function<void(std::ostream&)>& write) {
  if (o.output.empty()) {
    write(out);
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw Error("cannot open " + o.output + " for writing");
  write(file);
  if (!file) throw Error("failed writing " + o.output);
}

int cmd_extract(const Options& o, std::ostream& out, std::ostream& err) {
  const MethodSpec spec = method_spec(o);
  if (o.top_k < 1) throw ConfigError("--top-k must be >= 1");
  const auto embedder = make_embedder(o, spec);
  const DatasetSplit split = load_dataset(o.dataset);
  const Embedder* emb = embedder ? &*embedder : nullptr;

  struct Line {
    std::string text;
    std::optional<std::string> error;
  };
  const auto lines = parallel_map<Line>(split.documents.size(), o.jobs, [&](std::size_t i) {
    const Document& doc = split.documents[i];
    Json j;
    j["id"] = doc.id;
    j["method"] = to_string(spec.method);
    if (spec.method == RankMethod::kMdeRank) j["strategy"] = to_string(spec.strategy);
    if (needs_embedder(spec.method)) j["measure"] = to_string(spec.measure);
    Line line;
    try {
      const auto ranked = rank_document(doc, spec, emb, o.max_words);
      Json kps = Json::array();
      if (!ranked.entries.empty())
        for (const auto& e : top_k_entries(ranked, static_cast<std::size_t>(o.top_k)))
          kps.push_back({{"phrase", e.candidate.phrase()}, {"score", e.score}});
      j["keyphrases"] = kps;
    } catch (const Error& e) {
      j["keyphrases"] = Json::array();
      j["error"] = e.what();
      line.error = e.what();
    }
    line.text = j.dump();
    return line;
  });

  int failures = 0;
  emit(o, out, [&](std::ostream& s) {
    for (const auto& l : lines) s << l.text << '\n';
  });
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (!lines[i].error) continue;
    ++failures;
    err << "error: document " << split.documents[i].id << ": " << *lines[i].error << '\n';
  }
  return failures == 0 ? 0 : 1;
}

std::map<std::string, std::string> config_snapshot(const Options& o, const MethodSpec& spec) {
  std::map<std::string, std::string> c;
  c["method"] = to_string(spec.method);
  if (needs_embedder(spec.method)) {
    c["backend"] = o.backend;
    if (!o.model.empty()) c["model"] = o.model;
    c["layer"] = std::to_string(o.layer);
    c["pooling"] = o.pooling;
    c["max_pieces"] = std::to_string(o.max_pieces);
    c["measure"] = to_string(spec.measure);
  }
  if (spec.method == RankMethod::kMdeRank) c["strategy"] = to_string(spec.strategy);
  c["max_words"] = o.max_words ? std::to_string(*o.max_words) : "none";
  return c;
}

BenchmarkConfig bench_config(const Options& o) {
  BenchmarkConfig cfg;
  cfg.ks = o.ks;
  cfg.max_words = o.max_words;
  cfg.jobs = o.jobs;
  for (int k : cfg.ks)
    if (k < 1) throw ConfigError("every --k must be >= 1");
  if (cfg.ks.empty()) throw ConfigError("--k needs at least one value");
  return cfg;
}

void write_report(const Options& o, const EvalReport& report, std::ostream& out) {
  emit(o, out, [&](std::ostream& s) {
    if (o.format == "json") {
      s << report_to_json(report);
    } else if (o.format == "csv") {
      s << report_to_csv(report);
    } else {
      s << report_to_table(report);
    }
  });
}

void report_errors(const EvalReport& report, std::ostream& err) {
  for (const auto& [name, m] : report.per_dataset)
    for (const auto& e : m.errors) err << "warning: " << name << '/' << e.doc_id << ": " << e.message << '\n';
}

int cmd_benchmark(const Options& o, std::ostream& out, std::ostream& err) {
  const MethodSpec spec = method_spec(o);
  const BenchmarkConfig cfg = bench_config(o);
  const auto embedder = make_embedder(o, spec);
  EvalReport report;
  report.config = config_snapshot(o, spec);
  for (const auto& path : o.datasets) {
    const DatasetSplit split = load_dataset(path);
    if (!split.fully_labelled()) throw ConfigError(path + " has documents without gold keyphrases");
    report.per_dataset[split.name] = run_benchmark(split, spec, embedder ? &*embedder : nullptr, cfg);
  }
  finalize_report(report);
  write_report(o, report, out);
  report_errors(report, err);
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream& err) {
  const BenchmarkConfig cfg = bench_config(o);
  const DatasetSplit split = load_dataset(o.dataset);
  std::ifstream in(o.predictions);
  const auto predictions = read_predictions(in);
  EvalReport report;
  report.config["predictions"] = o.predictions;
  report.per_dataset[split.name] = score_predictions(split, predictions, cfg);
  finalize_report(report);
  write_report(o, report, out);
  report_errors(report, err);
  return 0;
}

PseudoLabelConfig theta_config(const Options& o, int default_top_n) {
  return as_config([&] {
    PseudoLabelConfig cfg;
    cfg.method = parse_pseudo_label_method(o.theta);
    cfg.top_n = o.pseudo_top_n > 0 ? o.pseudo_top_n : default_top_n;
    cfg.window = o.window;
    cfg.damping = o.damping;
    validate(cfg);
    return cfg;
  });
}

int cmd_pseudo_label(const Options& o, std::ostream& out, std::ostream&) {
  const PseudoLabelConfig cfg = theta_config(o, 10);
  const DatasetSplit split = load_dataset(o.dataset);
  const auto lines = parallel_map<std::string>(split.documents.size(), o.jobs, [&](std::size_t i) {
    const Document& doc = split.documents[i];
    const auto ranked = pseudo_label_rank(doc, extract_candidates(doc), cfg);
    Json j;
    j["doc_id"] = doc.id;
    j["method"] = to_string(cfg.method);
    j["phrases"] = pseudo_keyphrases(ranked, static_cast<std::size_t>(cfg.top_n));
    return j.dump();
  });
  emit(o, out, [&](std::ostream& s) {
    for (const auto& l : lines) s << l << '\n';
  });
  return 0;
}

int cmd_triplets(const Options& o, std::ostream& out, std::ostream& err) {
  TripletRunConfig cfg = as_config([&] {
    TripletRunConfig c;
    c.sampling = parse_sampling(o.sampling);
    return c;
  });
  cfg.theta = theta_config(o, default_pseudo_top_n(cfg.sampling));
  if (o.pseudo_top_n > 0) cfg.pseudo_top_n = o.pseudo_top_n;
  if (o.n_triplets < 1) throw ConfigError("--n-triplets must be >= 1");
  cfg.options.n_triplets = o.n_triplets;
  cfg.options.seed = o.seed;
  cfg.options.single_occurrence = o.single_occurrence;
  const DatasetSplit split = load_dataset(o.dataset);

  const auto batches = parallel_map<TripletBatch>(split.documents.size(), o.jobs,
                                                  [&](std::size_t i) { return make_triplets(split.documents[i], cfg); });
  std::size_t written = 0;
  emit(o, out, [&](std::ostream& s) {
    for (const auto& b : batches)
      for (const auto& t : b.triplets) {
        s << to_jsonl_line(t) << '\n';
        ++written;
      }
  });
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < batches.size(); ++i) {
    if (!batches[i].skip_reason) continue;
    ++skipped;
    err << "skipped " << split.documents[i].id << ": " << *batches[i].skip_reason << '\n';
  }
  err << written << " triplets from " << split.documents.size() - skipped << " of " << split.documents.size()
      << " documents\n";
  return 0;
}

int cmd_convert(const Options& o, std::ostream& out, std::ostream&) {
  const DatasetSplit split = as_config([&] { return convert_raw_benchmark(o.docs_dir, o.keys_dir, o.split_name); });
  emit(o, out, [&](std::ostream& s) { write_jsonl(split, s); });
  return 0;
}

void add_encoder_options(CLI::App& app, Options& o) {
  const char* group = "Encoder";
  app.add_option("--backend", o.backend, "Embedding backend: transformer or test_bow")
      ->capture_default_str()
      ->group(group);
  app.add_option("--model", o.model, "Exported model directory")->envname("MDERANK_MODEL_DIR")->group(group);
  app.add_option("--layer", o.layer, "Encoder layer to pool (1-based)")->capture_default_str()->group(group);
  app.add_option("--pooling", o.pooling, "max or avg")->capture_default_str()->group(group);
  app.add_option("--max-pieces", o.max_pieces, "Sequence limit including special pieces")
      ->capture_default_str()
      ->group(group);
  app.add_option("--mask-granularity", o.mask_granularity, "piece (one mask per piece) or word")
      ->capture_default_str()
      ->group(group);
}

void add_ranking_options(CLI::App& app, Options& o) {
  const char* group = "Ranking";
  app.add_option("--method", o.method, "mderank, embedrank, textrank or yake_lite")
      ->capture_default_str()
      ->group(group);
  app.add_option("--strategy", o.strategy, "mask_all, mask_once, mask_highest or mask_subset")
      ->capture_default_str()
      ->group(group);
  app.add_option("--similarity", o.similarity, "cosine or euclidean")->capture_default_str()->group(group);
  app.add_option("--window", o.window, "TextRank co-occurrence window")->capture_default_str()->group(group);
  app.add_option("--damping", o.damping, "TextRank damping factor")->capture_default_str()->group(group);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Unsupervised keyphrase extraction with masked document embeddings", "mderank"};
  app.set_config("--config", "", "TOML file with option defaults; flags override it");
  app.require_subcommand(1);
  app.add_option("--jobs,-j", o.jobs, "Documents processed in parallel")->capture_default_str();
  app.add_option("--output,-o", o.output, "Write the result here instead of stdout");
  add_encoder_options(app, o);
  add_ranking_options(app, o);

  auto* extract = app.add_subcommand("extract", "Print ranked keyphrases per document as JSONL");
  extract->add_option("dataset,--dataset", o.dataset, "JSONL dataset")->required()->check(CLI::ExistingFile);
  extract->add_option("--top-k", o.top_k, "Keyphrases per document")->capture_default_str();
  extract->add_option("--max-words", o.max_words, "Keep only the first N words of each document");

  auto* benchmark = app.add_subcommand("benchmark", "Rank and score labelled datasets");
  benchmark->add_option("--dataset", o.datasets, "Labelled JSONL dataset (repeatable)")
      ->required()
      ->check(CLI::ExistingFile);
  benchmark->add_option("--max-words", o.max_words, "Keep only the first N words of each document");

  auto* eval = app.add_subcommand("eval", "Score an existing prediction file against gold keyphrases");
  eval->add_option("predictions,--predictions", o.predictions, "Prediction JSONL (extract output)")
      ->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--dataset", o.dataset, "Labelled JSONL dataset")->required()->check(CLI::ExistingFile);

  for (auto* sub : {benchmark, eval}) {
    sub->add_option("--k", o.ks, "Cut-offs for F1@K")->capture_default_str();
    sub->add_option("--format", o.format, "table, json or csv")
        ->capture_default_str()
        ->check(CLI::IsMember({"table", "json", "csv"}));
  }

  auto* pseudo = app.add_subcommand("pseudo-label", "Write theta pseudo keyphrases per document as JSONL");
  auto* triplets = app.add_subcommand("triplets", "Write contrastive training triplets as JSONL");
  for (auto* sub : {pseudo, triplets}) {
    sub->add_option("dataset,--dataset", o.dataset, "JSONL dataset")->required()->check(CLI::ExistingFile);
    sub->add_option("--theta", o.theta, "Pseudo-label scorer: yake_lite or textrank")->capture_default_str();
    sub->add_option("--top-n", o.pseudo_top_n, "Pseudo keyphrases per document (default 10, relative triplets 20)");
  }
  triplets->add_option("--sampling", o.sampling, "absolute or relative")->capture_default_str();
  triplets->add_option("--n-triplets", o.n_triplets, "Triplets per document")->capture_default_str();
  triplets->add_option("--seed", o.seed, "Sampling seed")->capture_default_str();
  triplets->add_flag("--single-occurrence", o.single_occurrence, "Mask only the first occurrence of a phrase");

  auto* convert = app.add_subcommand("convert", "Turn a directory of texts and .key files into JSONL");
  convert->add_option("--docs", o.docs_dir, "Directory of document texts")->required()->check(CLI::ExistingDirectory);
  convert->add_option("--keys", o.keys_dir, "Directory of .key files")->required()->check(CLI::ExistingDirectory);
  convert->add_option("--name", o.split_name, "Split name")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (o.jobs < 1) throw ConfigError("--jobs must be >= 1");
    if (app.got_subcommand(extract)) return cmd_extract(o, out, err);
    if (app.got_subcommand(benchmark)) return cmd_benchmark(o, out, err);
    if (app.got_subcommand(eval)) return cmd_eval(o, out, err);
    if (app.got_subcommand(pseudo)) return cmd_pseudo_label(o, out, err);
    if (app.got_subcommand(triplets)) return cmd_triplets(o, out, err);
    return cmd_convert(o, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace mderank::cli
