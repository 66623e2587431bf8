// polarity: command-line driver for ingestion, experiments, prediction and
// sentence-level correction.
//
// Exit codes: 0 success, 1 every grid cell failed, 2 usage or I/O error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarity/config.hpp"
#include "polarity/corpus.hpp"
#include "polarity/correction.hpp"
#include "polarity/experiment.hpp"
#include "polarity/learn.hpp"

namespace fs = std::filesystem;
using namespace polarity;

namespace {

constexpr int kExitPartial = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string config_help() {
  std::ostringstream ss;
  ss << "Run configuration keys (config file `key = value`, env POLARITY_<KEY>, or --<key>):\n";
  for (const auto& doc : config_reference()) {
    ss << "  " << doc.key;
    for (std::size_t i = doc.key.size(); i < 26; ++i) ss << ' ';
    ss << doc.description << " [default: " << doc.default_value << "]\n";
  }
  return ss.str();
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void report_skips(const ParseResult& r, const std::string& source) {
  if (r.skipped > 0) {
    std::cerr << source << ": skipped " << r.skipped << " malformed record(s)\n";
    for (const auto& w : r.warnings) std::cerr << "  " << w << '\n';
  }
  if (r.invalid_utf8 > 0)
    std::cerr << source << ": replaced " << r.invalid_utf8 << " invalid UTF-8 sequence(s)\n";
}

std::vector<ReviewDocument> load_corpus(const fs::path& path) {
  ParseResult r = read_corpus_jsonl(path);
  report_skips(r, path.string());
  for (auto& doc : r.documents)
    if (doc.sentences.empty()) doc = segment_sentences(std::move(doc));
  return std::move(r.documents);
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string input;
  std::string domain;
  std::string format = "blitzer";
  std::string out;
};

int cmd_ingest(const IngestArgs& args) {
  const RecordFormat format = parse_record_format(args.format);
  const fs::path input(args.input);
  if (!fs::exists(input)) throw UsageError("input '" + args.input + "' does not exist");

  std::vector<ReviewDocument> docs;
  std::size_t skipped = 0;
  if (fs::is_regular_file(input)) {
    if (format != RecordFormat::Jsonl) throw UsageError("a single input file must be a JSONL corpus (--format jsonl)");
    ParseResult r = read_corpus_jsonl(input);
    report_skips(r, input.string());
    skipped += r.skipped;
    docs = std::move(r.documents);
    if (!args.domain.empty()) {
      const Domain domain = Domain::parse(args.domain);
      for (auto& d : docs) d.domain = domain;
    }
  } else {
    if (args.domain.empty()) throw UsageError("--domain is required for directory input");
    const Domain domain = Domain::parse(args.domain);
    const std::string ext = format == RecordFormat::Jsonl ? ".jsonl" : ".review";
    bool found = false;
    for (Polarity label : {Polarity::Positive, Polarity::Negative}) {
      const fs::path file = input / (std::string(to_string(label)) + ext);
      if (!fs::exists(file)) continue;
      found = true;
      ParseResult r = parse_review_records(file, domain, label, format);
      report_skips(r, file.string());
      skipped += r.skipped;
      for (auto& d : r.documents) docs.push_back(std::move(d));
    }
    if (!found)
      throw IoError("no positive" + ext + " or negative" + ext + " in '" + input.string() + "'");
  }

  std::size_t sentences = 0;
  for (auto& d : docs) {
    if (d.sentences.empty()) d = segment_sentences(std::move(d));
    sentences += d.sentences.size();
  }
  auto out = open_out(args.out);
  write_corpus_jsonl(out, docs);
  out.flush();
  if (!out) throw IoError("error while writing '" + args.out + "'");
  std::cout << "ingested " << docs.size() << " documents, " << sentences << " sentences -> "
            << args.out << (skipped ? " (" + std::to_string(skipped) + " skipped)" : "") << '\n';
  return 0;
}

// ---- run ------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::vector<std::string> corpora;  // domain=path
  std::map<std::string, std::string> overrides;
  bool no_correction = false;
};

int cmd_run(const RunArgs& args) {
  RunConfig cfg = args.config.empty() ? RunConfig{} : RunConfig::load(args.config);
  cfg.apply_env();
  for (const auto& [key, value] : args.overrides) cfg.set(key, value);
  for (const auto& spec : args.corpora) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--corpus expects <domain>=<path>");
    Domain::parse(spec.substr(0, eq));
    cfg.corpora[spec.substr(0, eq)] = spec.substr(eq + 1);
  }
  if (args.no_correction) {
    cfg.trainset_correction = false;
    cfg.sentence_correction = false;
  }
  if (cfg.corpora.empty()) throw UsageError("no corpus given (use --corpus <domain>=<file> or a config file)");
  for (const auto& [domain, path] : cfg.corpora) {
    if (path.empty()) throw UsageError("domain '" + domain + "' has no corpus path");
    if (!fs::is_regular_file(path)) throw IoError("cannot read corpus '" + path + "'");
  }

  const fs::path outdir(cfg.output);
  fs::create_directories(outdir);
  {
    auto cfg_out = open_out(outdir / "config.txt");
    cfg.write(cfg_out);
  }

  std::vector<EvalReport> reports;
  for (const auto& [domain, path] : cfg.corpora) {
    if (path.empty()) throw UsageError("domain '" + domain + "' has no corpus path");
    std::vector<ReviewDocument> docs = load_corpus(path);
    ExperimentConfig ecfg = cfg.experiment(domain);
    ecfg.keep_models = true;
    ecfg.keep_traces = true;
    const auto grid = cfg.grid();
    ExperimentResult result;
    try {
      result = run_experiment(docs, grid, ecfg);
    } catch (const ConfigError& e) {
      std::cerr << domain << ": " << e.what() << '\n';
      for (const auto& cell : grid) {
        EvalReport r;
        r.model = cell.name();
        r.kind = std::string(to_string(cell.kind));
        r.domain = domain;
        r.scheme = std::string(to_string(cell.scheme));
        r.mode = cell.mode;
        r.ok = false;
        r.error = e.what();
        reports.push_back(r);
      }
      continue;
    }

    for (const auto& cell : result.cells) {
      if (!cell.report.ok) std::cerr << domain << " " << cell.report.model << ": " << cell.report.error << '\n';
      if (cell.model) {
        auto mout = open_out(outdir / "models" / domain / (cell.report.model + ".model"));
        write_model(mout, *cell.model);
      }
      if (cell.report.ok) {
        auto pout = open_out(outdir / "predictions" / domain / (cell.report.model + ".jsonl"));
        for (const auto& p : cell.predictions) pout << prediction_json(p) << '\n';
      }
    }
    if (result.correction) {
      auto tout = open_out(outdir / "traces" / (domain + "-train.jsonl"));
      for (const auto& line : result.train_traces) tout << line << '\n';
      auto sout = open_out(outdir / "traces" / (domain + "-test.jsonl"));
      for (const auto& line : result.test_traces) sout << line << '\n';
      const auto& s = *result.correction;
      std::cerr << domain << ": training-set correction moved " << s.moved_to_positive
                << " sentence(s) to positive and " << s.moved_to_negative << " to negative of "
                << s.train_sentences << "; sentence correction removed " << s.train_removed
                << " train / " << s.test_removed << " test sentence(s)\n";
    }
    for (auto& r : result.reports()) reports.push_back(std::move(r));
  }

  emit_report(outdir / "report.csv", reports, ReportFormat::Csv);
  emit_report(outdir / "report.json", reports, ReportFormat::Json);
  emit_report(outdir / "table.txt", reports, ReportFormat::Text);
  write_text_table(std::cout, reports);

  const bool any_ok = std::any_of(reports.begin(), reports.end(), [](const EvalReport& r) { return r.ok; });
  return any_ok ? 0 : kExitPartial;
}

// ---- predict / correct ----------------------------------------------------

TrainedModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read model '" + path + "'");
  return read_model(in);
}

struct PredictArgs {
  std::string model;
  std::string input;
  std::string out;
  std::string scheme;
  bool correct = false;
};

int cmd_predict(const PredictArgs& args) {
  const TrainedModel model = load_model(args.model);
  if (!args.scheme.empty() && parse_feature_scheme(args.scheme) != model.scheme)
    throw UsageError("model uses '" + std::string(to_string(model.scheme)) + "' features, not '" +
                     args.scheme + "'");
  if (args.correct && !model.naive)
    throw UsageError("--correct needs a model trained with sentence correction (no bundled sentence model)");

  std::ofstream file;
  if (!args.out.empty()) file = open_out(args.out);
  std::ostream& out = args.out.empty() ? std::cout : file;
  for (auto doc : load_corpus(args.input)) {
    analyze_document(doc, model.meta.negation_window);
    nlohmann::ordered_json line = {{"id", doc.id}, {"gold", to_string(doc.label)}};
    Prediction p;
    if (args.correct) {
      const CorrectedDocument c = correct_document(doc, *model.naive, model.meta.correction);
      p = predict(model, c.document);
      line["kept"] = c.consistency.kept;
      line["removed"] = c.consistency.removed;
    } else {
      p = predict(model, doc);
    }
    line["predicted"] = to_string(p.label);
    line["score"] = p.score;
    out << line.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace) << '\n';
  }
  return 0;
}

struct CorrectArgs {
  std::string model;
  std::string input;
  std::string out;
  std::optional<int> theta;
  std::optional<int> negation_window;
  std::string fallback;
};

int cmd_correct(const CorrectArgs& args) {
  std::ifstream in(args.model);
  if (!in) throw IoError("cannot read model '" + args.model + "'");
  std::string first;
  std::getline(in, first);
  in.seekg(0);

  NaiveSentenceModel naive;
  CorrectionConfig cfg;
  if (first.rfind("naive v1", 0) == 0) {
    naive = NaiveSentenceModel::read(in);
  } else {
    TrainedModel model = read_model(in);
    if (!model.naive) throw UsageError("model '" + args.model + "' has no bundled sentence model");
    naive = std::move(*model.naive);
    cfg = model.meta.correction;
  }
  if (args.theta) cfg.theta = *args.theta;
  if (args.negation_window) cfg.negation_window = *args.negation_window;
  if (!args.fallback.empty()) cfg.fallback = parse_fallback(args.fallback);
  cfg.validate();

  std::ofstream file;
  if (!args.out.empty()) file = open_out(args.out);
  std::ostream& out = args.out.empty() ? std::cout : file;
  for (auto doc : load_corpus(args.input)) {
    analyze_document(doc, cfg.negation_window);
    out << correction_trace_json(correct_document(doc, naive, cfg)) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Review-level sentiment classification with sentence-level polarity correction"};
  app.require_subcommand(1);
  app.footer(config_help());

  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse raw reviews into a segmented JSONL corpus");
  ingest_cmd->add_option("--input", ingest.input, "Directory with positive/negative files, or a JSONL corpus")->required();
  ingest_cmd->add_option("--domain", ingest.domain, "Domain name (beauty, books, kitchen, software, ...)");
  ingest_cmd->add_option("--format", ingest.format, "blitzer|jsonl")->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Output JSONL file")->required();

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Train and evaluate the model grid");
  run_cmd->footer(config_help());
  run_cmd->add_option("--config", run.config, "Config file (key = value, [domain.<name>] sections)");
  run_cmd->add_option("--corpus", run.corpora, "<domain>=<jsonl> (repeatable)");
  run_cmd->add_flag("--no-correction", run.no_correction, "Disable both correction stages");
  for (const auto& doc : config_reference()) {
    if (doc.key.front() == '[') continue;
    std::string flag = doc.key;
    std::replace(flag.begin(), flag.end(), '_', '-');
    if (flag == "output") flag = "out";
    run_cmd->add_option_function<std::string>(
        "--" + flag, [&run, key = doc.key](const std::string& v) { run.overrides[key] = v; },
        doc.description + " [default: " + doc.default_value + "]");
  }

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "Predict review polarity with a trained model");
  predict_cmd->add_option("--model", predict_args.model, "Model file")->required();
  predict_cmd->add_option("--input", predict_args.input, "JSONL corpus")->required();
  predict_cmd->add_option("--out", predict_args.out, "Output JSONL (default stdout)");
  predict_cmd->add_option("--scheme", predict_args.scheme, "Expected feature scheme");
  predict_cmd->add_flag("--correct", predict_args.correct, "Apply sentence-level correction first");

  CorrectArgs correct_args;
  auto* correct_cmd = app.add_subcommand("correct", "Run sentence-level correction and print traces");
  correct_cmd->add_option("--model", correct_args.model, "Model file with a bundled sentence model, or a naive model file")->required();
  correct_cmd->add_option("--input", correct_args.input, "JSONL corpus")->required();
  correct_cmd->add_option("--out", correct_args.out, "Output JSONL (default stdout)");
  correct_cmd->add_option("--theta", correct_args.theta, "Override theta");
  correct_cmd->add_option("--negation-window", correct_args.negation_window, "Override negation window");
  correct_cmd->add_option("--fallback", correct_args.fallback, "keep-all|keep-majority-runs|none");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*ingest_cmd) return cmd_ingest(ingest);
    if (*run_cmd) return cmd_run(run);
    if (*predict_cmd) return cmd_predict(predict_args);
    if (*correct_cmd) return cmd_correct(correct_args);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPartial;
  }
  return kExitUsage;
}
