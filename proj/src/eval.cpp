#include "polarity/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <random>

#include <json.hpp>

namespace polarity {
namespace {

std::string fixed(double v, int digits) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

double ratio(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
  return {{"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}};
}

}  // namespace

void ConfusionCounts::add(Polarity gold, Polarity predicted) {
  if (gold == Polarity::Positive) ++(predicted == Polarity::Positive ? tp : fn);
  else ++(predicted == Polarity::Positive ? fp : tn);
}

ConfusionCounts confusion(std::span<const Polarity> gold, std::span<const Polarity> predicted) {
  if (gold.size() != predicted.size()) throw std::invalid_argument("confusion: length mismatch");
  ConfusionCounts c;
  for (std::size_t i = 0; i < gold.size(); ++i) c.add(gold[i], predicted[i]);
  return c;
}

Metrics compute_metrics(const ConfusionCounts& c) {
  Metrics m;
  m.precision = ratio(c.tp, c.tp + c.fp);
  m.recall = ratio(c.tp, c.tp + c.fn);
  // p + r = 0 exactly when tp = 0, which is also when 2tp/(2tp+fp+fn) is 0.
  m.f1 = ratio(2 * c.tp, 2 * c.tp + c.fp + c.fn);
  return m;
}

Metrics macro_average(const Metrics& a, const Metrics& b) {
  return {(a.precision + b.precision) / 2.0, (a.recall + b.recall) / 2.0, (a.f1 + b.f1) / 2.0};
}

std::string_view to_string(CellMode mode) {
  switch (mode) {
    case CellMode::Corrected: return "corrected";
    case CellMode::Standard: return "standard";
    case CellMode::Baseline: return "baseline";
  }
  return "standard";
}

EvalReport make_report(std::string model, const ConfusionCounts& counts) {
  EvalReport r;
  r.model = std::move(model);
  r.counts = counts;
  r.positive = compute_metrics(counts);
  r.negative = compute_metrics(counts.swapped());
  r.macro = macro_average(r.positive, r.negative);
  r.n_test = counts.total();
  return r;
}

ReportFormat parse_report_format(std::string_view s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  if (s == "text" || s == "table") return ReportFormat::Text;
  throw ConfigError("unknown report format '" + std::string(s) + "' (csv|json|text)");
}

void write_csv(std::ostream& out, std::span<const EvalReport> reports) {
  out << "model,domain,scheme,corrected,precision,recall,f1,n_test\n";
  for (const auto& r : reports) {
    out << r.model << ',' << r.domain << ',' << r.scheme << ',' << (r.corrected() ? "true" : "false")
        << ',';
    if (r.ok)
      out << fixed(r.macro.precision, 6) << ',' << fixed(r.macro.recall, 6) << ','
          << fixed(r.macro.f1, 6) << ',' << r.n_test << '\n';
    else
      out << "NA,NA,NA,0\n";
  }
}

void write_json(std::ostream& out, std::span<const EvalReport> reports) {
  using nlohmann::ordered_json;
  ordered_json arr = ordered_json::array();
  for (const auto& r : reports) {
    ordered_json j = {{"model", r.model},      {"kind", r.kind},
                      {"domain", r.domain},    {"scheme", r.scheme},
                      {"mode", to_string(r.mode)}, {"corrected", r.corrected()},
                      {"ok", r.ok}};
    if (!r.ok) j["error"] = r.error;
    j["counts"] = {{"tp", r.counts.tp}, {"fp", r.counts.fp}, {"tn", r.counts.tn}, {"fn", r.counts.fn}};
    j["positive"] = metrics_json(r.positive);
    j["negative"] = metrics_json(r.negative);
    j["macro"] = metrics_json(r.macro);
    j["n_test"] = r.n_test;
    j["config"] = r.config;
    arr.push_back(std::move(j));
  }
  out << arr.dump(2) << '\n';
}

void write_text_table(std::ostream& out, std::span<const EvalReport> reports) {
  // Blocks keyed by (domain, algorithm) in first-appearance order.
  std::vector<std::pair<std::string, std::string>> order;
  std::map<std::pair<std::string, std::string>, std::vector<const EvalReport*>> blocks;
  for (const auto& r : reports) {
    auto key = std::make_pair(r.domain, r.kind);
    auto [it, inserted] = blocks.try_emplace(key);
    if (inserted) order.push_back(key);
    it->second.push_back(&r);
  }
  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.model.size());
  const std::string rule(width + 22, '-');

  std::string current_domain;
  bool first = true;
  for (const auto& key : order) {
    if (first || key.first != current_domain) {
      if (!first) out << rule << "\n\n";
      out << "Domain: " << key.first << '\n' << rule << '\n';
      char head[128];
      std::snprintf(head, sizeof head, "%-*s  %6s %6s %6s\n", static_cast<int>(width), "Model", "Pr.",
                    "Rc.", "F-1");
      out << head << rule << '\n';
      current_domain = key.first;
    } else {
      out << rule << '\n';
    }
    first = false;
    for (const EvalReport* r : blocks[key]) {
      char line[256];
      if (r->ok)
        std::snprintf(line, sizeof line, "%-*s  %6.2f %6.2f %6.2f\n", static_cast<int>(width),
                      r->model.c_str(), r->macro.precision, r->macro.recall, r->macro.f1);
      else
        std::snprintf(line, sizeof line, "%-*s  %6s %6s %6s\n", static_cast<int>(width),
                      r->model.c_str(), "failed", "-", "-");
      out << line;
    }
  }
  if (!first) out << rule << '\n';
}

void emit_report(std::ostream& out, std::span<const EvalReport> reports, ReportFormat format) {
  switch (format) {
    case ReportFormat::Csv: write_csv(out, reports); break;
    case ReportFormat::Json: write_json(out, reports); break;
    case ReportFormat::Text: write_text_table(out, reports); break;
  }
}

void emit_report(const std::filesystem::path& path, std::span<const EvalReport> reports,
                 ReportFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report '" + path.string() + "'");
  emit_report(out, reports, format);
  out.flush();
  if (!out) throw IoError("error while writing report '" + path.string() + "'");
}

std::string metric_payload(const EvalReport& r) {
  nlohmann::ordered_json j = {
      {"ok", r.ok},
      {"counts", {r.counts.tp, r.counts.fp, r.counts.tn, r.counts.fn}},
      {"positive", metrics_json(r.positive)},
      {"negative", metrics_json(r.negative)},
      {"macro", metrics_json(r.macro)},
      {"n_test", r.n_test}};
  return j.dump();
}

ConfidenceInterval bootstrap_macro_f1(std::span<const Polarity> gold,
                                      std::span<const Polarity> predicted, std::size_t replicates,
                                      double level, std::uint64_t seed) {
  if (gold.size() != predicted.size()) throw std::invalid_argument("bootstrap: length mismatch");
  if (gold.empty() || replicates == 0) return {};
  std::mt19937_64 rng(seed);
  std::vector<double> scores;
  scores.reserve(replicates);
  for (std::size_t r = 0; r < replicates; ++r) {
    ConfusionCounts c;
    for (std::size_t k = 0; k < gold.size(); ++k) {
      const std::size_t i = static_cast<std::size_t>(rng() % gold.size());
      c.add(gold[i], predicted[i]);
    }
    scores.push_back(macro_average(compute_metrics(c), compute_metrics(c.swapped())).f1);
  }
  std::sort(scores.begin(), scores.end());
  const double tail = (1.0 - level) / 2.0;
  const auto at = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::floor(q * static_cast<double>(scores.size() - 1)));
    return scores[std::min(idx, scores.size() - 1)];
  };
  return {at(tail), at(1.0 - tail)};
}

}  // namespace polarity
