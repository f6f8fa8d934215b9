#include "detox/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>

#include "detox/text.hpp"

namespace detox {

std::string iso8601_now() {
  if (const char* pinned = std::getenv("DETOXKIT_TIMESTAMP"); pinned && *pinned) {
    return pinned;
  }
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buffer;
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  const std::filesystem::path parent = path.parent_path();
  if (!parent.empty()) {
    std::filesystem::create_directories(parent);
  }
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw Error("cannot open for writing: " + tmp.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw Error("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path);
}

CopyRates copy_rate(const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double near_threshold) {
  if (inputs.size() != outputs.size()) {
    throw UsageError("copy rate needs aligned inputs and outputs");
  }
  if (inputs.empty()) {
    throw UsageError("copy rate is undefined for an empty run");
  }
  if (near_threshold < 0.0 || near_threshold > 1.0) {
    throw UsageError("near-copy threshold must lie in [0,1]");
  }
  std::size_t exact = 0, near = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string a = normalize_for_copy(inputs[i]);
    const std::string b = normalize_for_copy(outputs[i]);
    if (a == b) ++exact;
    const std::vector<char32_t> ca = decode_utf8(a);
    const std::vector<char32_t> cb = decode_utf8(b);
    const std::size_t max_len = ca.size() > cb.size() ? ca.size() : cb.size();
    const double similarity =
        max_len == 0
            ? 1.0
            : 1.0 - static_cast<double>(edit_distance(ca, cb)) / static_cast<double>(max_len);
    if (similarity >= near_threshold) ++near;
  }
  const double n = static_cast<double>(inputs.size());
  return {static_cast<double>(exact) / n, static_cast<double>(near) / n};
}

EvalPolicy EvalPolicy::for_language(const LanguageTag& language) {
  EvalPolicy policy;
  if (language.code() == "en") {
    policy.sta_style = StaStyle::binary;
    policy.fl_style = FlStyle::binary;
  } else {
    policy.sta_style = StaStyle::continuous;
    policy.fl_style = FlStyle::relative;
  }
  return policy;
}

EvaluatedRun evaluate_run(const SystemRun& run, ScorerSuite& suite, const EvalPolicy& policy) {
  if (run.inputs.size() != run.outputs.size()) {
    throw UsageError("run '" + run.system_id + "' has misaligned inputs and outputs");
  }
  if (run.inputs.empty()) {
    throw UsageError("run '" + run.system_id + "' has no sentences");
  }
  if (suite.info().language != run.language) {
    throw UsageError("suite for '" + suite.info().language.code() + "' cannot score a '" +
                     run.language.code() + "' run");
  }

  EvaluatedRun evaluated;
  ReportRow& row = evaluated.row;
  row.system_id = run.system_id;
  row.language = run.language;
  row.n = run.inputs.size();
  row.copy = copy_rate(run.inputs, run.outputs, policy.near_copy_threshold);

  try {
    evaluated.scores.reserve(run.inputs.size());
    for (std::size_t i = 0; i < run.inputs.size(); ++i) {
      const std::string& source = run.inputs[i];
      const std::string& generated = run.outputs[i];
      const double sta = policy.sta_style == StaStyle::binary
                             ? score_sta_english(generated, suite, policy.sta_threshold)
                             : score_sta_russian(generated, suite);
      const double sim = score_sim(source, generated, suite);
      const double fl = policy.fl_style == FlStyle::binary
                            ? score_fl_english(generated, suite, policy.fl_threshold)
                            : score_fl_russian(source, generated, suite);
      evaluated.scores.push_back(SentenceScores::from_components(sta, sim, fl));
    }
    row.metrics = aggregate(evaluated.scores);
  } catch (const ScorerError& e) {
    evaluated.scores.clear();
    row.metrics = AggregateScores{};
    row.failed = true;
    row.failure_reason = e.what();
  }
  return evaluated;
}

nlohmann::ordered_json suite_descriptor(const SuiteInfo& info, const EvalPolicy& policy) {
  return nlohmann::ordered_json{
      {"language", info.language.code()},
      {"toxicity_model", info.toxicity_model},
      {"similarity_model", info.similarity_model},
      {"fluency_model", info.fluency_model},
      {"thresholds",
       {{"sta", policy.sta_threshold},
        {"fl", policy.fl_threshold},
        {"near_copy", policy.near_copy_threshold}}}};
}

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "tsv") return ReportFormat::tsv;
  if (name == "json") return ReportFormat::json;
  if (name == "markdown") return ReportFormat::markdown;
  throw UsageError("unknown report format '" + name + "' (tsv, json, markdown)");
}

std::string format_display(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof(buffer), "%.3f", value);
  return buffer;
}

namespace {

struct BestFlags {
  bool sta = false;
  bool sim = false;
  bool fl = false;
  bool joint = false;
};

/// Languages in first-appearance order; rows keep their insertion order
/// within a language group.
std::vector<std::string> language_order(const std::vector<ReportRow>& rows) {
  std::vector<std::string> order;
  for (const ReportRow& row : rows) {
    bool seen = false;
    for (const std::string& code : order) {
      if (code == row.language.code()) seen = true;
    }
    if (!seen) order.push_back(row.language.code());
  }
  return order;
}

std::vector<BestFlags> compute_best_flags(const std::vector<ReportRow>& rows) {
  std::vector<BestFlags> flags(rows.size());
  for (const std::string& code : language_order(rows)) {
    double best_sta = -1.0, best_sim = -1.0, best_fl = -1.0, best_joint = -1.0;
    for (const ReportRow& row : rows) {
      if (row.language.code() != code || row.failed) continue;
      if (row.metrics.sta > best_sta) best_sta = row.metrics.sta;
      if (row.metrics.sim > best_sim) best_sim = row.metrics.sim;
      if (row.metrics.fl > best_fl) best_fl = row.metrics.fl;
      if (row.metrics.joint > best_joint) best_joint = row.metrics.joint;
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const ReportRow& row = rows[i];
      if (row.language.code() != code || row.failed) continue;
      flags[i].sta = row.metrics.sta == best_sta;
      flags[i].sim = row.metrics.sim == best_sim;
      flags[i].fl = row.metrics.fl == best_fl;
      flags[i].joint = row.metrics.joint == best_joint;
    }
  }
  return flags;
}

constexpr const char* kFailedSentinel = "FAILED";

std::string render_tsv(const EvaluationReport& report) {
  std::string out =
      "system_id\tlanguage\tsta\tsim\tfl\tjoint\texact_copy\tnear_copy\tn\n";
  for (const std::string& code : language_order(report.rows)) {
    for (const ReportRow& row : report.rows) {
      if (row.language.code() != code) continue;
      out += row.system_id + '\t' + code + '\t';
      if (row.failed) {
        out += std::string(kFailedSentinel) + '\t' + kFailedSentinel + '\t' + kFailedSentinel +
               '\t' + kFailedSentinel;
      } else {
        out += format_display(row.metrics.sta) + '\t' + format_display(row.metrics.sim) + '\t' +
               format_display(row.metrics.fl) + '\t' + format_display(row.metrics.joint);
      }
      out += '\t' + format_display(row.copy.exact) + '\t' + format_display(row.copy.near) + '\t' +
             std::to_string(row.n) + '\n';
    }
  }
  return out;
}

std::string render_json(const EvaluationReport& report) {
  const std::vector<BestFlags> best = compute_best_flags(report.rows);
  nlohmann::ordered_json doc;
  doc["tool_version"] = report.tool_version;
  doc["generated_at"] = report.generated_at;
  doc["suites"] = nlohmann::ordered_json::object();
  for (const auto& [code, descriptor] : report.suites) {
    doc["suites"][code] = descriptor;
  }
  doc["rows"] = nlohmann::ordered_json::array();
  for (const std::string& code : language_order(report.rows)) {
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const ReportRow& row = report.rows[i];
      if (row.language.code() != code) continue;
      nlohmann::ordered_json entry = report_row_to_json(row);
      entry["best_sta"] = best[i].sta;
      entry["best_sim"] = best[i].sim;
      entry["best_fl"] = best[i].fl;
      entry["best_joint"] = best[i].joint;
      doc["rows"].push_back(std::move(entry));
    }
  }
  return doc.dump(2) + "\n";
}

std::string bolded(double value, bool best) {
  const std::string text = format_display(value);
  return best ? "**" + text + "**" : text;
}

std::string render_markdown(const EvaluationReport& report) {
  const std::vector<BestFlags> best = compute_best_flags(report.rows);
  std::string out = "# Detoxification evaluation\n\nTool version " + report.tool_version + ".\n";
  for (const std::string& code : language_order(report.rows)) {
    out += "\n## Language: " + code + "\n\n";
    out += "| System | STA | SIM | FL | J | Exact copies | Near copies | n |\n";
    out += "|---|---|---|---|---|---|---|---|\n";
    for (std::size_t i = 0; i < report.rows.size(); ++i) {
      const ReportRow& row = report.rows[i];
      if (row.language.code() != code) continue;
      out += "| " + row.system_id + " | ";
      if (row.failed) {
        out += std::string(kFailedSentinel) + " | " + kFailedSentinel + " | " + kFailedSentinel +
               " | " + kFailedSentinel;
      } else {
        out += bolded(row.metrics.sta, best[i].sta) + " | " + bolded(row.metrics.sim, best[i].sim) +
               " | " + bolded(row.metrics.fl, best[i].fl) + " | " +
               bolded(row.metrics.joint, best[i].joint);
      }
      out += " | " + format_display(row.copy.exact) + " | " + format_display(row.copy.near) +
             " | " + std::to_string(row.n) + " |\n";
    }
  }
  out += "\nBest value per metric column in bold; ties share the bold. Failed rows keep their\n";
  out += "place with a FAILED sentinel.\n\n";
  out += "J is the mean of the per-sentence STA*SIM*FL products. It is not the product of\n";
  out += "the STA, SIM and FL column means; the two disagree whenever scores vary across\n";
  out += "sentences.\n";
  return out;
}

}  // namespace

std::string render_report(const EvaluationReport& report, ReportFormat format) {
  if (report.rows.empty()) {
    throw UsageError("cannot render an empty report");
  }
  switch (format) {
    case ReportFormat::tsv:
      return render_tsv(report);
    case ReportFormat::json:
      return render_json(report);
    case ReportFormat::markdown:
      return render_markdown(report);
  }
  throw UsageError("unknown report format");
}

void write_run_jsonl(const SystemRun& run, const std::filesystem::path& path) {
  if (run.inputs.size() != run.outputs.size()) {
    throw UsageError("run '" + run.system_id + "' has misaligned inputs and outputs");
  }
  std::string content;
  for (std::size_t i = 0; i < run.inputs.size(); ++i) {
    nlohmann::ordered_json row{{"index", i},
                               {"language", run.language.code()},
                               {"input", run.inputs[i]},
                               {"output", run.outputs[i]}};
    content += row.dump() + "\n";
  }
  write_text_atomic(path, content);
}

SystemRun read_run_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot open run file: " + path.string());
  }
  SystemRun run;
  std::string line;
  std::size_t index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    nlohmann::ordered_json row;
    try {
      row = nlohmann::ordered_json::parse(line);
      if (row.at("index").get<std::size_t>() != index) {
        throw UsageError("run file " + path.string() + ": line " + std::to_string(index + 1) +
                         " has index " + row.at("index").dump());
      }
      const LanguageTag language(row.at("language").get<std::string>());
      if (index == 0) {
        run.language = language;
      } else if (language != run.language) {
        throw UsageError("run file " + path.string() + " mixes languages");
      }
      run.inputs.push_back(row.at("input").get<std::string>());
      run.outputs.push_back(row.at("output").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("run file " + path.string() + ": line " + std::to_string(index + 1) + ": " +
                       e.what());
    }
    ++index;
  }
  if (run.inputs.empty()) {
    throw UsageError("run file " + path.string() + " is empty");
  }

  const std::filesystem::path manifest_path = manifest_path_for(path);
  if (std::filesystem::exists(manifest_path)) {
    run.manifest = read_run_manifest(manifest_path);
    run.system_id = run.manifest.system_id;
  } else {
    run.system_id = path.stem().string();
  }
  return run;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& run_path) {
  std::filesystem::path path = run_path;
  path.replace_extension();
  path += ".manifest.json";
  return path;
}

void write_run_manifest(const RunManifest& manifest, const std::filesystem::path& path) {
  nlohmann::ordered_json doc{{"system_id", manifest.system_id},
                             {"backend", manifest.backend_id},
                             {"setup", manifest.setup},
                             {"train_languages", manifest.train_languages},
                             {"eval_languages", manifest.eval_languages},
                             {"seed", manifest.seed},
                             {"config", manifest.config},
                             {"notes", manifest.notes},
                             {"generated_at", manifest.generated_at},
                             {"tool_version", std::string(kToolVersion)}};
  write_text_atomic(path, doc.dump(2) + "\n");
}

RunManifest read_run_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw UsageError("cannot open manifest: " + path.string());
  }
  RunManifest manifest;
  try {
    nlohmann::ordered_json doc;
    in >> doc;
    manifest.system_id = doc.at("system_id").get<std::string>();
    manifest.backend_id = doc.at("backend").get<std::string>();
    manifest.setup = doc.at("setup").get<std::string>();
    manifest.train_languages = doc.at("train_languages").get<std::vector<std::string>>();
    manifest.eval_languages = doc.at("eval_languages").get<std::vector<std::string>>();
    manifest.seed = doc.at("seed").get<std::uint64_t>();
    manifest.config = doc.at("config");
    manifest.notes = doc.at("notes");
    manifest.generated_at = doc.at("generated_at").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("manifest " + path.string() + ": " + e.what());
  }
  return manifest;
}

void write_scores_jsonl(const std::vector<SentenceScores>& scores,
                        const std::filesystem::path& path) {
  std::string content;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    nlohmann::ordered_json row{{"index", i},
                               {"sta", scores[i].sta},
                               {"sim", scores[i].sim},
                               {"fl", scores[i].fl},
                               {"joint", scores[i].joint}};
    content += row.dump() + "\n";
  }
  write_text_atomic(path, content);
}

void write_provenance_jsonl(const std::vector<SentenceProvenance>& provenance,
                            const std::filesystem::path& path) {
  std::string content;
  for (std::size_t i = 0; i < provenance.size(); ++i) {
    nlohmann::ordered_json row{{"index", i},
                               {"source", provenance[i].source},
                               {"pivot", provenance[i].pivot},
                               {"detoxed_pivot", provenance[i].detoxed_pivot},
                               {"output", provenance[i].output}};
    content += row.dump() + "\n";
  }
  write_text_atomic(path, content);
}

nlohmann::ordered_json report_row_to_json(const ReportRow& row) {
  return nlohmann::ordered_json{{"system_id", row.system_id},
                                {"language", row.language.code()},
                                {"sta", row.metrics.sta},
                                {"sim", row.metrics.sim},
                                {"fl", row.metrics.fl},
                                {"joint", row.metrics.joint},
                                {"exact_copy", row.copy.exact},
                                {"near_copy", row.copy.near},
                                {"n", row.n},
                                {"failed", row.failed},
                                {"failure_reason", row.failure_reason}};
}

ReportRow report_row_from_json(const nlohmann::ordered_json& doc) {
  ReportRow row;
  try {
    row.system_id = doc.at("system_id").get<std::string>();
    row.language = LanguageTag(doc.at("language").get<std::string>());
    row.metrics.sta = doc.at("sta").get<double>();
    row.metrics.sim = doc.at("sim").get<double>();
    row.metrics.fl = doc.at("fl").get<double>();
    row.metrics.joint = doc.at("joint").get<double>();
    row.copy.exact = doc.at("exact_copy").get<double>();
    row.copy.near = doc.at("near_copy").get<double>();
    row.n = doc.at("n").get<std::size_t>();
    row.failed = doc.at("failed").get<bool>();
    row.failure_reason = doc.at("failure_reason").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw UsageError(std::string("malformed report row: ") + e.what());
  }
  return row;
}

}  // namespace detox
