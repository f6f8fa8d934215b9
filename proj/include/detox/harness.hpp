#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "detox/backtranslation.hpp"
#include "detox/corpus.hpp"
#include "detox/error.hpp"
#include "detox/metrics.hpp"
#include "detox/run.hpp"
#include "json.hpp"

namespace detox {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Current UTC time as YYYY-MM-DDTHH:MM:SSZ. The DETOXKIT_TIMESTAMP
/// environment variable overrides the clock so archived artifacts can be
/// reproduced bit for bit.
std::string iso8601_now();

/// Writes via a temp file in the same directory and renames into place, so
/// readers never observe a partial artifact. Creates parent directories.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

struct CopyRates {
  double exact = 0.0;
  double near = 0.0;
};

/// exact: fraction of outputs equal to their input after lowercasing and
/// whitespace collapsing. near: fraction with normalized codepoint-level
/// similarity (1 - edit_distance / max_length) at or above the threshold.
/// near >= exact always holds.
CopyRates copy_rate(const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs, double near_threshold = 0.95);

enum class StaStyle { binary, continuous };
enum class FlStyle { binary, relative };

/// Language-dependent choice of metric variants and thresholds.
struct EvalPolicy {
  StaStyle sta_style = StaStyle::binary;
  FlStyle fl_style = FlStyle::binary;
  double sta_threshold = 0.8;
  double fl_threshold = 0.5;
  double near_copy_threshold = 0.95;

  /// English uses the binary acceptability variants; every other language
  /// gets the continuous toxicity complement and the relative corruption
  /// penalty.
  static EvalPolicy for_language(const LanguageTag& language);
};

/// One scored system, shaped like a results-table row.
struct ReportRow {
  std::string system_id;
  LanguageTag language;
  AggregateScores metrics;
  CopyRates copy;
  std::size_t n = 0;
  bool failed = false;
  std::string failure_reason;
};

struct EvaluatedRun {
  ReportRow row;
  std::vector<SentenceScores> scores;  // empty when the row failed
};

/// Scores a run with the suite under the policy. A scorer failure marks the
/// row failed instead of propagating, so one broken backend cannot take down
/// a whole report; copy rates are still computed.
EvaluatedRun evaluate_run(const SystemRun& run, ScorerSuite& suite, const EvalPolicy& policy);

/// Suite provenance merged with the thresholds the policy applied.
nlohmann::ordered_json suite_descriptor(const SuiteInfo& info, const EvalPolicy& policy);

struct EvaluationReport {
  std::vector<ReportRow> rows;
  std::map<std::string, nlohmann::ordered_json> suites;  // language code -> descriptor
  std::string generated_at;
  std::string tool_version = std::string(kToolVersion);
};

enum class ReportFormat { tsv, json, markdown };

ReportFormat report_format_from_string(const std::string& name);

/// Renders the report. Markdown and TSV display all metrics with three
/// decimals and never include the timestamp; JSON carries full-precision
/// values plus per-column best flags and the timestamp. In markdown the best
/// value per (language, metric) column is bold, ties all bold, and failed
/// rows show a FAILED sentinel instead of vanishing.
std::string render_report(const EvaluationReport& report, ReportFormat format);

/// Three-decimal display form used by the TSV and markdown renderers.
std::string format_display(double value);

/// Run rows as JSON lines: {"index":i,"language":..,"input":..,"output":..}.
void write_run_jsonl(const SystemRun& run, const std::filesystem::path& path);

/// Reads rows written by write_run_jsonl. When the manifest sidecar exists
/// it supplies system_id and manifest; otherwise the file stem is used.
SystemRun read_run_jsonl(const std::filesystem::path& path);

/// run.jsonl -> run.manifest.json, next to the run file.
std::filesystem::path manifest_path_for(const std::filesystem::path& run_path);

void write_run_manifest(const RunManifest& manifest, const std::filesystem::path& path);
RunManifest read_run_manifest(const std::filesystem::path& path);

/// Score rows as JSON lines: {"index":i,"sta":..,"sim":..,"fl":..,"joint":..}.
void write_scores_jsonl(const std::vector<SentenceScores>& scores,
                        const std::filesystem::path& path);

/// Pivot audit trail as JSON lines:
/// {"index":i,"source":..,"pivot":..,"detoxed_pivot":..,"output":..}.
void write_provenance_jsonl(const std::vector<SentenceProvenance>& provenance,
                            const std::filesystem::path& path);

nlohmann::ordered_json report_row_to_json(const ReportRow& row);
ReportRow report_row_from_json(const nlohmann::ordered_json& doc);

}  // namespace detox
