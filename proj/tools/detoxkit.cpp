// Command-line front end: detox, train, evaluate, report, diag-copy.
// Exit codes: 0 success, 1 usage/config/corpus problems, 2 backend, scorer
// or translator failures.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "detox/backtranslation.hpp"
#include "detox/baselines.hpp"
#include "detox/harness.hpp"
#include "detox/metrics.hpp"
#include "detox/seq2seq.hpp"
#include "detox/text.hpp"
#include "json.hpp"

namespace {

using namespace detox;

std::vector<std::string> read_inputs(const std::string& path, const std::string& format,
                                     const LanguageTag& language) {
  if (format == "tsv") {
    const Corpus corpus = load_parallel_tsv(path, language, Split::test);
    std::vector<std::string> inputs;
    inputs.reserve(corpus.size());
    for (const DetoxPair& record : corpus.records()) inputs.push_back(record.toxic);
    return inputs;
  }
  if (format == "lines") {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CorpusError("cannot open input file: " + path);
    std::vector<std::string> inputs;
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      inputs.push_back(line);
    }
    if (inputs.empty()) throw CorpusError("input file is empty: " + path);
    return inputs;
  }
  throw UsageError("unknown input format '" + format + "' (tsv, lines)");
}

std::unique_ptr<MaskedLMBackend> make_masked_lm(const std::string& spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string::npos) {
    throw UsageError("--mlm expects scripted:PATH or fixed:token:score,token:score");
  }
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "scripted") {
    return std::make_unique<ScriptedMaskedLM>(ScriptedMaskedLM::from_file(rest));
  }
  if (kind == "fixed") {
    std::vector<MaskCandidate> candidates;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      std::size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      const std::string item = rest.substr(pos, comma - pos);
      const std::size_t sep = item.rfind(':');
      if (sep == std::string::npos || sep == 0) {
        throw UsageError("--mlm fixed: expected token:score, got '" + item + "'");
      }
      try {
        candidates.push_back({item.substr(0, sep), std::stod(item.substr(sep + 1))});
      } catch (const std::exception&) {
        throw UsageError("--mlm fixed: bad score in '" + item + "'");
      }
      pos = comma + 1;
    }
    return std::make_unique<FixedMaskedLM>(std::move(candidates));
  }
  throw UsageError("unknown masked-LM kind '" + kind + "' (scripted, fixed)");
}

std::unique_ptr<TranslatorBackend> make_translator(const std::string& spec) {
  if (spec == "identity") return std::make_unique<IdentityTranslator>();
  if (spec.rfind("file:", 0) == 0) {
    return std::make_unique<FileTranslatorStub>(FileTranslatorStub::from_file(spec.substr(5)));
  }
  throw UsageError("unknown translator '" + spec + "' (identity, file:PATH)");
}

std::unique_ptr<ScorerSuite> make_suite(const std::string& spec, const std::string& lexicon_path,
                                        const LanguageTag& language) {
  if (spec == "reference") {
    if (lexicon_path.empty()) {
      throw UsageError("the reference suite needs --lexicon");
    }
    return reference_scorer_suite(load_lexicon(lexicon_path, language));
  }
  if (spec.rfind("precomputed:", 0) == 0) {
    return std::make_unique<PrecomputedScorerSuite>(
        PrecomputedScorerSuite::from_file(spec.substr(12)));
  }
  throw UsageError("unknown suite '" + spec + "' (reference, precomputed:PATH)");
}

struct DetoxArgs {
  std::string method;
  std::string in_path;
  std::string input_format = "tsv";
  std::string language;
  std::string out_path;
  std::string system_id;
  std::string lexicon_path;
  std::string mlm_spec;
  std::size_t max_candidates = 10;
  double tox_threshold = 0.5;
  std::string handle_path;
  std::string pivot;
  std::string translator_spec;
  std::string pivot_lexicon_path;
  std::uint64_t seed = 0;
};

int run_detox(const DetoxArgs& args) {
  const LanguageTag language(args.language);
  const std::vector<std::string> inputs =
      read_inputs(args.in_path, args.input_format, language);

  SystemRun run;
  run.language = language;
  run.inputs = inputs;
  RunManifest& manifest = run.manifest;
  manifest.eval_languages = {language.code()};
  manifest.seed = args.seed;
  manifest.config["method"] = args.method;
  manifest.config["input"] = args.in_path;

  if (args.method == "delete" || args.method == "condbert") {
    if (args.lexicon_path.empty()) {
      throw UsageError("--lexicon is required for method " + args.method);
    }
    const ToxicLexicon lexicon = load_lexicon(args.lexicon_path, language);
    manifest.backend_id = args.method;
    manifest.setup = "baseline";
    manifest.config["lexicon"] = args.lexicon_path;
    if (args.method == "delete") {
      for (const std::string& text : inputs) {
        run.outputs.push_back(delete_detox(text, lexicon).output);
      }
    } else {
      if (args.mlm_spec.empty()) {
        throw UsageError("--mlm is required for method condbert");
      }
      const std::unique_ptr<MaskedLMBackend> mlm = make_masked_lm(args.mlm_spec);
      const ToxicityFn toxicity = make_lexicon_toxicity(lexicon);
      CondBertOptions options;
      options.max_candidates = args.max_candidates;
      options.toxicity_threshold = args.tox_threshold;
      manifest.config["mlm"] = mlm->id();
      manifest.config["max_candidates"] = options.max_candidates;
      manifest.config["toxicity_threshold"] = options.toxicity_threshold;
      for (const std::string& text : inputs) {
        run.outputs.push_back(condbert_detox(text, lexicon, *mlm, toxicity, options).output);
      }
    }
  } else if (args.method == "seq2seq") {
    if (args.handle_path.empty()) {
      throw UsageError("--handle is required for method seq2seq");
    }
    std::ifstream in(args.handle_path, std::ios::binary);
    if (!in) throw UsageError("cannot open handle: " + args.handle_path);
    nlohmann::ordered_json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("handle " + args.handle_path + ": " + e.what());
    }
    const std::string backend_name = doc.value("backend", "");
    std::optional<ToxicLexicon> lexicon;
    if (doc.contains("lexicon_path") && !doc["lexicon_path"].get<std::string>().empty()) {
      lexicon = load_lexicon(doc["lexicon_path"].get<std::string>(),
                             LanguageTag(doc.value("lexicon_language", "en")));
    }
    const std::unique_ptr<DetoxModelBackend> backend =
        make_reference_backend(backend_name, std::move(lexicon));
    auto model = std::make_shared<TrainedModel>();
    model->backend_id = backend_name;
    run.outputs = backend->generate(model, inputs, language);
    manifest.backend_id = backend_name;
    manifest.setup = doc.value("setup", "seq2seq");
    if (doc.contains("train_languages")) {
      manifest.train_languages = doc["train_languages"].get<std::vector<std::string>>();
    }
    manifest.config["handle"] = args.handle_path;
    if (doc.contains("config")) manifest.config["training"] = doc["config"];
    manifest.notes["decoding"] = "greedy";
    manifest.notes["control_tokens"] = "none";
  } else if (args.method == "backtranslate") {
    if (args.pivot.empty() || args.translator_spec.empty() || args.pivot_lexicon_path.empty()) {
      throw UsageError("method backtranslate needs --pivot, --translator and --pivot-lexicon");
    }
    const LanguageTag pivot(args.pivot);
    const ToxicLexicon pivot_lexicon = load_lexicon(args.pivot_lexicon_path, pivot);
    const std::unique_ptr<TranslatorBackend> translator = make_translator(args.translator_spec);
    const BatchDetoxFn detoxify = [&pivot_lexicon](const std::vector<std::string>& texts) {
      std::vector<std::string> out;
      out.reserve(texts.size());
      for (const std::string& text : texts) {
        out.push_back(delete_detox(text, pivot_lexicon).output);
      }
      return out;
    };
    const BacktranslationResult result =
        backtranslate_detox(inputs, language, pivot, *translator, detoxify);
    run.outputs = result.outputs;
    manifest.backend_id = "backtranslate";
    manifest.setup = "backtranslation";
    manifest.config["pivot"] = pivot.code();
    manifest.config["translator"] = translator->id();
    manifest.config["pivot_lexicon"] = args.pivot_lexicon_path;
    manifest.config["pivot_method"] = "delete";
    manifest.notes["direction"] =
        language.code() + "->" + pivot.code() + "->" + language.code();
    std::filesystem::path provenance_path(args.out_path);
    provenance_path.replace_extension();
    provenance_path += ".provenance.jsonl";
    write_provenance_jsonl(result.provenance, provenance_path);
  } else {
    throw UsageError("unknown method '" + args.method +
                     "' (delete, condbert, seq2seq, backtranslate)");
  }

  run.system_id = args.system_id.empty() ? args.method : args.system_id;
  manifest.system_id = run.system_id;
  manifest.generated_at = iso8601_now();
  write_run_jsonl(run, args.out_path);
  write_run_manifest(manifest, manifest_path_for(args.out_path));
  std::cout << "wrote " << run.outputs.size() << " sentences to " << args.out_path << "\n";
  return 0;
}

struct TrainArgs {
  std::string backend;
  std::string setup = "monolingual";
  std::vector<std::string> train_specs;
  std::string eval_langs;
  std::string lexicon_path;
  std::string lexicon_language;
  std::size_t equalize_total = 10000;
  std::string out_path;
  TrainingConfig config;
};

int run_train(const TrainArgs& args) {
  ExperimentSetup setup;
  setup.kind = setup_kind_from_string(args.setup);
  setup.equalize_total = args.equalize_total;

  CorpusMap corpora;
  for (const std::string& spec : args.train_specs) {
    const std::size_t eq = spec.find('=');
    if (eq == std::string::npos) {
      throw UsageError("--train expects lang=path, got '" + spec + "'");
    }
    const LanguageTag language(spec.substr(0, eq));
    corpora[language].train = load_parallel_tsv(spec.substr(eq + 1), language, Split::train);
    setup.train_languages.insert(language);
  }
  if (args.eval_langs.empty()) {
    setup.eval_languages = setup.train_languages;
  } else {
    std::size_t pos = 0;
    while (pos <= args.eval_langs.size()) {
      std::size_t comma = args.eval_langs.find(',', pos);
      if (comma == std::string::npos) comma = args.eval_langs.size();
      setup.eval_languages.insert(LanguageTag(args.eval_langs.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }

  std::optional<ToxicLexicon> lexicon;
  if (!args.lexicon_path.empty()) {
    const std::string code =
        args.lexicon_language.empty() ? (*setup.train_languages.begin()).code()
                                      : args.lexicon_language;
    lexicon = load_lexicon(args.lexicon_path, LanguageTag(code));
  }
  const std::unique_ptr<DetoxModelBackend> backend =
      make_reference_backend(args.backend, std::move(lexicon));

  args.config.validate();
  const TrainingSet training = assemble_training_pairs(setup, corpora, args.config.seed);
  const ModelHandle handle = backend->fine_tune(training.pairs, args.config);

  nlohmann::ordered_json doc{{"backend", backend->id()},
                             {"setup", to_string(setup.kind)},
                             {"train_languages", nlohmann::ordered_json::array()},
                             {"eval_languages", nlohmann::ordered_json::array()},
                             {"lexicon_path", args.lexicon_path},
                             {"lexicon_language", args.lexicon_language},
                             {"config", args.config.to_json()},
                             {"equalize_total", setup.equalize_total},
                             {"training_pairs", training.pairs.size()},
                             {"records_per_language", training.records_per_language},
                             {"model_details", handle->details},
                             {"generated_at", iso8601_now()}};
  for (const LanguageTag& language : setup.train_languages) {
    doc["train_languages"].push_back(language.code());
  }
  for (const LanguageTag& language : setup.eval_languages) {
    doc["eval_languages"].push_back(language.code());
  }
  write_text_atomic(args.out_path, doc.dump(2) + "\n");
  std::cout << "trained " << backend->id() << " on " << training.pairs.size() << " pairs\n";
  return 0;
}

struct EvaluateArgs {
  std::string run_path;
  std::string suite_spec = "reference";
  std::string lexicon_path;
  std::string language;
  std::string scores_out;
  std::string row_out;
  double sta_threshold = -1.0;
  double fl_threshold = -1.0;
  double near_copy_threshold = -1.0;
};

int run_evaluate(const EvaluateArgs& args) {
  SystemRun run = read_run_jsonl(args.run_path);
  if (!args.language.empty()) {
    const LanguageTag requested(args.language);
    if (requested != run.language) {
      throw UsageError("--language " + requested.code() + " does not match run language " +
                       run.language.code());
    }
  }

  EvalPolicy policy = EvalPolicy::for_language(run.language);
  if (args.sta_threshold >= 0.0) policy.sta_threshold = args.sta_threshold;
  if (args.fl_threshold >= 0.0) policy.fl_threshold = args.fl_threshold;
  if (args.near_copy_threshold >= 0.0) policy.near_copy_threshold = args.near_copy_threshold;

  const std::unique_ptr<ScorerSuite> suite =
      make_suite(args.suite_spec, args.lexicon_path, run.language);
  const EvaluatedRun evaluated = evaluate_run(run, *suite, policy);

  if (!args.scores_out.empty()) {
    write_scores_jsonl(evaluated.scores, args.scores_out);
  }
  if (!args.row_out.empty()) {
    nlohmann::ordered_json doc{{"row", report_row_to_json(evaluated.row)},
                               {"suite", suite_descriptor(suite->info(), policy)}};
    write_text_atomic(args.row_out, doc.dump(2) + "\n");
  }

  const ReportRow& row = evaluated.row;
  if (row.failed) {
    std::cerr << "error: scorer failure: " << row.failure_reason << "\n";
    return 2;
  }
  std::cout << "system_id=" << row.system_id << " language=" << row.language.code()
            << " sta=" << format_display(row.metrics.sta)
            << " sim=" << format_display(row.metrics.sim)
            << " fl=" << format_display(row.metrics.fl)
            << " joint=" << format_display(row.metrics.joint)
            << " exact_copy=" << format_display(row.copy.exact)
            << " near_copy=" << format_display(row.copy.near) << " n=" << row.n << "\n";
  return 0;
}

struct ReportArgs {
  std::string format = "markdown";
  std::string out_path;
  std::vector<std::string> row_files;
};

int run_report(const ReportArgs& args) {
  EvaluationReport report;
  report.generated_at = iso8601_now();
  for (const std::string& path : args.row_files) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open row file: " + path);
    nlohmann::ordered_json doc;
    try {
      in >> doc;
    } catch (const nlohmann::json::exception& e) {
      throw UsageError("row file " + path + ": " + e.what());
    }
    if (!doc.contains("row")) throw UsageError("row file " + path + " has no 'row' object");
    const ReportRow row = report_row_from_json(doc["row"]);
    if (doc.contains("suite")) {
      const std::string code = row.language.code();
      const auto existing = report.suites.find(code);
      if (existing != report.suites.end() && existing->second != doc["suite"]) {
        throw UsageError("conflicting suite descriptors for language '" + code + "'");
      }
      report.suites[code] = doc["suite"];
    }
    report.rows.push_back(row);
  }

  const std::string rendered =
      render_report(report, report_format_from_string(args.format));
  if (args.out_path.empty()) {
    std::cout << rendered;
  } else {
    write_text_atomic(args.out_path, rendered);
    std::cout << "wrote report to " << args.out_path << "\n";
  }
  return 0;
}

int run_diag_copy(const std::string& run_path, double near_threshold) {
  const SystemRun run = read_run_jsonl(run_path);
  const CopyRates rates = copy_rate(run.inputs, run.outputs, near_threshold);
  std::cout << "exact_copy_rate " << format_display(rates.exact) << "\n";
  std::cout << "near_copy_rate " << format_display(rates.near) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilingual text detoxification toolkit"};
  app.require_subcommand(1);

  DetoxArgs detox_args;
  CLI::App* detox_cmd = app.add_subcommand("detox", "rewrite toxic sentences");
  detox_cmd->add_option("--method", detox_args.method, "delete, condbert, seq2seq, backtranslate")
      ->required();
  detox_cmd->add_option("--in", detox_args.in_path, "input corpus")->required();
  detox_cmd->add_option("--input-format", detox_args.input_format, "tsv or lines");
  detox_cmd->add_option("--language", detox_args.language, "input language code")->required();
  detox_cmd->add_option("--out", detox_args.out_path, "run JSONL output")->required();
  detox_cmd->add_option("--system-id", detox_args.system_id, "row label (default: method)");
  detox_cmd->add_option("--lexicon", detox_args.lexicon_path, "toxic lexicon file");
  detox_cmd->add_option("--mlm", detox_args.mlm_spec, "scripted:PATH or fixed:tok:score,...");
  detox_cmd->add_option("--max-candidates", detox_args.max_candidates, "condbert candidate cap");
  detox_cmd->add_option("--tox-threshold", detox_args.tox_threshold,
                        "condbert candidate toxicity cutoff");
  detox_cmd->add_option("--handle", detox_args.handle_path, "trained handle JSON");
  detox_cmd->add_option("--pivot", detox_args.pivot, "pivot language code");
  detox_cmd->add_option("--translator", detox_args.translator_spec, "identity or file:PATH");
  detox_cmd->add_option("--pivot-lexicon", detox_args.pivot_lexicon_path,
                        "lexicon used in the pivot language");
  detox_cmd->add_option("--seed", detox_args.seed, "recorded in the manifest");

  TrainArgs train_args;
  CLI::App* train_cmd = app.add_subcommand("train", "fine-tune a detox backend");
  train_cmd->add_option("--backend", train_args.backend, "copy or lexicon-delete")->required();
  train_cmd->add_option("--setup", train_args.setup,
                        "monolingual, multilingual or crosslingual");
  train_cmd->add_option("--train", train_args.train_specs, "lang=corpus.tsv (repeatable)")
      ->required();
  train_cmd->add_option("--eval-langs", train_args.eval_langs, "comma-separated eval languages");
  train_cmd->add_option("--lexicon", train_args.lexicon_path, "lexicon for lexicon-delete");
  train_cmd->add_option("--lexicon-language", train_args.lexicon_language, "lexicon language");
  train_cmd->add_option("--equalize-total", train_args.equalize_total,
                        "pooled record budget for two-language training");
  train_cmd->add_option("--out", train_args.out_path, "handle JSON output")->required();
  train_cmd->add_option("--learning-rate", train_args.config.learning_rate, "");
  train_cmd->add_option("--warmup-steps", train_args.config.warmup_steps, "");
  train_cmd->add_option("--batch-size", train_args.config.batch_size, "");
  train_cmd->add_option("--max-iterations", train_args.config.max_iterations, "");
  train_cmd->add_option("--checkpoint-every", train_args.config.checkpoint_every, "");
  train_cmd->add_option("--seed", train_args.config.seed, "");

  EvaluateArgs evaluate_args;
  CLI::App* evaluate_cmd = app.add_subcommand("evaluate", "score a run file");
  evaluate_cmd->add_option("--run", evaluate_args.run_path, "run JSONL")->required();
  evaluate_cmd->add_option("--suite", evaluate_args.suite_spec,
                           "reference or precomputed:PATH");
  evaluate_cmd->add_option("--lexicon", evaluate_args.lexicon_path,
                           "lexicon for the reference suite");
  evaluate_cmd->add_option("--language", evaluate_args.language, "expected run language");
  evaluate_cmd->add_option("--scores-out", evaluate_args.scores_out, "per-sentence scores JSONL");
  evaluate_cmd->add_option("--row-out", evaluate_args.row_out, "report row JSON");
  evaluate_cmd->add_option("--sta-threshold", evaluate_args.sta_threshold, "");
  evaluate_cmd->add_option("--fl-threshold", evaluate_args.fl_threshold, "");
  evaluate_cmd->add_option("--near-copy-threshold", evaluate_args.near_copy_threshold, "");

  ReportArgs report_args;
  CLI::App* report_cmd = app.add_subcommand("report", "render rows into a results table");
  report_cmd->add_option("--format", report_args.format, "tsv, json or markdown");
  report_cmd->add_option("--out", report_args.out_path, "output path (default: stdout)");
  report_cmd->add_option("rows", report_args.row_files, "row JSON files from evaluate")
      ->required();

  std::string diag_run_path;
  double diag_near_threshold = 0.95;
  CLI::App* diag_cmd = app.add_subcommand("diag-copy", "copy-rate diagnostic for a run");
  diag_cmd->add_option("--run", diag_run_path, "run JSONL")->required();
  diag_cmd->add_option("--near-threshold", diag_near_threshold, "near-copy similarity cutoff");

  try {
    app.parse(argc, argv);
    if (detox_cmd->parsed()) return run_detox(detox_args);
    if (train_cmd->parsed()) return run_train(train_args);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate_args);
    if (report_cmd->parsed()) return run_report(report_args);
    if (diag_cmd->parsed()) return run_diag_copy(diag_run_path, diag_near_threshold);
    throw UsageError("no subcommand given");
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const BackendError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ScorerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TranslatorError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
