#include "detox/metrics.hpp"

#include <fstream>
#include <set>
#include <utility>

#include "detox/text.hpp"
#include "json.hpp"

namespace detox {

SentenceScores SentenceScores::from_components(double sta, double sim, double fl) {
  SentenceScores scores;
  scores.sta = clamp01(sta);
  scores.sim = clamp01(sim);
  scores.fl = clamp01(fl);
  scores.joint = scores.sta * scores.sim * scores.fl;
  return scores;
}

double score_sta_english(const std::string& generated, ScorerSuite& suite, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw UsageError("sta threshold must lie in [0,1]");
  }
  return suite.toxicity(generated) > threshold ? 0.0 : 1.0;
}

double score_sta_russian(const std::string& generated, ScorerSuite& suite) {
  return clamp01(1.0 - suite.toxicity(generated));
}

double score_sim(const std::string& source, const std::string& generated, ScorerSuite& suite) {
  return clamp01(suite.similarity(source, generated));
}

double score_fl_english(const std::string& generated, ScorerSuite& suite, double threshold) {
  if (threshold < 0.0 || threshold > 1.0) {
    throw UsageError("fl threshold must lie in [0,1]");
  }
  return suite.fluency_acceptability(generated) >= threshold ? 1.0 : 0.0;
}

double score_fl_russian(const std::string& source, const std::string& generated,
                        ScorerSuite& suite) {
  const double excess = suite.corruption(generated) - suite.corruption(source);
  return clamp01(1.0 - (excess > 0.0 ? excess : 0.0));
}

double compute_joint(const std::vector<SentenceScores>& scores) {
  if (scores.empty()) {
    throw UsageError("joint metric is undefined for an empty score list");
  }
  double sum = 0.0;
  for (const SentenceScores& s : scores) sum += s.joint;
  return sum / static_cast<double>(scores.size());
}

AggregateScores aggregate(const std::vector<SentenceScores>& scores) {
  AggregateScores out;
  out.joint = compute_joint(scores);
  for (const SentenceScores& s : scores) {
    out.sta += s.sta;
    out.sim += s.sim;
    out.fl += s.fl;
  }
  const double n = static_cast<double>(scores.size());
  out.sta /= n;
  out.sim /= n;
  out.fl /= n;
  return out;
}

namespace {

std::set<std::string> core_set(const std::string& text) {
  std::set<std::string> cores;
  for (const Token& token : tokenize(text)) {
    if (!token.core.empty()) cores.insert(to_lower(token.core));
  }
  return cores;
}

bool balanced_punctuation(const std::string& text) {
  std::vector<char> stack;
  std::size_t quotes = 0;
  for (char c : text) {
    switch (c) {
      case '(':
      case '[':
      case '{':
        stack.push_back(c);
        break;
      case ')':
        if (stack.empty() || stack.back() != '(') return false;
        stack.pop_back();
        break;
      case ']':
        if (stack.empty() || stack.back() != '[') return false;
        stack.pop_back();
        break;
      case '}':
        if (stack.empty() || stack.back() != '{') return false;
        stack.pop_back();
        break;
      case '"':
        ++quotes;
        break;
      default:
        break;
    }
  }
  return stack.empty() && quotes % 2 == 0;
}

}  // namespace

ReferenceScorerSuite::ReferenceScorerSuite(ToxicLexicon lexicon) : lexicon_(std::move(lexicon)) {}

SuiteInfo ReferenceScorerSuite::info() const {
  return {lexicon_.language(), "reference-lexicon-ratio", "reference-token-jaccard",
          "reference-balance-check"};
}

double ReferenceScorerSuite::toxicity(const std::string& text) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) return 0.0;
  std::size_t matched = 0;
  for (const Token& token : tokens) {
    if (lexicon_.matches_token(token.core)) ++matched;
  }
  return static_cast<double>(matched) / static_cast<double>(tokens.size());
}

double ReferenceScorerSuite::similarity(const std::string& source, const std::string& generated) {
  const std::set<std::string> a = core_set(source);
  const std::set<std::string> b = core_set(generated);
  if (a.empty() && b.empty()) return 1.0;
  std::size_t intersection = 0;
  for (const std::string& word : a) {
    if (b.count(word)) ++intersection;
  }
  const std::size_t unions = a.size() + b.size() - intersection;
  return static_cast<double>(intersection) / static_cast<double>(unions);
}

double ReferenceScorerSuite::fluency_acceptability(const std::string& text) {
  if (tokenize(text).empty()) return 0.3;
  return balanced_punctuation(text) ? 1.0 : 0.3;
}

double ReferenceScorerSuite::corruption(const std::string& text) {
  return 1.0 - fluency_acceptability(text);
}

std::unique_ptr<ScorerSuite> reference_scorer_suite(ToxicLexicon lexicon) {
  return std::make_unique<ReferenceScorerSuite>(std::move(lexicon));
}

namespace {

double lookup(const std::map<std::string, double>& table, const std::string& text,
              const char* kind) {
  const auto it = table.find(text);
  if (it == table.end()) {
    throw ScorerError(std::string("precomputed suite has no ") + kind + " score for: " + text);
  }
  return it->second;
}

}  // namespace

PrecomputedScorerSuite PrecomputedScorerSuite::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open precomputed suite: " + path.string());
  }
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("precomputed suite " + path.string() + ": " + e.what());
  }

  PrecomputedScorerSuite suite;
  try {
    suite.info_.language = LanguageTag(doc.at("language").get<std::string>());
    const auto& models = doc.at("models");
    suite.info_.toxicity_model = models.at("toxicity").get<std::string>();
    suite.info_.similarity_model = models.at("similarity").get<std::string>();
    suite.info_.fluency_model = models.at("fluency").get<std::string>();
    for (const auto& [text, value] : doc.at("toxicity").items()) {
      suite.toxicity_[text] = value.get<double>();
    }
    for (const auto& entry : doc.at("similarity")) {
      suite.similarity_[{entry.at("source").get<std::string>(),
                         entry.at("generated").get<std::string>()}] =
          entry.at("value").get<double>();
    }
    for (const auto& [text, value] : doc.at("fluency_acceptability").items()) {
      suite.fluency_[text] = value.get<double>();
    }
    for (const auto& [text, value] : doc.at("corruption").items()) {
      suite.corruption_[text] = value.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("precomputed suite " + path.string() + ": " + e.what());
  }
  return suite;
}

double PrecomputedScorerSuite::toxicity(const std::string& text) {
  return lookup(toxicity_, text, "toxicity");
}

double PrecomputedScorerSuite::similarity(const std::string& source, const std::string& generated) {
  const auto it = similarity_.find({source, generated});
  if (it == similarity_.end()) {
    throw ScorerError("precomputed suite has no similarity score for: " + source + " / " +
                      generated);
  }
  return it->second;
}

double PrecomputedScorerSuite::fluency_acceptability(const std::string& text) {
  return lookup(fluency_, text, "fluency");
}

double PrecomputedScorerSuite::corruption(const std::string& text) {
  return lookup(corruption_, text, "corruption");
}

}  // namespace detox
