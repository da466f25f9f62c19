#include "mderank/evalbench.hpp"

#include <algorithm>
#include <istream>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "mderank/candidates.hpp"
#include "mderank/error.hpp"
#include "mderank/parallel.hpp"
#include "mderank/text.hpp"

namespace mderank {

std::vector<std::string> normalize_phrases(const std::vector<std::string>& phrases) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& p : phrases) {
    std::string s = stem_phrase(p);
    if (s.empty()) continue;
    if (seen.insert(s).second) out.push_back(std::move(s));
  }
  return out;
}

PrecisionRecall f1_at_k(const std::vector<std::string>& predicted, const std::vector<std::string>& gold,
                        std::size_t k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  const auto gold_norm = normalize_phrases(gold);
  if (gold_norm.empty()) throw PreconditionError("gold keyphrase list is empty");
  auto pred = normalize_phrases(predicted);
  if (pred.size() > k) pred.resize(k);
  const std::unordered_set<std::string> gold_set(gold_norm.begin(), gold_norm.end());
  std::size_t matches = 0;
  for (const auto& p : pred) matches += gold_set.count(p);
  PrecisionRecall r;
  if (!pred.empty()) r.precision = static_cast<double>(matches) / static_cast<double>(pred.size());
  r.recall = static_cast<double>(matches) / static_cast<double>(gold_norm.size());
  if (r.precision + r.recall > 0.0) r.f1 = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

std::optional<double> diversity(const std::vector<std::string>& predicted) {
  std::size_t total = 0;
  std::unordered_set<std::string> distinct;
  for (const auto& p : predicted) {
    for (const auto& w : split_whitespace(to_lower_ascii(p))) {
      ++total;
      distinct.insert(porter_stem(w));
    }
  }
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(distinct.size()) / static_cast<double>(total);
}

std::string phrase_length_bucket(std::size_t words) { return words > 3 ? ">3" : std::to_string(words); }

std::map<std::string, double> recall_by_phrase_length(const std::vector<std::string>& predicted,
                                                      const std::vector<std::string>& gold, std::size_t k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  auto pred = normalize_phrases(predicted);
  if (pred.size() > k) pred.resize(k);
  const std::unordered_set<std::string> pred_set(pred.begin(), pred.end());
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;  // hits, total
  for (const auto& g : normalize_phrases(gold)) {
    auto& c = counts[phrase_length_bucket(split_whitespace(g).size())];
    ++c.second;
    c.first += pred_set.count(g);
  }
  std::map<std::string, double> out;
  for (const auto& [bucket, c] : counts)
    out.emplace(bucket, static_cast<double>(c.first) / static_cast<double>(c.second));
  return out;
}

std::string_view to_string(RankMethod m) {
  switch (m) {
    case RankMethod::kMdeRank:
      return "mderank";
    case RankMethod::kEmbedRank:
      return "embedrank";
    case RankMethod::kTextRank:
      return "textrank";
    case RankMethod::kYakeLite:
      return "yake_lite";
  }
  return "mderank";
}

RankMethod parse_rank_method(std::string_view s) {
  if (s == "mderank") return RankMethod::kMdeRank;
  if (s == "embedrank") return RankMethod::kEmbedRank;
  if (s == "textrank") return RankMethod::kTextRank;
  if (s == "yake_lite" || s == "yake") return RankMethod::kYakeLite;
  throw PreconditionError("unknown method '" + std::string(s) + "'");
}

bool needs_embedder(RankMethod m) { return m == RankMethod::kMdeRank || m == RankMethod::kEmbedRank; }

RankedKeyphrases rank_document(const Document& doc, const MethodSpec& spec, const Embedder* embedder,
                               std::optional<std::size_t> max_words) {
  Document view = max_words ? doc.truncated(*max_words) : doc;
  if (needs_embedder(spec.method)) {
    if (embedder == nullptr) throw PreconditionError(std::string(to_string(spec.method)) + " needs an embedder");
    view = embedder_view(view, *embedder);
    if (view.words.empty()) throw PreconditionError("document " + doc.id + " has no word that fits the encoder");
  }
  const auto cands = extract_candidates(view);
  switch (spec.method) {
    case RankMethod::kMdeRank:
      return mde_rank(view, cands, *embedder, spec.strategy, spec.measure);
    case RankMethod::kEmbedRank:
      return embed_rank(view, cands, *embedder, spec.measure);
    case RankMethod::kTextRank: {
      PseudoLabelConfig cfg = spec.pseudo;
      cfg.method = PseudoLabelMethod::kTextRank;
      return textrank_score(view, cands, cfg);
    }
    case RankMethod::kYakeLite: {
      PseudoLabelConfig cfg = spec.pseudo;
      cfg.method = PseudoLabelMethod::kYakeLite;
      return yake_lite_score(view, cands, cfg);
    }
  }
  return {};
}

namespace {

std::size_t max_k(const BenchmarkConfig& cfg) {
  if (cfg.ks.empty()) throw PreconditionError("no K values to evaluate");
  const int k = *std::max_element(cfg.ks.begin(), cfg.ks.end());
  if (*std::min_element(cfg.ks.begin(), cfg.ks.end()) < 1) throw PreconditionError("every K must be >= 1");
  return static_cast<std::size_t>(k);
}

struct DocumentScore {
  std::map<int, PrecisionRecall> at;
  std::optional<double> diversity;
  std::map<std::string, double> recall_by_pl;
  std::optional<std::string> error;
};

}  // namespace

DatasetMetrics score_predictions(const DatasetSplit& split, const std::vector<DocumentPrediction>& predictions,
                                 const BenchmarkConfig& cfg) {
  const std::size_t div_k = max_k(cfg);
  std::unordered_map<std::string, const DocumentPrediction*> by_id;
  for (const auto& p : predictions) by_id.emplace(p.doc_id, &p);

  const auto scores = parallel_map<DocumentScore>(split.documents.size(), cfg.jobs, [&](std::size_t i) {
    const Document& doc = split.documents[i];
    DocumentScore s;
    try {
      if (!doc.gold_keyphrases) throw PreconditionError("no gold keyphrases");
      static const std::vector<std::string> kNone;
      auto it = by_id.find(doc.id);
      const auto& phrases = it == by_id.end() ? kNone : it->second->phrases;
      for (int k : cfg.ks) s.at[k] = f1_at_k(phrases, *doc.gold_keyphrases, static_cast<std::size_t>(k));
      auto top = normalize_phrases(phrases);
      if (top.size() > div_k) top.resize(div_k);
      s.diversity = diversity(top);
      s.recall_by_pl = recall_by_phrase_length(phrases, *doc.gold_keyphrases, cfg.recall_pl_k);
    } catch (const Error& e) {
      s.error = e.what();
    }
    return s;
  });

  DatasetMetrics m;
  m.documents = split.documents.size();
  std::map<int, double> f1, p, r;
  double div_sum = 0.0;
  std::size_t div_n = 0;
  std::map<std::string, std::pair<double, std::size_t>> pl;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const auto& s = scores[i];
    if (s.error) {
      m.errors.push_back({split.documents[i].id, *s.error});
      continue;
    }
    ++m.evaluated;
    for (const auto& [k, v] : s.at) {
      f1[k] += v.f1;
      p[k] += v.precision;
      r[k] += v.recall;
    }
    if (s.diversity) {
      div_sum += *s.diversity;
      ++div_n;
    }
    for (const auto& [bucket, v] : s.recall_by_pl) {
      pl[bucket].first += v;
      ++pl[bucket].second;
    }
  }
  if (m.evaluated > 0) {
    const double n = static_cast<double>(m.evaluated);
    for (int k : cfg.ks) {
      m.f1_at[k] = 100.0 * f1[k] / n;
      m.precision_at[k] = 100.0 * p[k] / n;
      m.recall_at[k] = 100.0 * r[k] / n;
    }
  }
  if (div_n > 0) m.diversity = div_sum / static_cast<double>(div_n);
  for (const auto& [bucket, v] : pl) m.recall_by_pl[bucket] = 100.0 * v.first / static_cast<double>(v.second);
  return m;
}

std::vector<DocumentPrediction> predict_split(const DatasetSplit& split, const MethodSpec& spec,
                                              const Embedder* embedder, const BenchmarkConfig& cfg,
                                              std::vector<DocumentError>* errors) {
  const std::size_t k = max_k(cfg);
  struct Slot {
    DocumentPrediction prediction;
    std::optional<std::string> error;
  };
  const auto slots = parallel_map<Slot>(split.documents.size(), cfg.jobs, [&](std::size_t i) {
    const Document& doc = split.documents[i];
    Slot s;
    s.prediction.doc_id = doc.id;
    try {
      const auto ranked = rank_document(doc, spec, embedder, cfg.max_words);
      if (!ranked.entries.empty()) s.prediction.phrases = top_k(ranked, k);
    } catch (const Error& e) {
      s.error = e.what();
    }
    return s;
  });
  std::vector<DocumentPrediction> out;
  out.reserve(slots.size());
  for (const auto& s : slots) {
    if (s.error && errors) errors->push_back({s.prediction.doc_id, *s.error});
    out.push_back(s.prediction);
  }
  return out;
}

DatasetMetrics run_benchmark(const DatasetSplit& split, const MethodSpec& spec, const Embedder* embedder,
                             const BenchmarkConfig& cfg) {
  if (!split.fully_labelled()) throw PreconditionError("split " + split.name + " is not fully labelled");
  std::vector<DocumentError> errors;
  const auto predictions = predict_split(split, spec, embedder, cfg, &errors);
  DatasetMetrics m = score_predictions(split, predictions, cfg);
  // Ranking failures are the root cause; drop the scoring echo of the same
  // document and report the ranking error instead.
  std::set<std::string> failed;
  for (const auto& e : errors) failed.insert(e.doc_id);
  std::erase_if(m.errors, [&](const DocumentError& e) { return failed.count(e.doc_id) > 0; });
  m.errors.insert(m.errors.end(), errors.begin(), errors.end());
  return m;
}

void finalize_report(EvalReport& report) {
  report.averages.clear();
  std::map<int, std::pair<double, std::size_t>> sums;
  for (const auto& [name, m] : report.per_dataset)
    for (const auto& [k, v] : m.f1_at) {
      sums[k].first += v;
      ++sums[k].second;
    }
  for (const auto& [k, s] : sums) report.averages[k] = s.first / static_cast<double>(s.second);
}

std::vector<DocumentPrediction> read_predictions(std::istream& in) {
  std::vector<DocumentPrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      DocumentPrediction p;
      p.doc_id = j.at("id").get<std::string>();
      for (const auto& kp : j.at("keyphrases")) {
        p.phrases.push_back(kp.is_object() ? kp.at("phrase").get<std::string>() : kp.get<std::string>());
      }
      out.push_back(std::move(p));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(std::string("bad prediction: ") + e.what() + " at line " + std::to_string(line_no));
    }
  }
  return out;
}

}  // namespace mderank
