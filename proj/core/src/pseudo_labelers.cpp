#include "mderank/pseudo_labelers.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mderank/error.hpp"
#include "mderank/text.hpp"

namespace mderank {

std::string_view to_string(PseudoLabelMethod m) { return m == PseudoLabelMethod::kTextRank ? "textrank" : "yake_lite"; }

PseudoLabelMethod parse_pseudo_label_method(std::string_view s) {
  if (s == "textrank") return PseudoLabelMethod::kTextRank;
  if (s == "yake_lite" || s == "yake") return PseudoLabelMethod::kYakeLite;
  throw PreconditionError("unknown pseudo-label method '" + std::string(s) + "'");
}

void validate(const PseudoLabelConfig& cfg) {
  if (cfg.top_n < 1) throw PreconditionError("top_n must be >= 1");
  if (cfg.window < 2) throw PreconditionError("window must be >= 2");
  if (!(cfg.damping > 0.0 && cfg.damping < 1.0)) throw PreconditionError("damping must lie in (0, 1)");
  if (cfg.max_iter < 1) throw PreconditionError("max_iter must be >= 1");
}

WordGraph::WordGraph(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges)
    : nodes_(std::move(nodes)) {
  for (const auto& [a, b] : edges) {
    nodes_.push_back(a);
    nodes_.push_back(b);
  }
  std::sort(nodes_.begin(), nodes_.end());
  nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
  adjacency_.resize(nodes_.size());
  for (const auto& [a, b] : edges) {
    const std::size_t ia = index_of(a);
    const std::size_t ib = index_of(b);
    if (ia == ib) continue;
    adjacency_[ia].push_back(ib);
    adjacency_[ib].push_back(ia);
  }
  for (auto& adj : adjacency_) {
    std::sort(adj.begin(), adj.end());
    adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
  }
}

std::size_t WordGraph::index_of(std::string_view node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node);
  if (it == nodes_.end() || *it != node) return nodes_.size();
  return static_cast<std::size_t>(it - nodes_.begin());
}

WordGraph build_cooccurrence_graph(const Document& doc, int window) {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  const std::size_t n = doc.words.size();
  std::vector<std::string> lowered(n);
  std::vector<bool> nominal(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    lowered[i] = to_lower_ascii(doc.words[i].surface);
    nominal[i] = is_noun_tag(doc.words[i].pos_tag) || doc.words[i].pos_tag == "JJ";
    if (nominal[i]) nodes.push_back(lowered[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!nominal[i]) continue;
    for (std::size_t j = i + 1; j < n && j - i < static_cast<std::size_t>(window); ++j)
      if (nominal[j] && lowered[i] != lowered[j]) edges.emplace_back(lowered[i], lowered[j]);
  }
  return WordGraph(std::move(nodes), edges);
}

std::vector<double> pagerank(const WordGraph& graph, double damping, int max_iter, double tol) {
  const std::size_t n = graph.size();
  if (n == 0) return {};
  const auto& adj = graph.adjacency();
  const double teleport = (1.0 - damping) / static_cast<double>(n);
  std::vector<double> rank(n, 1.0 / static_cast<double>(n));
  std::vector<double> next(n);
  for (int iter = 0; iter < max_iter; ++iter) {
    double change = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      double incoming = 0.0;
      for (std::size_t u : adj[v]) incoming += rank[u] / static_cast<double>(adj[u].size());
      next[v] = teleport + damping * incoming;
      change += std::abs(next[v] - rank[v]);
    }
    rank.swap(next);
    if (change < tol) break;
  }
  double total = 0.0;
  for (double r : rank) total += r;
  for (double& r : rank) r /= total;
  return rank;
}

RankedKeyphrases textrank_score(const Document& doc, const std::vector<Candidate>& cands,
                                const PseudoLabelConfig& cfg) {
  validate(cfg);
  RankedKeyphrases out;
  out.method = "textrank";
  out.order = ScoreOrder::kDescending;
  const WordGraph graph = build_cooccurrence_graph(doc, cfg.window);
  if (graph.size() == 0) return out;
  const std::vector<double> rank = pagerank(graph, cfg.damping, cfg.max_iter, cfg.tol);
  for (const auto& c : cands) {
    double score = 0.0;
    for (const auto& w : c.phrase_words) {
      const std::size_t idx = graph.index_of(w);
      if (idx < graph.size()) score += rank[idx];
    }
    out.entries.push_back({c, score});
  }
  sort_ranked(out.entries, out.order);
  return out;
}

std::map<std::string, double> yake_lite_word_scores(const Document& doc) {
  const double n = static_cast<double>(doc.words.size());
  std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> stats;  // first index, tf
  for (std::size_t i = 0; i < doc.words.size(); ++i) {
    auto [it, inserted] = stats.try_emplace(to_lower_ascii(doc.words[i].surface), i, 0);
    ++it->second.second;
  }
  std::map<std::string, double> scores;
  for (const auto& [word, st] : stats) {
    const double rel_pos = static_cast<double>(st.first) / n;
    scores.emplace(word, rel_pos / (1.0 + std::log(1.0 + static_cast<double>(st.second))));
  }
  return scores;
}

RankedKeyphrases yake_lite_score(const Document& doc, const std::vector<Candidate>& cands,
                                 const PseudoLabelConfig& cfg) {
  validate(cfg);
  RankedKeyphrases out;
  out.method = "yake_lite";
  out.order = ScoreOrder::kAscending;
  if (doc.words.empty()) return out;
  const auto scores = yake_lite_word_scores(doc);
  for (const auto& c : cands) {
    double sum = 0.0;
    for (const auto& w : c.phrase_words) sum += scores.at(w);
    out.entries.push_back({c, sum / static_cast<double>(c.phrase_words.size())});
  }
  sort_ranked(out.entries, out.order);
  return out;
}

RankedKeyphrases pseudo_label_rank(const Document& doc, const std::vector<Candidate>& cands,
                                   const PseudoLabelConfig& cfg) {
  return cfg.method == PseudoLabelMethod::kTextRank ? textrank_score(doc, cands, cfg)
                                                    : yake_lite_score(doc, cands, cfg);
}

std::vector<std::string> pseudo_keyphrases(const RankedKeyphrases& ranked, std::size_t top_n) {
  std::vector<std::string> out;
  for (const auto& e : ranked.entries) {
    if (out.size() >= top_n) break;
    out.push_back(e.candidate.phrase());
  }
  return out;
}

}  // namespace mderank
