#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mderank/candidates.hpp"
#include "mderank/corpus.hpp"
#include "mderank/mderank.hpp"

namespace mderank {

enum class PseudoLabelMethod { kTextRank, kYakeLite };

std::string_view to_string(PseudoLabelMethod m);
PseudoLabelMethod parse_pseudo_label_method(std::string_view s);

struct PseudoLabelConfig {
  PseudoLabelMethod method = PseudoLabelMethod::kYakeLite;
  int top_n = 10;
  int window = 2;  // words i and j co-occur when 0 < j - i < window
  double damping = 0.85;
  int max_iter = 100;
  double tol = 1e-6;
};

/// Throws PreconditionError when top_n < 1, window < 2 or damping is
/// outside (0, 1).
void validate(const PseudoLabelConfig& cfg);

/// Undirected, unweighted word graph. Nodes are kept sorted and adjacency
/// lists sorted and duplicate free, so the graph does not depend on the
/// order in which nodes or edges were added.
class WordGraph {
 public:
  WordGraph(std::vector<std::string> nodes, const std::vector<std::pair<std::string, std::string>>& edges);

  [[nodiscard]] const std::vector<std::string>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<std::vector<std::size_t>>& adjacency() const { return adjacency_; }
  [[nodiscard]] std::size_t index_of(std::string_view node) const;  // size() when absent
  [[nodiscard]] std::size_t size() const { return nodes_.size(); }

 private:
  std::vector<std::string> nodes_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

/// Co-occurrence graph over the lowercased NN*/JJ words of `doc`.
WordGraph build_cooccurrence_graph(const Document& doc, int window);

/// PageRank with uniform teleport (1 - damping) / N, iterated until the L1
/// change drops below `tol` or `max_iter` sweeps. Isolated nodes keep only
/// their teleport mass. The result is rescaled to sum to 1.
std::vector<double> pagerank(const WordGraph& graph, double damping, int max_iter, double tol);

/// TextRank: candidate score = sum of its words' PageRank; descending.
RankedKeyphrases textrank_score(const Document& doc, const std::vector<Candidate>& cands,
                                const PseudoLabelConfig& cfg);

/// s(w) = first_index(w) / n / (1 + ln(1 + tf(w))) over lowercased words.
std::map<std::string, double> yake_lite_word_scores(const Document& doc);

/// yake_lite: candidate score = mean word score; lower is better, so the
/// ranking is ascending.
RankedKeyphrases yake_lite_score(const Document& doc, const std::vector<Candidate>& cands,
                                 const PseudoLabelConfig& cfg);

RankedKeyphrases pseudo_label_rank(const Document& doc, const std::vector<Candidate>& cands,
                                   const PseudoLabelConfig& cfg);

/// The top_n distinct candidate phrases of a pseudo-label ranking, best first.
std::vector<std::string> pseudo_keyphrases(const RankedKeyphrases& ranked, std::size_t top_n);

}  // namespace mderank
