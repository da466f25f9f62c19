#include "mderank/triplets.hpp"

#include <algorithm>
#include <istream>
#include <unordered_map>
#include <utility>

#include "json.hpp"

#include "mderank/error.hpp"
#include "mderank/rng.hpp"
#include "mderank/text.hpp"

namespace mderank {

std::string_view to_string(Sampling s) { return s == Sampling::kAbsolute ? "absolute" : "relative"; }

Sampling parse_sampling(std::string_view s) {
  if (s == "absolute") return Sampling::kAbsolute;
  if (s == "relative") return Sampling::kRelative;
  throw PreconditionError("unknown sampling '" + std::string(s) + "'");
}

int default_pseudo_top_n(Sampling s) { return s == Sampling::kAbsolute ? 10 : 20; }

namespace {

void check_options(const TripletOptions& opts) {
  if (opts.n_triplets < 1) throw PreconditionError("n_triplets must be >= 1");
}

std::vector<Occurrence> mask_for(const Candidate& c, bool single_occurrence) {
  if (single_occurrence) return {c.occurrences.front()};
  return c.occurrences;
}

TripletExample make_example(const Document& doc, const Candidate& pos, const Candidate& neg, Sampling sampling,
                             const TripletOptions& opts) {
  TripletExample t;
  t.doc_id = doc.id;
  t.anchor_words = doc.surfaces();
  t.positive_mask = mask_for(pos, opts.single_occurrence);
  t.negative_mask = mask_for(neg, opts.single_occurrence);
  t.positive_phrase = pos.phrase();
  t.negative_phrase = neg.phrase();
  t.sampling = sampling;
  t.theta = opts.theta;
  return t;
}

// Candidates named by `pseudo`, in pseudo order, without repeats.
std::vector<const Candidate*> pseudo_candidates(const std::vector<Candidate>& cands,
                                                const std::vector<std::string>& pseudo) {
  std::unordered_map<std::string, const Candidate*> by_phrase;
  for (const auto& c : cands) by_phrase.emplace(c.phrase(), &c);
  std::vector<const Candidate*> out;
  for (const auto& p : pseudo) {
    auto it = by_phrase.find(p);
    if (it == by_phrase.end()) continue;
    if (std::find(out.begin(), out.end(), it->second) == out.end()) out.push_back(it->second);
  }
  return out;
}

}  // namespace

TripletBatch sample_absolute(const Document& doc, const std::vector<Candidate>& cands,
                             const std::vector<std::string>& pseudo, const TripletOptions& opts) {
  check_options(opts);
  TripletBatch batch;
  const auto positives = pseudo_candidates(cands, pseudo);
  std::vector<const Candidate*> negatives;
  for (const auto& c : cands)
    if (std::find(positives.begin(), positives.end(), &c) == positives.end()) negatives.push_back(&c);
  if (positives.empty()) {
    batch.skip_reason = "no pseudo keyphrase among the candidates";
    return batch;
  }
  if (negatives.empty()) {
    batch.skip_reason = "every candidate is a pseudo keyphrase";
    return batch;
  }
  SplitMix64 rng = document_rng(opts.seed, doc.id);
  for (int i = 0; i < opts.n_triplets; ++i) {
    const Candidate& pos = *positives[rng.below(positives.size())];
    const Candidate& neg = *negatives[rng.below(negatives.size())];
    batch.triplets.push_back(make_example(doc, pos, neg, Sampling::kAbsolute, opts));
  }
  return batch;
}

TripletBatch sample_relative(const Document& doc, const std::vector<Candidate>& cands,
                             const std::vector<std::string>& pseudo, const TripletOptions& opts) {
  check_options(opts);
  TripletBatch batch;
  const auto ranked = pseudo_candidates(cands, pseudo);
  if (ranked.size() < 2) {
    batch.skip_reason = "fewer than two pseudo keyphrases among the candidates";
    return batch;
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < ranked.size(); ++i)
    for (std::size_t j = i + 1; j < ranked.size(); ++j) pairs.emplace_back(i, j);
  const std::size_t n = std::min(pairs.size(), static_cast<std::size_t>(opts.n_triplets));
  SplitMix64 rng = document_rng(opts.seed, doc.id);
  // Partial Fisher-Yates: the first n slots become a uniform sample without
  // replacement.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(pairs.size() - i));
    std::swap(pairs[i], pairs[j]);
    const auto [better, worse] = pairs[i];
    batch.triplets.push_back(make_example(doc, *ranked[better], *ranked[worse], Sampling::kRelative, opts));
  }
  return batch;
}

TripletBatch make_triplets(const Document& doc, const TripletRunConfig& cfg) {
  PseudoLabelConfig theta = cfg.theta;
  theta.top_n = cfg.pseudo_top_n.value_or(default_pseudo_top_n(cfg.sampling));
  TripletOptions opts = cfg.options;
  opts.theta = std::string(to_string(theta.method));
  const auto cands = extract_candidates(doc);
  const auto pseudo =
      pseudo_keyphrases(pseudo_label_rank(doc, cands, theta), static_cast<std::size_t>(theta.top_n));
  return cfg.sampling == Sampling::kAbsolute ? sample_absolute(doc, cands, pseudo, opts)
                                             : sample_relative(doc, cands, pseudo, opts);
}

void validate_triplet(const TripletExample& t) {
  auto check = [&](const std::vector<Occurrence>& mask, const std::string& phrase, std::string_view side) {
    if (mask.empty()) throw FormatError(std::string(side) + " mask of triplet for " + t.doc_id + " is empty");
    std::size_t prev_end = 0;
    for (const auto& occ : mask) {
      if (occ.start_word >= occ.end_word || occ.end_word > t.anchor_words.size() || occ.start_word < prev_end)
        throw FormatError(std::string(side) + " mask of triplet for " + t.doc_id + " has an invalid range");
      prev_end = occ.end_word;
      std::vector<std::string> words;
      for (std::size_t w = occ.start_word; w < occ.end_word; ++w) words.push_back(to_lower_ascii(t.anchor_words[w]));
      if (join(words, " ") != phrase)
        throw FormatError(std::string(side) + " mask of triplet for " + t.doc_id + " does not spell '" + phrase + "'");
    }
  };
  check(t.positive_mask, t.positive_phrase, "positive");
  check(t.negative_mask, t.negative_phrase, "negative");
  if (t.positive_phrase == t.negative_phrase)
    throw FormatError("triplet for " + t.doc_id + " uses the same phrase twice");
}

namespace {

nlohmann::json mask_json(const std::vector<Occurrence>& mask) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& occ : mask) out.push_back({occ.start_word, occ.end_word});
  return out;
}

std::vector<Occurrence> mask_from_json(const nlohmann::json& j) {
  std::vector<Occurrence> out;
  for (const auto& span : j) {
    if (!span.is_array() || span.size() != 2) throw FormatError("mask span must be [start, end]");
    out.push_back({span[0].get<std::size_t>(), span[1].get<std::size_t>()});
  }
  return out;
}

}  // namespace

std::string to_jsonl_line(const TripletExample& t) {
  nlohmann::ordered_json j;
  j["doc_id"] = t.doc_id;
  j["words"] = t.anchor_words;
  j["pos_mask"] = mask_json(t.positive_mask);
  j["neg_mask"] = mask_json(t.negative_mask);
  j["pos_phrase"] = t.positive_phrase;
  j["neg_phrase"] = t.negative_phrase;
  j["sampling"] = to_string(t.sampling);
  j["theta"] = t.theta;
  return j.dump();
}

TripletExample parse_triplet_line(std::string_view line) {
  TripletExample t;
  try {
    const auto j = nlohmann::json::parse(line);
    t.doc_id = j.at("doc_id").get<std::string>();
    t.anchor_words = j.at("words").get<std::vector<std::string>>();
    t.positive_mask = mask_from_json(j.at("pos_mask"));
    t.negative_mask = mask_from_json(j.at("neg_mask"));
    t.positive_phrase = j.at("pos_phrase").get<std::string>();
    t.negative_phrase = j.at("neg_phrase").get<std::string>();
    t.sampling = parse_sampling(j.at("sampling").get<std::string>());
    t.theta = j.at("theta").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad triplet: ") + e.what());
  } catch (const PreconditionError& e) {
    throw FormatError(std::string("bad triplet: ") + e.what());
  }
  validate_triplet(t);
  return t;
}

std::vector<TripletExample> read_triplets(std::istream& in) {
  std::vector<TripletExample> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(parse_triplet_line(line));
    } catch (const FormatError& e) {
      throw FormatError(std::string(e.what()) + " at line " + std::to_string(line_no));
    }
  }
  return out;
}

}  // namespace mderank
