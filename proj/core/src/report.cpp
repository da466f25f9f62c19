#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mderank/evalbench.hpp"

namespace mderank {

namespace {

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string k_label(int k) { return "F1@" + std::to_string(k); }

nlohmann::ordered_json k_map(const std::map<int, double>& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m) j[std::to_string(k)] = v;
  return j;
}

std::set<int> all_ks(const EvalReport& report) {
  std::set<int> ks;
  for (const auto& [name, m] : report.per_dataset)
    for (const auto& [k, v] : m.f1_at) ks.insert(k);
  return ks;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["config"] = report.config;
  nlohmann::ordered_json datasets = nlohmann::ordered_json::object();
  for (const auto& [name, m] : report.per_dataset) {
    nlohmann::ordered_json d;
    d["documents"] = m.documents;
    d["evaluated"] = m.evaluated;
    d["f1_at"] = k_map(m.f1_at);
    d["precision_at"] = k_map(m.precision_at);
    d["recall_at"] = k_map(m.recall_at);
    d["diversity"] = m.diversity ? nlohmann::ordered_json(*m.diversity) : nlohmann::ordered_json(nullptr);
    d["recall_by_pl"] = m.recall_by_pl;
    nlohmann::ordered_json errors = nlohmann::ordered_json::array();
    for (const auto& e : m.errors) errors.push_back({{"id", e.doc_id}, {"error", e.message}});
    d["errors"] = errors;
    datasets[name] = d;
  }
  j["per_dataset"] = datasets;
  j["averages"] = k_map(report.averages);
  return j.dump(2) + "\n";
}

std::string report_to_table(const EvalReport& report) {
  const auto ks = all_ks(report);
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"dataset"};
  for (int k : ks) header.push_back(k_label(k));
  header.push_back("diversity");
  header.push_back("docs");
  rows.push_back(header);
  for (const auto& [name, m] : report.per_dataset) {
    std::vector<std::string> row{name};
    for (int k : ks) row.push_back(m.f1_at.count(k) ? fixed2(m.f1_at.at(k)) : "-");
    row.push_back(m.diversity ? fixed2(*m.diversity) : "-");
    row.push_back(std::to_string(m.evaluated) + "/" + std::to_string(m.documents));
    rows.push_back(row);
  }
  std::vector<std::string> avg{"AVG"};
  for (int k : ks) avg.push_back(report.averages.count(k) ? fixed2(report.averages.at(k)) : "-");
  avg.push_back("");
  avg.push_back("");
  rows.push_back(avg);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      const auto& cell = rows[r][c];
      const std::string pad(width[c] - cell.size(), ' ');
      line += c == 0 ? cell + pad : "  " + pad + cell;  // numbers right-aligned
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out << line << '\n';
    if (r == 0 || r + 2 == rows.size()) {
      std::size_t total = 0;
      for (std::size_t c = 0; c < width.size(); ++c) total += width[c] + (c == 0 ? 0 : 2);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

std::string report_to_csv(const EvalReport& report) {
  std::ostringstream out;
  out << "dataset,metric,key,value\n";
  auto emit = [&](const std::string& ds, const char* metric, const std::string& key, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    out << ds << ',' << metric << ',' << key << ',' << buf << '\n';
  };
  for (const auto& [name, m] : report.per_dataset) {
    for (const auto& [k, v] : m.f1_at) emit(name, "f1", std::to_string(k), v);
    for (const auto& [k, v] : m.precision_at) emit(name, "precision", std::to_string(k), v);
    for (const auto& [k, v] : m.recall_at) emit(name, "recall", std::to_string(k), v);
    if (m.diversity) emit(name, "diversity", "", *m.diversity);
    for (const auto& [b, v] : m.recall_by_pl) emit(name, "recall_by_pl", b, v);
  }
  for (const auto& [k, v] : report.averages) emit("AVG", "f1", std::to_string(k), v);
  return out.str();
}

}  // namespace mderank
