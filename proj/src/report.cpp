#include <algorithm>
#include <fstream>
#include <sstream>

#include "riskmcdm/canonical.hpp"
#include "riskmcdm/error.hpp"
#include "riskmcdm/pipeline.hpp"

namespace riskmcdm::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json vector_json(const ahp::WeightVector& w) {
  json j = json::object();
  for (std::size_t k = 0; k < w.size(); ++k) j[w.item_ids()[k]] = canonical(w[k]);
  return j;
}

// 1-based position of each id when sorted by weight descending (ties by
// canonical symbol order).
std::map<std::string, int> ranks_of(const ahp::GlobalWeights& weights) {
  const auto ordered = top_risk_criteria(weights, weights.size());
  std::map<std::string, int> out;
  for (std::size_t k = 0; k < ordered.size(); ++k) out[ordered[k].id] = static_cast<int>(k + 1);
  return out;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

void write_file(const fs::path& path, const std::string& content, std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
  out << content;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
  written.push_back(path);
}

std::string matrix_csv(const std::vector<std::string>& rows, const std::vector<std::string>& cols, const Matrix& m) {
  std::ostringstream out;
  saw::write_matrix_csv(out, rows, cols, m);
  return out.str();
}

}  // namespace

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

json report_json(const RiskReport& r, const std::map<std::string, std::string>& artifacts) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["entry_point"] = std::string(to_string(r.entry));
  doc["normalization"] = std::string(saw::to_string(r.normalization));
  doc["imputation"] = std::string(ratios::to_string(r.imputation));

  json weights;
  weights["main"] = vector_json(r.local.at(std::string(kGoalNodeId)));
  weights["local"] = json::object();
  for (const auto& [node, w] : r.local) {
    if (node != kGoalNodeId) weights["local"][node] = vector_json(w);
  }
  weights["global"] = json::object();
  for (const auto& [id, w] : r.global) weights["global"][id] = canonical(w);
  doc["weights"] = std::move(weights);

  doc["consistency"] = json::array();
  for (const auto& c : r.consistency) {
    doc["consistency"].push_back(json{{"expert", c.expert},
                                      {"node_id", c.node_id},
                                      {"lambda_max", canonical(c.report.lambda_max)},
                                      {"ci", canonical(c.report.ci)},
                                      {"ri", canonical(c.report.ri)},
                                      {"cr", canonical(c.report.cr)},
                                      {"verdict", std::string(ahp::to_string(c.report.verdict))}});
  }
  doc["warnings"] = r.warnings;

  doc["score_table"] = json::array();
  for (std::size_t i = 0; i < r.scores.alternative_ids.size(); ++i) {
    doc["score_table"].push_back(json{{"alternative", r.scores.alternative_ids[i]},
                                      {"V", canonical(r.scores.scores[i])},
                                      {"A", canonical(r.scores.shares[i])},
                                      {"rank", r.scores.ranks[i]}});
  }
  doc["most_risky"] = r.most_risky;
  doc["least_risky"] = r.least_risky;
  doc["top_criteria"] = json::array();
  for (const auto& c : r.top_criteria) doc["top_criteria"].push_back(json{{"id", c.id}, {"weight", canonical(c.weight)}});
  doc["imputation_flags"] = json::array();
  for (const auto& [alt, crit] : r.imputation_flags) {
    doc["imputation_flags"].push_back(json{{"alternative", alt}, {"criterion", crit}});
  }
  doc["input_digests"] = r.input_digests;
  doc["artifacts"] = artifacts;
  return doc;
}

std::string weights_csv(const RiskReport& r) {
  const auto ranks = ranks_of(r.global);
  const auto& main = r.local.at(std::string(kGoalNodeId));
  std::ostringstream out;
  out << "rank,aws1,sub_rank,aws2,criterion,aws3,main\n";
  for (const auto& m : r.hierarchy.main_criteria) {
    const double parent = main.at(m.id);
    if (m.is_leaf()) {
      out << ranks.at(m.id) << ',' << format_canonical(parent) << ",1,1," << m.id << ','
          << format_canonical(parent) << ',' << m.id << '\n';
      continue;
    }
    const auto& local = r.local.at(m.id);
    ahp::GlobalWeights within;
    for (std::size_t k = 0; k < local.size(); ++k) within[local.item_ids()[k]] = local[k];
    const auto sub = ranks_of(within);
    for (const auto& c : m.children) {
      out << ranks.at(c.id) << ',' << format_canonical(r.global.at(c.id)) << ',' << sub.at(c.id) << ','
          << format_canonical(local.at(c.id)) << ',' << c.id << ',' << format_canonical(parent) << ',' << m.id
          << '\n';
    }
  }
  return out.str();
}

std::string scores_csv(const RiskReport& r) {
  std::ostringstream out;
  out << "alternative,V,A,rank\n";
  for (std::size_t i = 0; i < r.scores.alternative_ids.size(); ++i) {
    out << r.scores.alternative_ids[i] << ',' << format_canonical(r.scores.scores[i]) << ','
        << format_canonical(r.scores.shares[i]) << ',' << r.scores.ranks[i] << '\n';
  }
  return out.str();
}

std::string bar_chart_svg(const std::string& title, const std::vector<Bar>& bars) {
  constexpr int kBarWidth = 28;
  constexpr int kGap = 10;
  constexpr int kPlotHeight = 240;
  constexpr int kLeft = 50;
  constexpr int kTop = 40;
  const int width = kLeft + static_cast<int>(bars.size()) * (kBarWidth + kGap) + 20;
  const int height = kTop + kPlotHeight + 70;
  double peak = 0.0;
  for (const auto& b : bars) peak = std::max(peak, b.value);
  if (peak <= 0.0) peak = 1.0;

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "  <title>" << xml_escape(title) << "</title>\n";
  out << "  <text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"14\">" << xml_escape(title) << "</text>\n";
  out << "  <line x1=\"" << kLeft << "\" y1=\"" << kTop + kPlotHeight << "\" x2=\"" << width - 10 << "\" y2=\""
      << kTop + kPlotHeight << "\" stroke=\"#333\"/>\n";
  for (std::size_t k = 0; k < bars.size(); ++k) {
    const int x = kLeft + static_cast<int>(k) * (kBarWidth + kGap) + kGap / 2;
    const int h = static_cast<int>(bars[k].value / peak * kPlotHeight + 0.5);
    const int y = kTop + kPlotHeight - h;
    out << "  <rect class=\"bar\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << kBarWidth << "\" height=\"" << h
        << "\" fill=\"#4a7ab5\" data-label=\"" << xml_escape(bars[k].label) << "\" data-value=\""
        << format_canonical(bars[k].value) << "\"/>\n";
    char pct[32];
    std::snprintf(pct, sizeof pct, "%.1f%%", bars[k].value * 100.0);
    out << "  <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << y - 4
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"9\">" << pct << "</text>\n";
    out << "  <text x=\"" << x + kBarWidth / 2 << "\" y=\"" << kTop + kPlotHeight + 14
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\" transform=\"rotate(-60 "
        << x + kBarWidth / 2 << ' ' << kTop + kPlotHeight + 14 << ")\">" << xml_escape(bars[k].label)
        << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

std::vector<fs::path> emit_report(const RiskReport& r, const fs::path& dir, const std::set<std::string>& formats) {
  std::vector<fs::path> written;
  if (formats.empty()) return written;
  for (const auto& f : formats) {
    if (f != "json" && f != "csv" && f != "svg") throw Error(ErrorCode::ValidationError, "unknown format '" + f + "'");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Error(ErrorCode::IoError, "cannot create output directory '" + dir.string() + "'");

  std::map<std::string, std::string> artifacts;
  if (formats.contains("csv")) {
    artifacts["weights_table"] = "weights.csv";
    artifacts["score_table"] = "scores.csv";
    if (r.decision_matrix) artifacts["decision_matrix"] = "decision_matrix.csv";
    if (r.normalized) artifacts["normalized_matrix"] = "normalized_matrix.csv";
    artifacts["weighted_matrix"] = "weighted_matrix.csv";
  }
  if (formats.contains("svg")) {
    artifacts["main_weights_chart"] = "main_weights.svg";
    artifacts["global_weights_chart"] = "global_weights.svg";
    artifacts["alternative_weights_chart"] = "alternative_weights.svg";
  }

  if (formats.contains("json")) write_file(dir / "report.json", canonical_dump(report_json(r, artifacts)), written);
  if (formats.contains("csv")) {
    write_file(dir / "weights.csv", weights_csv(r), written);
    write_file(dir / "scores.csv", scores_csv(r), written);
    if (r.decision_matrix) {
      write_file(dir / "decision_matrix.csv",
                 matrix_csv(r.decision_matrix->alternative_ids, r.decision_matrix->criterion_ids,
                            r.decision_matrix->values),
                 written);
    }
    if (r.normalized) {
      write_file(dir / "normalized_matrix.csv",
                 matrix_csv(r.normalized->alternative_ids, r.normalized->criterion_ids, r.normalized->r), written);
    }
    write_file(dir / "weighted_matrix.csv",
               matrix_csv(r.weighted.alternative_ids, r.weighted.criterion_ids, r.weighted.v), written);
  }
  if (formats.contains("svg")) {
    const auto& main = r.local.at(std::string(kGoalNodeId));
    std::vector<Bar> bars;
    for (std::size_t k = 0; k < main.size(); ++k) bars.push_back({main.item_ids()[k], main[k]});
    write_file(dir / "main_weights.svg", bar_chart_svg("Average weights of the main criteria", bars), written);
    bars.clear();
    for (const auto& id : r.hierarchy.leaf_ids()) bars.push_back({id, r.global.at(id)});
    write_file(dir / "global_weights.svg", bar_chart_svg("Global criterion weights", bars), written);
    bars.clear();
    for (std::size_t i = 0; i < r.scores.alternative_ids.size(); ++i) {
      bars.push_back({r.scores.alternative_ids[i], r.scores.shares[i]});
    }
    write_file(dir / "alternative_weights.svg", bar_chart_svg("Weights of alternatives", bars), written);
  }
  return written;
}

}  // namespace riskmcdm::pipeline
