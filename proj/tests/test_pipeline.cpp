#include <doctest.h>

#include <algorithm>
#include <functional>
#include <regex>

#include "riskmcdm/canonical.hpp"
#include "riskmcdm/error.hpp"
#include "riskmcdm/pipeline.hpp"
#include "riskmcdm/questionnaire.hpp"
#include "support.hpp"

using namespace riskmcdm;
using namespace riskmcdm::pipeline;
using json = nlohmann::json;
using testsupport::TempDir;

namespace {

const char* kHierarchy = R"({
  "goal": "synthetic",
  "criteria": [
    {"id": "M1", "label": "m1", "children": [
      {"id": "CSR1", "label": "debt to equity", "direction": "cost", "ratio": "CSR1"},
      {"id": "LR1", "label": "current ratio", "direction": "benefit", "ratio": "LR1"}]},
    {"id": "M2", "label": "m2", "children": [
      {"id": "LR3", "label": "cash ratio", "direction": "benefit", "ratio": "LR3"},
      {"id": "IR2", "label": "gross margin", "direction": "benefit", "ratio": "IR2"},
      {"id": "CFR2", "label": "operating cash to sales", "direction": "benefit", "ratio": "CFR2"}]}
  ],
  "alternatives": ["Y1", "Y2", "Y3"]
})";

struct Year {
  const char* id;
  double debt, equity, ca, cl, cash, gp, sales, op;
};
const Year kYears[] = {
    {"Y1", 50, 100, 120, 60, 30, 40, 200, 20},
    {"Y2", 90, 60, 80, 80, 10, 50, 250, 5},
    {"Y3", 30, 120, 150, 50, 40, 30, 100, 30},
};

json statements_doc() {
  json years = json::array();
  for (const auto& y : kYears) {
    years.push_back({{"year", y.id},
                     {"balance", {{"total_debt", y.debt}, {"equity", y.equity}, {"current_assets", y.ca},
                                  {"current_liabilities", y.cl}, {"cash_and_equivalents", y.cash}}},
                     {"income", {{"gross_profit", y.gp}, {"sales", y.sales}}},
                     {"cashflow", {{"operating_net", y.op}}}});
  }
  return {{"years", years}};
}

json questionnaire(const std::string& name, const std::string& goal, const std::string& m1,
                   const std::vector<std::string>& m2) {
  return {{"expert", {{"name", name}, {"experience_years", 10}, {"degree", "MSc"}}},
          {"judgments",
           {{"goal", {{{"i", 0}, {"j", 1}, {"value", goal}}}},
            {"M1", {{{"i", 0}, {"j", 1}, {"value", m1}}}},
            {"M2",
             {{{"i", 0}, {"j", 1}, {"value", m2[0]}},
              {{"i", 0}, {"j", 2}, {"value", m2[1]}},
              {{"i", 1}, {"j", 2}, {"value", m2[2]}}}}}}};
}

struct Synthetic {
  TempDir dir;
  AssessmentConfig cfg;

  Synthetic() {
    testsupport::spit(dir / "hierarchy.json", kHierarchy);
    testsupport::spit(dir / "statements.json", statements_doc().dump(2));
    testsupport::spit(dir / "qa.json", questionnaire("A", "3", "1/2", {"2", "4", "2"}).dump(2));
    testsupport::spit(dir / "qb.json", questionnaire("B", "1/2", "3", {"3", "5", "3"}).dump(2));
    cfg = AssessmentConfig::from_json(
        {{"hierarchy", "hierarchy.json"}, {"questionnaires", {"qa.json", "qb.json"}}, {"statements", "statements.json"}},
        dir.path());
  }
};

// Stage-by-stage recomputation from the textbook formulas.
struct Oracle {
  std::map<std::string, double> global;
  std::vector<std::vector<double>> x;  // [year][criterion] in leaf order
  std::vector<double> v;
  std::vector<double> a;
};

Oracle synthetic_oracle() {
  using testsupport::ahp_oracle;
  auto mean = [](const std::vector<double>& p, const std::vector<double>& q) {
    std::vector<double> m(p.size());
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += m[i] = (p[i] + q[i]) / 2.0;
    for (auto& e : m) e /= s;
    return m;
  };
  const auto goal = mean(ahp_oracle({{1, 3}, {1.0 / 3, 1}}).w, ahp_oracle({{1, 0.5}, {2, 1}}).w);
  const auto m1 = mean(ahp_oracle({{1, 0.5}, {2, 1}}).w, ahp_oracle({{1, 3}, {1.0 / 3, 1}}).w);
  const auto m2 = mean(ahp_oracle({{1, 2, 4}, {0.5, 1, 2}, {0.25, 0.5, 1}}).w,
                       ahp_oracle({{1, 3, 5}, {1.0 / 3, 1, 3}, {0.2, 1.0 / 3, 1}}).w);
  Oracle o;
  const std::vector<std::string> ids{"CSR1", "LR1", "LR3", "IR2", "CFR2"};
  const std::vector<double> w{goal[0] * m1[0], goal[0] * m1[1], goal[1] * m2[0], goal[1] * m2[1], goal[1] * m2[2]};
  for (std::size_t j = 0; j < 5; ++j) o.global[ids[j]] = w[j];
  for (const auto& y : kYears) o.x.push_back({y.debt / y.equity, y.ca / y.cl, y.cash / y.cl, y.gp / y.sales, y.op / y.sales});
  o.v.assign(3, 0.0);
  for (std::size_t j = 0; j < 5; ++j) {
    double lo = 1e300, hi = -1e300;
    for (const auto& row : o.x) {
      lo = std::min(lo, row[j]);
      hi = std::max(hi, row[j]);
    }
    for (std::size_t i = 0; i < 3; ++i) {
      const double r = j == 0 ? (hi - o.x[i][j]) / (hi - lo) : (o.x[i][j] - lo) / (hi - lo);
      o.v[i] += w[j] * r;
    }
  }
  const double total = o.v[0] + o.v[1] + o.v[2];
  for (double e : o.v) o.a.push_back(e / total);
  return o;
}

json result_sections(const json& report) {
  json out;
  for (const char* k : {"weights", "score_table", "most_risky", "least_risky", "top_criteria", "consistency", "warnings"})
    out[k] = report.at(k);
  return out;
}

}  // namespace

TEST_CASE("statements entry equals the staged hand oracle") {
  Synthetic s;
  const auto r = run_assessment(s.cfg);
  const auto o = synthetic_oracle();

  CHECK(r.entry == EntryPoint::Statements);
  REQUIRE(r.decision_matrix.has_value());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 5; ++j) CHECK(std::fabs(r.decision_matrix->values(i, j) - o.x[i][j]) <= 1e-15);
  for (const auto& [id, w] : o.global) CHECK(std::fabs(r.global.at(id) - w) <= 1e-12);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::fabs(r.scores.scores[i] - o.v[i]) <= 1e-12);
    CHECK(std::fabs(r.scores.shares[i] - o.a[i]) <= 1e-12);
  }
  const auto best = std::max_element(o.v.begin(), o.v.end()) - o.v.begin();
  const auto worst = std::min_element(o.v.begin(), o.v.end()) - o.v.begin();
  CHECK(r.most_risky == kYears[best].id);
  CHECK(r.least_risky == kYears[worst].id);
  CHECK(r.consistency.size() == 6);
  CHECK(r.warnings.empty());
  CHECK(r.input_digests.size() == 4);
  CHECK(r.input_digests.at("statements.json") == sha256_file((s.dir / "statements.json").string()));
}

TEST_CASE("report is deterministic") {
  Synthetic s;
  const auto a = canonical_dump(report_json(run_assessment(s.cfg)));
  const auto b = canonical_dump(report_json(run_assessment(s.cfg)));
  CHECK(a == b);
  const auto doc = json::parse(a);
  CHECK(doc.at("schema_version") == kSchemaVersion);
  double total = 0.0;
  for (const auto& row : doc.at("score_table")) total += row.at("A").get<double>();
  CHECK(std::fabs(total - 1.0) <= 1e-8);
}

TEST_CASE("entering at the decision matrix gives the same result") {
  Synthetic s;
  const auto first = run_assessment(s.cfg);
  emit_report(first, s.dir / "out", {"csv"});
  REQUIRE(std::filesystem::exists(s.dir / "out" / "decision_matrix.csv"));

  auto cfg = s.cfg;
  cfg.statements_path.clear();
  cfg.decision_matrix_path = (s.dir / "out" / "decision_matrix.csv").string();
  const auto second = run_assessment(cfg);
  CHECK(second.entry == EntryPoint::DecisionMatrix);
  CHECK(result_sections(report_json(first)) == result_sections(report_json(second)));

  // And at the weighted matrix.
  auto cfg3 = s.cfg;
  cfg3.statements_path.clear();
  cfg3.weighted_matrix_path = (s.dir / "out" / "weighted_matrix.csv").string();
  const auto third = run_assessment(cfg3);
  CHECK(result_sections(report_json(first)) == result_sections(report_json(third)));
}

TEST_CASE("inconsistent expert warns and the run continues") {
  Synthetic s;
  testsupport::spit(s.dir / "qb.json", questionnaire("B", "1/2", "3", {"2", "4", "6"}).dump(2));
  const auto r = run_assessment(s.cfg);
  REQUIRE(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("M2") != std::string::npos);
  CHECK(r.scores.scores.size() == 3);
}

TEST_CASE("config validation") {
  Synthetic s;
  auto two = s.cfg;
  two.decision_matrix_path = "statements.json";
  CHECK_THROWS_AS(two.validate(), Error);

  auto none = s.cfg;
  none.questionnaire_paths.clear();
  CHECK_THROWS_AS(none.validate(), Error);

  auto missing = s.cfg;
  missing.statements_path = "nope.json";
  try {
    missing.validate();
    FAIL("expected IoError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::IoError);
  }
  CHECK_THROWS_AS(AssessmentConfig::from_json({{"colour", "red"}}), Error);
  CHECK_THROWS_AS(AssessmentConfig::from_json({{"normalization", "zscore"}}), Error);
}

TEST_CASE("stage errors carry the stage name") {
  Synthetic s;
  auto cfg = s.cfg;
  testsupport::spit(s.dir / "bad.csv", "alternative,CSR1,LR1\nY1,1,2\nY2,3,4\nY3,5,6\n");
  cfg.statements_path.clear();
  cfg.decision_matrix_path = "bad.csv";
  try {
    run_assessment(cfg);
    FAIL("expected StageError");
  } catch (const StageError& e) {
    CHECK(e.stage() == "saw");
    CHECK(std::string(e.what()).rfind("saw: ", 0) == 0);
  }
}

TEST_CASE("top_risk_criteria") {
  const auto& h = bundled_hierarchy();
  const auto g = ahp::global_weights(h, load_local_weights(h, testsupport::fixture("averaged-weights.json").string()));
  const auto top = top_risk_criteria(g, 4);
  REQUIRE(top.size() == 4);
  CHECK(top[0].id == "LR3");
  CHECK(top[1].id == "LR2");
  CHECK(top[2].id == "IR6");
  CHECK(top[3].id == "CFR5");
  CHECK(std::fabs(top[0].weight - 0.1329) <= 5e-4);
  CHECK(std::fabs(top[1].weight - 0.0944) <= 5e-4);
  CHECK(std::fabs(top[2].weight - 0.0450) <= 5e-4);
  CHECK(std::fabs(top[3].weight - 0.0426) <= 5e-4);
  CHECK(top_risk_criteria(g, 1).at(0).id == "LR3");

  ahp::GlobalWeights uniform;
  for (const auto& id : {"CFR2", "LR1", "CSR4", "CSR2"}) uniform[id] = 0.25;
  const auto two = top_risk_criteria(uniform, 2);
  CHECK(two[0].id == "CSR2");
  CHECK(two[1].id == "CSR4");
  CHECK_THROWS_AS(top_risk_criteria(uniform, 5), Error);
}

TEST_CASE("emit_report") {
  TempDir dir;
  auto cfg = AssessmentConfig::load(testsupport::fixture("paper-fixture.json").string());
  const auto r = run_assessment(cfg);

  SUBCASE("empty format set writes nothing") {
    const auto files = emit_report(r, dir / "none", {});
    CHECK(files.empty());
    CHECK((!std::filesystem::exists(dir / "none") || std::filesystem::is_empty(dir / "none")));
  }

  SUBCASE("json and csv agree") {
    const auto files = emit_report(r, dir / "both", {"json", "csv"});
    CHECK(std::filesystem::exists(dir / "both" / "report.json"));
    CHECK(std::filesystem::exists(dir / "both" / "scores.csv"));
    const auto doc = json::parse(testsupport::slurp(dir / "both" / "report.json"));
    std::istringstream csv(testsupport::slurp(dir / "both" / "scores.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "alternative,V,A,rank");
    std::size_t i = 0;
    while (std::getline(csv, line)) {
      std::istringstream row(line);
      std::string alt, v, a, rank;
      std::getline(row, alt, ',');
      std::getline(row, v, ',');
      std::getline(row, a, ',');
      std::getline(row, rank, ',');
      const auto& entry = doc.at("score_table").at(i++);
      CHECK(entry.at("alternative") == alt);
      CHECK(std::fabs(entry.at("V").get<double>() - std::stod(v)) <= 1e-9);
      CHECK(std::fabs(entry.at("A").get<double>() - std::stod(a)) <= 1e-9);
      CHECK(entry.at("rank").get<int>() == std::stoi(rank));
    }
    CHECK(i == 10);
    // Canonical numbers: no more than 9 significant digits anywhere.
    std::size_t floats = 0;
    std::function<void(const json&)> walk = [&](const json& j) {
      if (j.is_number_float()) {
        ++floats;
        CHECK(j.get<double>() == canonical(j.get<double>()));
      }
      if (j.is_structured())
        for (const auto& c : j) walk(c);
    };
    walk(json::parse(testsupport::slurp(dir / "both" / "report.json")));
    CHECK(floats > 50);
  }

  SUBCASE("main-criteria chart bars") {
    emit_report(r, dir / "svg", {"svg"});
    const auto svg = testsupport::slurp(dir / "svg" / "main_weights.svg");
    const std::map<std::string, double> expect{{"CSR", 0.14564}, {"LR", 0.24362}, {"IR", 0.15155}, {"CFR", 0.45918}};
    const std::regex bar(R"re(data-label="([^"]+)" data-value="([^"]+)")re");
    std::size_t seen = 0;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), bar); it != std::sregex_iterator(); ++it) {
      const auto label = (*it)[1].str();
      REQUIRE(expect.contains(label));
      // The printed main weights sum to 0.99999 and are renormalized.
      CHECK(std::fabs(std::stod((*it)[2].str()) - expect.at(label)) <= 1e-5);
      ++seen;
    }
    CHECK(seen == 4);
    CHECK(std::filesystem::exists(dir / "svg" / "global_weights.svg"));
    CHECK(std::filesystem::exists(dir / "svg" / "alternative_weights.svg"));
  }

  SUBCASE("unwritable output directory") {
    testsupport::spit(dir / "file", "x");
    try {
      emit_report(r, dir / "file" / "sub", {"json"});
      FAIL("expected IoError");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IoError);
    }
  }

  SUBCASE("weights.csv follows the rank layout") {
    emit_report(r, dir / "w", {"csv"});
    std::istringstream csv(testsupport::slurp(dir / "w" / "weights.csv"));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "rank,aws1,sub_rank,aws2,criterion,aws3,main");
    const auto t9 = json::parse(testsupport::slurp(testsupport::data("reference-weights.json")));
    std::map<std::string, json> rows;
    for (const auto& leaf : t9.at("leaves")) rows[leaf.at("id")] = leaf;
    std::size_t n = 0;
    while (std::getline(csv, line)) {
      std::vector<std::string> cells;
      std::istringstream row(line);
      std::string c;
      while (std::getline(row, c, ',')) cells.push_back(c);
      REQUIRE(cells.size() == 7);
      const auto& t = rows.at(cells[4]);
      CHECK(std::stoi(cells[0]) == t.at("global_rank").get<int>());
      CHECK(std::stoi(cells[2]) == t.at("sub_rank").get<int>());
      CHECK(std::fabs(std::stod(cells[1]) - t.at("aws1").get<double>()) <= 5e-4);
      ++n;
    }
    CHECK(n == 34);
  }
}

TEST_CASE("single alternative") {
  TempDir dir;
  testsupport::spit(dir / "m.csv", "alternative,CSR1\nonly,0.7\n");
  testsupport::spit(dir / "h.json", R"({"goal":"g","criteria":[{"id":"CSR1","label":"x","direction":"cost"}],"alternatives":["only"]})");
  testsupport::spit(dir / "w.json", R"({"averaged":{"main":{"CSR1":1.0},"local":{}}})");
  const auto cfg = AssessmentConfig::from_json(
      {{"hierarchy", "h.json"}, {"weights", "w.json"}, {"weighted_matrix", "m.csv"}}, dir.path());
  const auto r = run_assessment(cfg);
  CHECK(r.scores.ranks == std::vector<int>{1});
  CHECK(r.scores.shares == std::vector<double>{1.0});
  CHECK(r.most_risky == "only");
}
