// riskmcdm command-line front end.
#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>
#include <unistd.h>

#include "riskmcdm/ahp.hpp"
#include "riskmcdm/canonical.hpp"
#include "riskmcdm/elicitation.hpp"
#include "riskmcdm/error.hpp"
#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/http_service.hpp"
#include "riskmcdm/pipeline.hpp"
#include "riskmcdm/questionnaire.hpp"
#include "riskmcdm/ratios.hpp"
#include "riskmcdm/saw.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace riskmcdm;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("riskmcdm");
  logger->set_pattern("%^%l%$: %v");
  spdlog::set_default_logger(logger);
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("RISKMCDM_LOG")) {
    const std::string v = env;
    if (v == "error") spdlog::set_level(spdlog::level::err);
    else if (v == "warn") spdlog::set_level(spdlog::level::warn);
    else if (v == "info") spdlog::set_level(spdlog::level::info);
    else if (v == "debug") spdlog::set_level(spdlog::level::debug);
    else spdlog::warn("ignoring RISKMCDM_LOG='{}' (expected error, warn, info or debug)", v);
  }
}

Hierarchy hierarchy_or_bundled(const std::string& path) {
  if (path.empty()) return bundled_hierarchy();
  Hierarchy h = load_hierarchy(path);
  require_valid(h);
  return h;
}

// Writes to `path`, or stdout when empty.
void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
}

std::set<std::string> parse_formats(const std::string& text) {
  std::set<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

saw::CriterionWeights criterion_weights(const Hierarchy& h, const std::string& weights_path) {
  const auto global = ahp::global_weights(h, load_local_weights(h, weights_path));
  return {global.begin(), global.end()};
}

saw::DirectionVector directions_or_hierarchy(const Hierarchy& h, const std::string& path) {
  return path.empty() ? saw::DirectionVector::from_hierarchy(h) : saw::read_directions_file(path);
}

struct Options {
  std::string config;
  std::string hierarchy;
  std::vector<std::string> questionnaires;
  std::string statements;
  std::string matrix;
  std::string weighted_matrix;
  std::string weights;
  std::string directions;
  std::string normalization = "max-min";
  std::string imputation = "worst-observed";
  std::string out;
  std::string formats = "json";
  int port = elicitation::kDefaultPort;
  std::string bind = elicitation::kDefaultBind;
};

int run_ahp_cmd(const Options& o) {
  const Hierarchy h = hierarchy_or_bundled(o.hierarchy);
  std::vector<Questionnaire> qs;
  for (const auto& p : o.questionnaires) qs.push_back(load_questionnaire(p));
  const AhpResult result = run_ahp(h, qs);
  for (const auto& e : result.experts) {
    for (const auto& n : e.nodes) {
      const auto& c = n.consistency;
      if (c.verdict != ahp::Verdict::Acceptable) {
        spdlog::warn("{} / {}: CR = {} >= 0.10, judgments need revision", e.expert.name, n.node_id,
                     format_canonical(c.cr));
      } else {
        spdlog::info("{} / {}: CR = {}", e.expert.name, n.node_id, format_canonical(c.cr));
      }
    }
  }
  write_output(o.out, pipeline::canonical_dump(weights_json(h, result)));
  return kExitOk;
}

int run_ratios_cmd(const Options& o) {
  const auto years = ratios::load_statements(o.statements);
  const auto policy = ratios::parse_imputation(o.imputation);
  const auto& defs = ratios::standard_definitions();
  std::vector<ratios::RatioDefinition> chosen;
  if (o.hierarchy.empty()) {
    chosen.assign(defs.begin(), defs.end());
  } else {
    const Hierarchy h = hierarchy_or_bundled(o.hierarchy);
    for (const auto& leaf : h.leaf_ids()) {
      const auto* node = h.find(leaf);
      chosen.push_back(ratios::definition_of(node->ratio_ref.value_or(leaf)));
      chosen.back().id = leaf;
    }
  }
  const auto d = ratios::build_decision_matrix(years, chosen, policy);
  for (std::size_t c = 0; c < d.criterion_ids.size(); ++c)
    for (std::size_t a = 0; a < d.alternative_ids.size(); ++a)
      if (d.cell_status(a, c) == saw::CellStatus::Imputed)
        spdlog::warn("{} {}: ratio undefined, imputed ({})", d.alternative_ids[a], d.criterion_ids[c],
                     ratios::to_string(policy));
  std::ostringstream csv;
  saw::write_matrix_csv(csv, d.alternative_ids, d.criterion_ids, d.values);
  write_output(o.out, csv.str());
  return kExitOk;
}

int run_saw_cmd(const Options& o) {
  const Hierarchy h = hierarchy_or_bundled(o.hierarchy);
  saw::WeightedMatrix v;
  if (!o.weighted_matrix.empty()) {
    auto d = saw::read_matrix_csv_file(o.weighted_matrix);
    v = {d.alternative_ids, d.criterion_ids, d.values};
  } else {
    const auto d = saw::read_matrix_csv_file(o.matrix);
    const auto dirs = directions_or_hierarchy(h, o.directions);
    const auto r = saw::normalize(d, dirs, saw::parse_normalization(o.normalization));
    v = saw::apply_weights(r, criterion_weights(h, o.weights));
  }
  const auto table = saw::rank(saw::score(v), v.alternative_ids);
  std::ostringstream csv;
  csv << "alternative,V,A,rank\n";
  for (std::size_t i = 0; i < table.alternative_ids.size(); ++i) {
    csv << table.alternative_ids[i] << ',' << format_canonical(table.scores[i]) << ','
        << format_canonical(table.shares[i]) << ',' << table.ranks[i] << '\n';
  }
  write_output(o.out, csv.str());
  return kExitOk;
}

int run_pipeline_cmd(const Options& o) {
  pipeline::AssessmentConfig cfg;
  if (!o.config.empty()) {
    cfg = pipeline::AssessmentConfig::load(o.config);
  }
  // Flags override the config file.
  if (!o.hierarchy.empty()) cfg.hierarchy_path = fs::absolute(o.hierarchy).string();
  if (!o.questionnaires.empty()) {
    cfg.questionnaire_paths.clear();
    for (const auto& q : o.questionnaires) cfg.questionnaire_paths.push_back(fs::absolute(q).string());
  }
  if (!o.weights.empty()) cfg.weights_path = fs::absolute(o.weights).string();
  if (!o.statements.empty()) cfg.statements_path = fs::absolute(o.statements).string();
  if (!o.matrix.empty()) cfg.decision_matrix_path = fs::absolute(o.matrix).string();
  if (!o.weighted_matrix.empty()) cfg.weighted_matrix_path = fs::absolute(o.weighted_matrix).string();
  if (!o.directions.empty()) cfg.directions_path = fs::absolute(o.directions).string();
  if (o.config.empty() || o.normalization != "max-min") cfg.normalization = saw::parse_normalization(o.normalization);
  if (o.config.empty() || o.imputation != "worst-observed") cfg.imputation = ratios::parse_imputation(o.imputation);
  if (o.config.empty() || o.formats != "json") cfg.formats = parse_formats(o.formats);

  fs::path out_dir;
  if (!o.out.empty()) out_dir = o.out;
  else if (!cfg.output_dir.empty()) out_dir = cfg.resolve(cfg.output_dir);

  cfg.validate();
  const auto report = pipeline::run_assessment(cfg);
  for (const auto& w : report.warnings) spdlog::warn("{}", w);
  if (out_dir.empty()) {
    std::cout << pipeline::canonical_dump(pipeline::report_json(report));
    return kExitOk;
  }
  for (const auto& p : pipeline::emit_report(report, out_dir, cfg.formats)) spdlog::info("wrote {}", p.string());
  std::cout << "most risky: " << report.most_risky << "\nleast risky: " << report.least_risky << '\n';
  return kExitOk;
}

int run_serve_cmd(const Options& o) {
  const fs::path data_dir = o.out.empty() ? fs::path("riskmcdm-data") : fs::path(o.out);
  elicitation::ElicitationService service(data_dir);
  service.register_hierarchy("default", bundled_hierarchy());
  if (!o.hierarchy.empty()) {
    Hierarchy h = load_hierarchy(o.hierarchy);
    service.register_hierarchy(fs::path(o.hierarchy).stem().string(), std::move(h));
  }
  const std::size_t restored = service.restore();
  elicitation::HttpService http(service, data_dir / "ui");
  const int port = http.bind(o.bind, o.port);
  if (port < 0) throw Error(ErrorCode::IoError, "cannot bind " + o.bind + ":" + std::to_string(o.port));
  // Signals are taken synchronously on a dedicated thread; worker threads
  // inherit the blocked mask.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  std::atomic<bool> done{false};
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&set, &sig);
    if (done) return;
    spdlog::info("signal {}, shutting down", sig);
    http.wait_until_ready();
    http.stop();
  });
  std::cerr << "listening on http://" << o.bind << ':' << port << " (" << restored << " session(s) restored)\n";
  const bool ok = http.listen();
  done = true;
  kill(getpid(), SIGTERM);  // release the waiter if listen ended on its own
  waiter.join();
  return ok ? kExitOk : kExitIo;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"Financial risk assessment with AHP weights and SAW ranking", "riskmcdm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "riskmcdm 0.1.0");

  auto* ahp_cmd = app.add_subcommand("ahp", "Derive criterion weights and consistency from questionnaires");
  ahp_cmd->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON (default: bundled hierarchy)");
  ahp_cmd->add_option("--questionnaire", o.questionnaires, "Expert questionnaire JSON (repeatable)")
      ->required()
      ;
  ahp_cmd->add_option("--out", o.out, "Write weights JSON here (default: stdout)");

  auto* ratios_cmd = app.add_subcommand("ratios", "Compute the decision matrix from financial statements");
  ratios_cmd->add_option("--statements", o.statements, "Statements (.json or long .csv)")->required();
  ratios_cmd->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON selecting the ratio columns");
  ratios_cmd->add_option("--imputation", o.imputation, "Undefined-cell policy")
      ->check(CLI::IsMember({"worst-observed", "zero", "fail"}))
      ->capture_default_str();
  ratios_cmd->add_option("--out", o.out, "Write matrix CSV here (default: stdout)");

  auto* saw_cmd = app.add_subcommand("saw", "Score and rank alternatives");
  auto* saw_matrix = saw_cmd->add_option("--matrix", o.matrix, "Decision matrix CSV");
  auto* saw_weighted = saw_cmd->add_option("--weighted-matrix", o.weighted_matrix, "Weighted matrix CSV");
  saw_matrix->excludes(saw_weighted);
  saw_cmd->add_option("--weights", o.weights, "Weights JSON (required with --matrix)");
  saw_cmd->add_option("--directions", o.directions, "Directions JSON (default: hierarchy)");
  saw_cmd->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON (default: bundled hierarchy)");
  saw_cmd->add_option("--normalization", o.normalization, "Normalization scheme")
      ->check(CLI::IsMember({"max-min", "ratio-to-max"}))
      ->capture_default_str();
  saw_cmd->add_option("--out", o.out, "Write score CSV here (default: stdout)");

  auto* pipe_cmd = app.add_subcommand("pipeline", "Run the full assessment");
  pipe_cmd->add_option("--config", o.config, "Assessment config JSON");
  pipe_cmd->add_option("--hierarchy", o.hierarchy, "Hierarchy JSON");
  pipe_cmd->add_option("--questionnaire", o.questionnaires, "Expert questionnaire JSON (repeatable)");
  pipe_cmd->add_option("--weights", o.weights, "Weights JSON instead of questionnaires");
  pipe_cmd->add_option("--statements", o.statements, "Enter at financial statements");
  pipe_cmd->add_option("--matrix", o.matrix, "Enter at a decision matrix CSV");
  pipe_cmd->add_option("--weighted-matrix", o.weighted_matrix, "Enter at a weighted matrix CSV");
  pipe_cmd->add_option("--directions", o.directions, "Directions JSON");
  pipe_cmd->add_option("--normalization", o.normalization, "Normalization scheme")
      ->check(CLI::IsMember({"max-min", "ratio-to-max"}))
      ->capture_default_str();
  pipe_cmd->add_option("--imputation", o.imputation, "Undefined-cell policy")
      ->check(CLI::IsMember({"worst-observed", "zero", "fail"}))
      ->capture_default_str();
  pipe_cmd->add_option("--out", o.out, "Output directory (default: report.json on stdout)");
  pipe_cmd->add_option("--formats", o.formats, "Comma-separated subset of json,csv,svg")->capture_default_str();

  auto* serve_cmd = app.add_subcommand("serve", "Start the judgment elicitation service");
  serve_cmd->add_option("--hierarchy", o.hierarchy, "Extra hierarchy to host");
  serve_cmd->add_option("--out", o.out, "Data directory for session logs (default: riskmcdm-data)");
  serve_cmd->add_option("--port", o.port, "TCP port")->check(CLI::Range(0, 65535))->capture_default_str();
  serve_cmd->add_option("--bind", o.bind, "Bind address")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*ahp_cmd) return run_ahp_cmd(o);
    if (*ratios_cmd) return run_ratios_cmd(o);
    if (*saw_cmd) {
      if (o.matrix.empty() && o.weighted_matrix.empty()) {
        std::cerr << "error: saw needs --matrix or --weighted-matrix\n";
        return kExitValidation;
      }
      if (!o.matrix.empty() && o.weights.empty()) {
        std::cerr << "error: --weights is required with --matrix\n";
        return kExitValidation;
      }
      return run_saw_cmd(o);
    }
    if (*pipe_cmd) return run_pipeline_cmd(o);
    if (*serve_cmd) return run_serve_cmd(o);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::IoError ? kExitIo : kExitValidation;
  } catch (const elicitation::ServiceError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const json::exception& e) {
    std::cerr << "error: malformed input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitValidation;
}
