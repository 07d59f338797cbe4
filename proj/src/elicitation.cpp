#include "riskmcdm/elicitation.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <fstream>
#include <mutex>
#include <random>
#include <sstream>

#include "riskmcdm/error.hpp"

namespace riskmcdm::elicitation {

using json = nlohmann::json;
namespace fs = std::filesystem;

json error_body(const ServiceError& e) {
  return {{"error", {{"code", e.code()}, {"message", e.what()}, {"details", e.details()}}}};
}

double triad_discrepancy(const ahp::PairwiseMatrix& m, std::size_t i, std::size_t j, std::size_t k) {
  return std::fabs(std::log(m(i, j) * m(j, k) / m(i, k)));
}

std::optional<TriadDiagnosis> worst_triad(const std::string& node_id, const ahp::PairwiseMatrix& m) {
  const std::size_t n = m.order();
  std::optional<TriadDiagnosis> worst;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        const double d = triad_discrepancy(m, i, j, k);
        if (d > kTriadFlagTolerance && (!worst || d > worst->discrepancy)) worst = TriadDiagnosis{node_id, i, j, k, d};
      }
  return worst;
}

std::string_view to_string(SessionState s) { return s == SessionState::Open ? "open" : "finalized"; }

static json report_to_json(const ahp::ConsistencyReport& r) {
  return {{"lambda_max", r.lambda_max}, {"ci", r.ci}, {"ri", r.ri}, {"cr", r.cr},
          {"verdict", ahp::to_string(r.verdict)}};
}

json node_status_json(const NodeStatus& n) {
  json remaining = json::array();
  for (const auto& [i, j] : n.remaining) remaining.push_back({i, j});
  json out{{"node_id", n.node_id},
           {"items", n.items},
           {"total_pairs", n.total_pairs},
           {"filled_pairs", n.filled_pairs},
           {"remaining_pairs", n.total_pairs - n.filled_pairs},
           {"remaining", remaining},
           {"complete", n.complete()},
           {"consistency", nullptr},
           {"worst_triad", nullptr}};
  if (n.consistency) out["consistency"] = report_to_json(*n.consistency);
  if (n.worst) {
    out["worst_triad"] = {{"node_id", n.worst->node_id},
                          {"triple", {n.worst->i, n.worst->j, n.worst->k}},
                          {"discrepancy", n.worst->discrepancy}};
  }
  return out;
}

json status_json(const SessionStatus& s) {
  json nodes = json::array();
  for (const auto& n : s.nodes) nodes.push_back(node_status_json(n));
  return {{"id", s.id},
          {"hierarchy", s.hierarchy_ref},
          {"expert", expert_to_json(s.expert)},
          {"state", to_string(s.state)},
          {"completion", s.completion},
          {"nodes", nodes}};
}

std::string new_session_id() {
  std::random_device rd;
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id;
  // 4 x 32 bits from the OS entropy source.
  for (int w = 0; w < 4; ++w) {
    std::uint32_t v = rd();
    for (int k = 0; k < 8; ++k) {
      id.push_back(kHex[v & 0xf]);
      v >>= 4;
    }
  }
  return id;
}

struct ElicitationService::Slot {
  mutable std::shared_mutex mutex;
  std::string id;
  std::string hierarchy_ref;
  ExpertInfo expert;
  SessionState state = SessionState::Open;
  std::vector<ComparisonNode> nodes;
  std::vector<std::map<Pair, Rational>> judgments;  // parallel to nodes
  std::vector<NodeStatus> cache;                    // recomputed on write
  fs::path log_path;

  std::size_t node_index(const std::string& node_id) const {
    for (std::size_t k = 0; k < nodes.size(); ++k)
      if (nodes[k].id == node_id) return k;
    throw ServiceError(422, "unknown_node", "unknown comparison node '" + node_id + "'", {{"node_id", node_id}});
  }

  void recompute(std::size_t k) {
    const auto& node = nodes[k];
    const std::size_t n = node.items.size();
    NodeStatus st;
    st.node_id = node.id;
    st.items = node.items;
    st.total_pairs = n * (n - 1) / 2;
    st.filled_pairs = judgments[k].size();
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (!judgments[k].contains({i, j})) st.remaining.emplace_back(i, j);
    if (st.complete()) {
      // Same path as a finalized document replayed through the engine.
      const auto m = node_matrix(node, entries(k));
      st.consistency = ahp::consistency(m);
      st.worst = worst_triad(node.id, m);
    }
    cache[k] = std::move(st);
  }

  std::vector<JudgmentEntry> entries(std::size_t k) const {
    std::vector<JudgmentEntry> out;
    for (const auto& [p, v] : judgments[k]) out.push_back({p.first, p.second, v});
    return out;
  }

  SessionStatus snapshot() const {
    SessionStatus s{id, hierarchy_ref, expert, state, cache, 1.0};
    std::size_t total = 0, filled = 0;
    for (const auto& n : cache) {
      total += n.total_pairs;
      filled += n.filled_pairs;
    }
    if (total > 0) s.completion = static_cast<double>(filled) / static_cast<double>(total);
    return s;
  }

  void append(const json& event) const {
    std::ofstream out(log_path, std::ios::app);
    out << event.dump() << '\n';
    out.flush();
    if (!out) throw ServiceError(500, "io_error", "cannot append to " + log_path.string());
  }
};

ElicitationService::ElicitationService(fs::path data_dir) : data_dir_(std::move(data_dir)) {
  std::error_code ec;
  fs::create_directories(data_dir_ / "sessions", ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + (data_dir_ / "sessions").string() + ": " + ec.message());
}

ElicitationService::~ElicitationService() = default;

void ElicitationService::register_hierarchy(const std::string& ref, Hierarchy h) {
  require_valid(h);
  std::unique_lock lock(mutex_);
  hierarchies_.insert_or_assign(ref, std::move(h));
}

std::vector<std::string> ElicitationService::hierarchy_refs() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [ref, h] : hierarchies_) out.push_back(ref);
  return out;
}

json ElicitationService::hierarchies_json() const {
  std::shared_lock lock(mutex_);
  json out = json::array();
  for (const auto& [ref, h] : hierarchies_) {
    json nodes = json::array();
    for (const auto& n : h.comparison_nodes()) nodes.push_back({{"node_id", n.id}, {"items", n.items}});
    out.push_back({{"ref", ref}, {"hierarchy", hierarchy_to_json(h)}, {"comparison_nodes", nodes}});
  }
  return out;
}

std::shared_ptr<ElicitationService::Slot> ElicitationService::find(const std::string& id) const {
  std::shared_lock lock(mutex_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "unknown_session", "no session '" + id + "'");
  return it->second;
}

std::string ElicitationService::create_session(const std::string& hierarchy_ref, const ExpertInfo& expert) {
  if (expert.name.empty()) throw ServiceError(422, "validation_error", "expert name is required");
  auto slot = std::make_shared<Slot>();
  {
    std::shared_lock lock(mutex_);
    const auto it = hierarchies_.find(hierarchy_ref);
    if (it == hierarchies_.end())
      throw ServiceError(404, "unknown_hierarchy", "no hierarchy '" + hierarchy_ref + "'", {{"hierarchy", hierarchy_ref}});
    slot->nodes = it->second.comparison_nodes();
  }
  slot->hierarchy_ref = hierarchy_ref;
  slot->expert = expert;
  slot->judgments.resize(slot->nodes.size());
  slot->cache.resize(slot->nodes.size());
  for (std::size_t k = 0; k < slot->nodes.size(); ++k) slot->recompute(k);

  std::unique_lock lock(mutex_);
  do slot->id = new_session_id();
  while (sessions_.contains(slot->id));
  slot->log_path = data_dir_ / "sessions" / (slot->id + ".log");
  slot->append({{"event", "created"}, {"id", slot->id}, {"hierarchy", hierarchy_ref}, {"expert", expert_to_json(expert)}});
  sessions_.emplace(slot->id, slot);
  spdlog::info("session {} created for '{}'", slot->id, expert.name);
  return slot->id;
}

NodeStatus ElicitationService::submit_judgment(const std::string& session_id, const std::string& node_id,
                                               std::size_t i, std::size_t j, const Rational& value) {
  auto slot = find(session_id);
  std::unique_lock lock(slot->mutex);
  if (slot->state == SessionState::Finalized)
    throw ServiceError(409, "session_finalized", "session '" + session_id + "' is finalized");
  const std::size_t k = slot->node_index(node_id);
  const std::size_t n = slot->nodes[k].items.size();
  if (!(i < j && j < n)) {
    throw ServiceError(422, "invalid_pair",
                       "pair (" + std::to_string(i) + "," + std::to_string(j) + ") is not an upper-triangle pair of '" +
                           node_id + "'",
                       {{"node_id", node_id}, {"i", i}, {"j", j}, {"order", n}});
  }
  if (!is_saaty_value(value))
    throw ServiceError(422, "invalid_intensity", "'" + value.str() + "' is not a Saaty intensity", {{"value", value.str()}});
  slot->append({{"event", "judgment"}, {"node", node_id}, {"i", i}, {"j", j}, {"value", value.str()}});
  slot->judgments[k].insert_or_assign(Pair{i, j}, value);
  slot->recompute(k);
  return slot->cache[k];
}

SessionStatus ElicitationService::status(const std::string& session_id) const {
  auto slot = find(session_id);
  std::shared_lock lock(slot->mutex);
  return slot->snapshot();
}

Questionnaire ElicitationService::finalize(const std::string& session_id) {
  auto slot = find(session_id);
  std::unique_lock lock(slot->mutex);
  if (slot->state == SessionState::Finalized)
    throw ServiceError(409, "already_finalized", "session '" + session_id + "' is already finalized");
  json blocking = json::array();
  for (const auto& n : slot->cache) {
    if (!n.complete()) {
      blocking.push_back({{"node_id", n.node_id}, {"reason", "incomplete"},
                          {"remaining_pairs", n.total_pairs - n.filled_pairs}, {"cr", nullptr}});
    } else if (n.consistency->cr >= ahp::kConsistencyThreshold) {
      blocking.push_back({{"node_id", n.node_id}, {"reason", "inconsistent"}, {"remaining_pairs", 0},
                          {"cr", n.consistency->cr}});
    }
  }
  if (!blocking.empty()) {
    throw ServiceError(409, "finalization_blocked", std::to_string(blocking.size()) + " node(s) block finalization",
                       {{"blocking", blocking}});
  }
  slot->append({{"event", "finalized"}});
  slot->state = SessionState::Finalized;
  Questionnaire q{slot->expert, {}};
  for (std::size_t k = 0; k < slot->nodes.size(); ++k) q.judgments[slot->nodes[k].id] = slot->entries(k);
  spdlog::info("session {} finalized", session_id);
  return q;
}

std::size_t ElicitationService::restore() {
  std::size_t restored = 0;
  const fs::path dir = data_dir_ / "sessions";
  std::vector<fs::path> logs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".log") logs.push_back(e.path());
  std::sort(logs.begin(), logs.end());
  for (const auto& path : logs) {
    std::ifstream in(path);
    std::string line;
    std::shared_ptr<Slot> slot;
    try {
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const json ev = json::parse(line);
        const std::string kind = ev.at("event");
        if (kind == "created") {
          slot = std::make_shared<Slot>();
          slot->id = ev.at("id");
          slot->hierarchy_ref = ev.at("hierarchy");
          slot->expert = expert_from_json(ev.at("expert"));
          std::shared_lock lock(mutex_);
          slot->nodes = hierarchies_.at(slot->hierarchy_ref).comparison_nodes();
          slot->judgments.resize(slot->nodes.size());
          slot->cache.resize(slot->nodes.size());
        } else if (!slot) {
          throw Error(ErrorCode::ValidationError, "event before 'created'");
        } else if (kind == "judgment") {
          const std::size_t k = slot->node_index(ev.at("node"));
          slot->judgments[k].insert_or_assign(Pair{ev.at("i").get<std::size_t>(), ev.at("j").get<std::size_t>()},
                                              Rational::parse(ev.at("value").get<std::string>()));
        } else if (kind == "finalized") {
          slot->state = SessionState::Finalized;
        }
      }
      if (!slot) continue;
      for (std::size_t k = 0; k < slot->nodes.size(); ++k) slot->recompute(k);
      slot->log_path = path;
      std::unique_lock lock(mutex_);
      sessions_.insert_or_assign(slot->id, slot);
      ++restored;
    } catch (const std::exception& e) {
      spdlog::warn("skipping session log {}: {}", path.string(), e.what());
    }
  }
  return restored;
}

// JSON front door.

static std::size_t index_field(const json& body, const char* key) {
  if (!body.contains(key) || !body.at(key).is_number_integer() || body.at(key).get<std::int64_t>() < 0)
    throw ServiceError(422, "invalid_pair", std::string("'") + key + "' must be a non-negative integer");
  return body.at(key).get<std::size_t>();
}

static Rational value_field(const json& body) {
  if (!body.contains("value")) throw ServiceError(422, "invalid_intensity", "'value' is required");
  const json& v = body.at("value");
  try {
    if (v.is_string()) return Rational::parse(v.get<std::string>());
    if (v.is_number()) return Rational::parse(v.dump());
  } catch (const Error& e) {
    throw ServiceError(422, "invalid_intensity", e.what());
  }
  throw ServiceError(422, "invalid_intensity", "'value' must be a number or a fraction string");
}

json ElicitationService::create_session_json(const json& body) {
  if (!body.is_object()) throw ServiceError(422, "validation_error", "body must be an object");
  const std::string ref = body.value("hierarchy", std::string("default"));
  ExpertInfo expert;
  try {
    expert = expert_from_json(body.value("expert", json::object()));
  } catch (const std::exception& e) {
    throw ServiceError(422, "validation_error", e.what());
  }
  const std::string id = create_session(ref, expert);
  return status_json(status(id));
}

json ElicitationService::submit_judgment_json(const std::string& session_id, const json& body) {
  if (!body.is_object()) throw ServiceError(422, "validation_error", "body must be an object");
  if (!body.contains("node_id") || !body.at("node_id").is_string())
    throw ServiceError(422, "unknown_node", "'node_id' is required");
  const auto st = submit_judgment(session_id, body.at("node_id"), index_field(body, "i"), index_field(body, "j"),
                                  value_field(body));
  return node_status_json(st);
}

json ElicitationService::consistency_json(const std::string& session_id) const {
  const auto s = status(session_id);
  json nodes = json::array();
  bool all_ok = true;
  for (const auto& n : s.nodes) {
    json entry{{"node_id", n.node_id}, {"complete", n.complete()}, {"consistency", nullptr}, {"worst_triad", nullptr}};
    const json full = node_status_json(n);
    entry["consistency"] = full["consistency"];
    entry["worst_triad"] = full["worst_triad"];
    if (!n.complete() || n.consistency->verdict != ahp::Verdict::Acceptable) all_ok = false;
    nodes.push_back(entry);
  }
  return {{"id", s.id}, {"all_acceptable", all_ok}, {"nodes", nodes}};
}

json ElicitationService::finalize_json(const std::string& session_id) {
  return {{"id", session_id}, {"state", "finalized"}, {"questionnaire", questionnaire_to_json(finalize(session_id))}};
}

}  // namespace riskmcdm::elicitation
