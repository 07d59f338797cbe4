#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "riskmcdm/ahp.hpp"
#include "riskmcdm/hierarchy.hpp"
#include "riskmcdm/questionnaire.hpp"
#include "riskmcdm/rational.hpp"

namespace riskmcdm::elicitation {

// Failure with an HTTP status; rendered as {error: {code, message, details}}.
class ServiceError : public std::runtime_error {
 public:
  ServiceError(int status, std::string code, const std::string& message,
               nlohmann::json details = nlohmann::json::object())
      : std::runtime_error(message), status_(status), code_(std::move(code)), details_(std::move(details)) {}

  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  int status_;
  std::string code_;
  nlohmann::json details_;
};

nlohmann::json error_body(const ServiceError& e);

// |ln(a_ij * a_jk / a_ik)| for one triple i < j < k.
struct TriadDiagnosis {
  std::string node_id;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;
  double discrepancy = 0.0;
};

inline constexpr double kTriadFlagTolerance = 1e-12;

double triad_discrepancy(const ahp::PairwiseMatrix& m, std::size_t i, std::size_t j, std::size_t k);
// Largest discrepancy over all C(n,3) triples (first in lexicographic order on
// ties); nullopt when n < 3 or every triple is consistent.
std::optional<TriadDiagnosis> worst_triad(const std::string& node_id, const ahp::PairwiseMatrix& m);

enum class SessionState { Open, Finalized };
std::string_view to_string(SessionState s);

using Pair = std::pair<std::size_t, std::size_t>;

struct NodeStatus {
  std::string node_id;
  std::vector<std::string> items;
  std::size_t total_pairs = 0;
  std::size_t filled_pairs = 0;
  std::vector<Pair> remaining;
  std::optional<ahp::ConsistencyReport> consistency;  // complete nodes only
  std::optional<TriadDiagnosis> worst;

  bool complete() const noexcept { return filled_pairs == total_pairs; }
};

struct SessionStatus {
  std::string id;
  std::string hierarchy_ref;
  ExpertInfo expert;
  SessionState state = SessionState::Open;
  std::vector<NodeStatus> nodes;
  double completion = 0.0;  // filled / total pairs, 1 when there are none
};

nlohmann::json node_status_json(const NodeStatus& n);
nlohmann::json status_json(const SessionStatus& s);

// Sessions are folded from append-only event logs under
// <data_dir>/sessions/<id>.log. Writes to one session are serialized; reads
// share a lock.
class ElicitationService {
 public:
  explicit ElicitationService(std::filesystem::path data_dir);
  ~ElicitationService();
  ElicitationService(const ElicitationService&) = delete;
  ElicitationService& operator=(const ElicitationService&) = delete;

  // Throws Error{ValidationError} for an invalid hierarchy.
  void register_hierarchy(const std::string& ref, Hierarchy h);
  std::vector<std::string> hierarchy_refs() const;
  nlohmann::json hierarchies_json() const;

  // Replays existing logs; call after registering hierarchies. Returns the
  // number of sessions restored.
  std::size_t restore();

  std::string create_session(const std::string& hierarchy_ref, const ExpertInfo& expert);
  NodeStatus submit_judgment(const std::string& session_id, const std::string& node_id, std::size_t i,
                             std::size_t j, const Rational& value);
  SessionStatus status(const std::string& session_id) const;
  // Throws ServiceError 409 listing blocking nodes, or when already final.
  Questionnaire finalize(const std::string& session_id);

  // JSON front door used by the HTTP layer.
  nlohmann::json create_session_json(const nlohmann::json& body);
  nlohmann::json submit_judgment_json(const std::string& session_id, const nlohmann::json& body);
  nlohmann::json consistency_json(const std::string& session_id) const;
  nlohmann::json finalize_json(const std::string& session_id);

  const std::filesystem::path& data_dir() const noexcept { return data_dir_; }

 private:
  struct Slot;
  std::shared_ptr<Slot> find(const std::string& id) const;

  std::filesystem::path data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Hierarchy> hierarchies_;
  std::map<std::string, std::shared_ptr<Slot>> sessions_;
};

std::string new_session_id();

}  // namespace riskmcdm::elicitation
