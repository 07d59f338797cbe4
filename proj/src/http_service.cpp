#include "riskmcdm/http_service.hpp"

#include <httplib.h>
#include <spdlog/spdlog.h>

#include "riskmcdm/error.hpp"

namespace riskmcdm::elicitation {

using json = nlohmann::json;

namespace {

constexpr const char* kPlaceholderPage = R"html(<!doctype html>
<html lang="en">
<head><meta charset="utf-8"><title>riskmcdm elicitation</title></head>
<body>
<h1>riskmcdm elicitation service</h1>
<p>No questionnaire UI bundle is installed. The JSON API is available under <code>/api</code>.</p>
<ul>
<li><code>GET /api/hierarchies</code></li>
<li><code>POST /api/sessions</code></li>
<li><code>GET /api/sessions/{id}</code></li>
<li><code>PUT /api/sessions/{id}/judgments</code></li>
<li><code>GET /api/sessions/{id}/consistency</code></li>
<li><code>POST /api/sessions/{id}/finalize</code></li>
</ul>
</body>
</html>
)html";

int status_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return 500;
    default: return 422;
  }
}

void send(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const ServiceError& e) {
      send(res, e.status(), error_body(e));
    } catch (const json::parse_error& e) {
      send(res, 400, error_body(ServiceError(400, "bad_request", std::string("malformed JSON: ") + e.what())));
    } catch (const Error& e) {
      send(res, status_for(e.code()), error_body(ServiceError(status_for(e.code()), to_string(e.code()), e.what())));
    } catch (const std::exception& e) {
      spdlog::error("{} {}: {}", req.method, req.path, e.what());
      send(res, 500, error_body(ServiceError(500, "internal_error", e.what())));
    }
  };
}

json parse_body(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  return json::parse(req.body);
}

}  // namespace

struct HttpService::Impl {
  ElicitationService& service;
  httplib::Server server;
  explicit Impl(ElicitationService& s) : service(s) {}
};

HttpService::HttpService(ElicitationService& service, std::filesystem::path ui_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.set_keep_alive_timeout(1);

  srv.Get("/healthz", guarded([](const httplib::Request&, httplib::Response& res) {
    send(res, 200, {{"status", "ok"}});
  }));
  srv.Get("/api/hierarchies", guarded([&svc](const httplib::Request&, httplib::Response& res) {
    send(res, 200, {{"hierarchies", svc.hierarchies_json()}});
  }));
  srv.Post("/api/sessions", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, 201, svc.create_session_json(parse_body(req)));
  }));
  srv.Get(R"(/api/sessions/([^/]+))", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, status_json(svc.status(req.matches[1])));
  }));
  srv.Put(R"(/api/sessions/([^/]+)/judgments)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, svc.submit_judgment_json(req.matches[1], parse_body(req)));
  }));
  srv.Get(R"(/api/sessions/([^/]+)/consistency)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, svc.consistency_json(req.matches[1]));
  }));
  srv.Post(R"(/api/sessions/([^/]+)/finalize)", guarded([&svc](const httplib::Request& req, httplib::Response& res) {
    send(res, 200, svc.finalize_json(req.matches[1]));
  }));

  std::error_code ec;
  if (!ui_dir.empty() && std::filesystem::is_directory(ui_dir, ec)) {
    srv.set_mount_point("/", ui_dir.string());
  } else {
    srv.Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  srv.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (res.status == 404 && res.body.empty()) {
      send(res, 404, error_body(ServiceError(404, "not_found", "no route for " + req.method + " " + req.path)));
    }
  });
}

HttpService::~HttpService() { stop(); }

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpService::listen() { return impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

bool HttpService::running() const { return impl_->server.is_running(); }

}  // namespace riskmcdm::elicitation
