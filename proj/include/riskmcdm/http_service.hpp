#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "riskmcdm/elicitation.hpp"

namespace riskmcdm::elicitation {

inline constexpr int kDefaultPort = 8080;
inline constexpr const char* kDefaultBind = "127.0.0.1";

// httplib front end. Static UI is served from `ui_dir` when it exists, else a
// small built-in page.
class HttpService {
 public:
  HttpService(ElicitationService& service, std::filesystem::path ui_dir = {});
  ~HttpService();

  // port 0 picks a free port. Returns the bound port, or -1.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  bool listen();
  void stop();
  // Blocks until listen() is accepting connections.
  void wait_until_ready() const;
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace riskmcdm::elicitation
