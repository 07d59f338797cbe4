#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

int main(int argc, char** argv) {
  // Keep library chatter off stdout and below warn.
  spdlog::set_default_logger(spdlog::stderr_color_mt("riskmcdm-test"));
  spdlog::set_level(spdlog::level::warn);
  doctest::Context ctx(argc, argv);
  return ctx.run();
}
