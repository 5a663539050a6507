#include "graft/log.hpp"

#include <cstdlib>

#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "graft/error.hpp"

namespace graft {

void init_logging() {
  const char* env = std::getenv("GRAFT_LOG");
  init_logging(env && *env ? env : "warn");
}

void init_logging(const std::string& level) {
  spdlog::level::level_enum lvl;
  if (level == "error") lvl = spdlog::level::err;
  else if (level == "warn") lvl = spdlog::level::warn;
  else if (level == "info") lvl = spdlog::level::info;
  else if (level == "debug") lvl = spdlog::level::debug;
  else throw Error("unknown log level '" + level + "' (expected error, warn, info or debug)");

  auto logger = spdlog::get("graft");
  if (!logger) {
    logger = spdlog::stderr_logger_mt("graft");
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
  }
  spdlog::set_level(lvl);
}

}  // namespace graft
