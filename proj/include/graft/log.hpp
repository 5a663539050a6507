#pragma once

#include <string>

namespace graft {

/// Routes library logging to stderr. The level comes from GRAFT_LOG
/// (error, warn, info, debug); unset means warn.
void init_logging();

/// Same, with an explicit level name. Throws graft::Error on an unknown name.
void init_logging(const std::string& level);

}  // namespace graft
