#pragma once

#include <string>

#include "dsched/sim.hpp"

namespace dsched {

/// Loads a key=value config file describing one episode (framework sizes,
/// trace baselines, policy, seed). '#' starts a comment. Lists are
/// comma-separated. Throws StructuralError naming the offending key.
Episode load_config(const std::string& path);

/// Parses config text (same format) — used for round-trip tests.
Episode parse_config(const std::string& text, const std::string& origin = "<string>");

/// Applies a single key=value override on top of a loaded episode.
void apply_override(Episode& ep, const std::string& key, const std::string& value);

/// Serializes an episode back to config text; parse_config(dump_config(e))
/// reproduces an identical episode.
std::string dump_config(const Episode& ep);

}  // namespace dsched
