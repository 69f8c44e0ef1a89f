#pragma once

#include <string>

#include "fracsum/verify.hpp"

namespace fracsum {

/// Parse an experiment description in a small INI dialect:
///   - `[kernel]`, `[memory]`, `[innovation]`, `[experiment]` sections;
///   - `key = value` entries; lists are space-separated; the Cramer-Wold
///     vectors use `|` between vectors ("1 | 1 -1 | 1 1 1");
///   - `#` or `;` starts a comment (inline comments allowed).
/// Unknown sections or keys throw ConfigError carrying the line number, as do
/// malformed values. Missing keys keep their defaults; call validate() before
/// running anything.
ExperimentConfig parse_config_text(const std::string& text);

/// parse_config_text over the contents of `path`; throws ConfigError if the
/// file cannot be read.
ExperimentConfig parse_config_file(const std::string& path);

/// Canonical INI round-trip of a config. Only the keys relevant to the chosen
/// kernel/memory/innovation are emitted, truncation is written as resolved,
/// and doubles use enough digits to reparse exactly.
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace fracsum
