#pragma once

#include <string>

#include <json.hpp>

#include "nuca/config.hpp"
#include "nuca/nuca_decide.hpp"
#include "nuca/spec.hpp"

// Textual interchange formats.  Offsets are encoded as "(i)" / "(i,j)"
// strings so coefficient maps stay JSON objects; matrices are row-major
// nested lists.  Loading is strict -- unknown keys are rejected -- and
// residues are reduced mod p, so negative coefficient entries are fine.
// Emission is canonical (normalized spec, nonzero blocks only, sorted keys),
// which makes save/load/save byte-stable.

namespace nuca {

using Json = nlohmann::json;

Point point_from_string(const std::string& s, std::uint32_t d);

Json spec_to_json(const NucaSpec& spec);
NucaSpec spec_from_json(const Json& j);

Json config_to_json(const PatternConfig& x);
PatternConfig config_from_json(const Json& j, const NucaSpec& spec);

Json report_to_json(const DecisionReport& rep);

// Canonical serialization: sorted keys, two-space indent, trailing newline.
std::string dump_json(const Json& j);

NucaSpec load_spec_file(const std::string& path);
PatternConfig load_config_file(const std::string& path, const NucaSpec& spec);

}  // namespace nuca
