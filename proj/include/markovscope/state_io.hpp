#pragma once

#include <string>

#include <json.hpp>

#include "markovscope/checkers.hpp"
#include "markovscope/entropy.hpp"

namespace markovscope {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";

// Complex matrices serialize as row-major arrays of [re, im] pairs; doubles
// are emitted in round-trip precision, so write-then-read is bit-exact.
ordered_json matrix_to_json(const CMatrix& m);
CMatrix matrix_from_json(const json& j, const std::string& what);

// State file schema: {"dims": [dA, dB, dC], "matrix": [[[re, im], ...], ...]}
// with index convention |a>|b>|c> -> row (a*dB + b)*dC + c.
ordered_json state_to_json(const TripartiteState& s);
TripartiteState state_from_json(const json& j);

ordered_json markov_spec_to_json(const MarkovBlockSpec& spec);
MarkovBlockSpec markov_spec_from_json(const json& j);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// json::parse with the byte offset of a failure converted to line/column.
json parse_json_text(const std::string& text, const std::string& origin);

TripartiteState read_state_file(const std::string& path);
void write_state_file(const std::string& path, const TripartiteState& s);

MarkovBlockSpec read_markov_spec_file(const std::string& path);
void write_markov_spec_file(const std::string& path, const MarkovBlockSpec& spec);

}  // namespace markovscope
