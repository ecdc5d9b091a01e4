// Copyright 2026 The wse-di Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// JSON documents for setups, distributions, transcripts and reports.
//
// Matrices are flat row-major arrays of [re, im] pairs. Probabilities may be
// given as numbers or as exact strings ("1/8", "0.125").

#pragma once

#include <string>

#include <json.hpp>

#include "wse/chsh.hpp"
#include "wse/guessing.hpp"
#include "wse/simulator.hpp"

namespace wse {

using Json = nlohmann::ordered_json;

Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j, std::size_t dim);

/// {"dim_a", "dim_b", "rho_ab", "a0", "a1", "b0", "b1"}.
Json setup_to_json(const DeviceSetup &setup);
DeviceSetup setup_from_json(const Json &j);

/// Setup document plus "live_measurement" (Bob's observable, default b0) and
/// "guess_table" ([[guess for k=0, theta=0, theta=1], [k=1 ...]], default
/// guess k).
QuantumRoundModel quantum_model_from_json(const Json &j);

/// "3/8", "0.375" or a JSON number.
double parse_probability(const Json &j);

/// {"alphabets": [...], "names": [...], "probabilities": [...]}.
Json distribution_to_json(const JointDistribution &p);
JointDistribution distribution_from_json(const Json &j);

Json round_to_json(std::uint64_t index, const RoundRecord &rec);
Json transcript_footer(const Transcript &tr);
/// One line per round followed by the footer line; LF line endings.
std::string transcript_to_jsonl(const Transcript &tr);

Json report_to_json(const MonteCarloReport &rep);

/// Reads a whole file; throws ValidationError when it cannot be opened.
std::string read_file(const std::string &path);
Json read_json_file(const std::string &path);

} // namespace wse
