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

#include "wse/json_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wse/error.hpp"

namespace wse {

namespace {

std::size_t get_dim(const Json &j, const char *key) {
    require(j.contains(key) && j.at(key).is_number_unsigned(), std::string("setup: missing dimension '") + key + "'");
    const auto d = j.at(key).get<std::size_t>();
    require(d >= 1 && d <= 32, std::string("setup: dimension '") + key + "' must lie in [1, 32]");
    return d;
}

double parse_number(std::string_view s, const std::string &original) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size(), "cannot parse number '" + original + "'");
    return v;
}

} // namespace

Json matrix_to_json(const ComplexMatrix &m) {
    Json out = Json::array();
    for (const auto &z : m.entries()) {
        out.push_back(Json::array({z.real(), z.imag()}));
    }
    return out;
}

ComplexMatrix matrix_from_json(const Json &j, std::size_t dim) {
    require(j.is_array() && j.size() == dim * dim, "matrix: expected " + std::to_string(dim * dim) + " entries");
    std::vector<Complex> entries;
    entries.reserve(dim * dim);
    for (const auto &e : j) {
        if (e.is_number()) {
            entries.emplace_back(e.get<double>(), 0.0);
            continue;
        }
        require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(),
                "matrix: entries must be [re, im] pairs");
        entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return ComplexMatrix(dim, std::move(entries));
}

Json setup_to_json(const DeviceSetup &setup) {
    Json out;
    out["dim_a"] = setup.dim_a();
    out["dim_b"] = setup.dim_b();
    out["rho_ab"] = matrix_to_json(setup.rho_ab().matrix());
    out["a0"] = matrix_to_json(setup.a(0).matrix());
    out["a1"] = matrix_to_json(setup.a(1).matrix());
    out["b0"] = matrix_to_json(setup.b(0).matrix());
    out["b1"] = matrix_to_json(setup.b(1).matrix());
    return out;
}

DeviceSetup setup_from_json(const Json &j) {
    require(j.is_object(), "setup: expected a JSON object");
    const std::size_t da = get_dim(j, "dim_a");
    const std::size_t db = get_dim(j, "dim_b");
    const auto field = [&](const char *key, std::size_t dim) {
        require(j.contains(key), std::string("setup: missing '") + key + "'");
        return HermitianOperator(matrix_from_json(j.at(key), dim));
    };
    return DeviceSetup(DensityMatrix(field("rho_ab", da * db)), da, Observable(field("a0", da)),
                       Observable(field("a1", da)), Observable(field("b0", db)), Observable(field("b1", db)));
}

QuantumRoundModel quantum_model_from_json(const Json &j) {
    DeviceSetup setup = setup_from_json(j);
    Observable live = setup.b(0);
    if (j.contains("live_measurement")) {
        live = Observable(HermitianOperator(matrix_from_json(j.at("live_measurement"), setup.dim_b())));
    }
    std::vector<std::array<unsigned, 2>> table{{{0, 0}}, {{1, 1}}};
    if (j.contains("guess_table")) {
        const Json &g = j.at("guess_table");
        require(g.is_array() && g.size() == 2, "guess_table: expected two rows");
        for (std::size_t k = 0; k < 2; ++k) {
            require(g[k].is_array() && g[k].size() == 2 && g[k][0].is_number_unsigned() &&
                        g[k][1].is_number_unsigned(),
                    "guess_table: rows must hold two bits");
            table[k] = {g[k][0].get<unsigned>(), g[k][1].get<unsigned>()};
        }
    }
    return QuantumRoundModel(std::move(setup), std::move(live), std::move(table));
}

double parse_probability(const Json &j) {
    if (j.is_number()) {
        return j.get<double>();
    }
    require(j.is_string(), "probability: expected a number or a string");
    const std::string s = j.get<std::string>();
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const double num = parse_number(std::string_view(s).substr(0, slash), s);
        const double den = parse_number(std::string_view(s).substr(slash + 1), s);
        require(den != 0.0, "probability: zero denominator in '" + s + "'");
        return num / den;
    }
    return parse_number(s, s);
}

Json distribution_to_json(const JointDistribution &p) {
    Json out;
    out["alphabets"] = p.alphabet_sizes();
    if (!p.names().empty()) {
        out["names"] = p.names();
    }
    out["probabilities"] = p.table();
    return out;
}

JointDistribution distribution_from_json(const Json &j) {
    require(j.is_object() && j.contains("alphabets") && j.contains("probabilities"),
            "distribution: expected 'alphabets' and 'probabilities'");
    std::vector<std::size_t> sizes;
    for (const auto &s : j.at("alphabets")) {
        require(s.is_number_unsigned(), "distribution: alphabet sizes must be non-negative integers");
        sizes.push_back(s.get<std::size_t>());
    }
    std::vector<double> table;
    require(j.at("probabilities").is_array(), "distribution: 'probabilities' must be an array");
    for (const auto &v : j.at("probabilities")) {
        table.push_back(parse_probability(v));
    }
    std::vector<std::string> names;
    if (j.contains("names")) {
        for (const auto &n : j.at("names")) {
            require(n.is_string(), "distribution: names must be strings");
            names.push_back(n.get<std::string>());
        }
    }
    return JointDistribution(std::move(sizes), std::move(table), std::move(names));
}

Json round_to_json(std::uint64_t index, const RoundRecord &rec) {
    Json out;
    out["j"] = index;
    out["q"] = rec.q;
    out["theta"] = rec.theta;
    out["x"] = rec.x;
    if (rec.t) {
        out["t"] = *rec.t;
    }
    if (rec.y) {
        out["y"] = *rec.y;
    }
    if (rec.k) {
        out["k"] = *rec.k;
    }
    if (rec.guess) {
        out["guess"] = *rec.guess;
    }
    return out;
}

Json transcript_footer(const Transcript &tr) {
    Json out;
    out["footer"] = true;
    out["rounds"] = tr.rounds.size();
    out["r_n"] = tr.r_n;
    out["s_n"] = tr.s_n;
    out["f_chsh"] = tr.f_chsh();
    out["gamma"] = tr.gamma.str();
    out["passed"] = tr.passed;
    out["h_n"] = tr.h_n;
    out["failed"] = tr.failed;
    out["no_test_rounds"] = tr.no_test_rounds;
    return out;
}

std::string transcript_to_jsonl(const Transcript &tr) {
    std::string out;
    for (std::size_t j = 0; j < tr.rounds.size(); ++j) {
        out += round_to_json(j, tr.rounds[j]).dump();
        out += '\n';
    }
    out += transcript_footer(tr).dump();
    out += '\n';
    return out;
}

Json report_to_json(const MonteCarloReport &rep) {
    Json out;
    out["strategy"] = rep.strategy;
    out["seed"] = rep.seed;
    Json params;
    params["q"] = rep.params.q;
    params["gamma"] = rep.params.gamma.str();
    params["n"] = rep.params.rounds;
    out["params"] = params;
    out["trials"] = rep.trials;
    out["failures"] = rep.failures;
    out["passes"] = rep.passes;
    out["no_test_trials"] = rep.no_test_trials;
    out["p_hat"] = rep.p_hat;
    out["ci"] = Json::array({rep.ci_low, rep.ci_high});
    out["ci_level"] = 0.99;
    out["bound"] = rep.bound;
    out["alpha_min"] = rep.alpha_min;
    out["k_star"] = rep.k_star;
    out["p_pass_hat"] = rep.p_pass_hat;
    out["conditional_rate"] = rep.conditional_rate;
    out["claims_admissible"] = rep.claims_admissible;
    if (rep.law) {
        Json law;
        law["p_live_correct"] = rep.law->p_live_correct;
        law["p_test_win"] = rep.law->p_test_win;
        law["admissible"] = rep.law_admissible;
        out["law"] = law;
    }
    out["bound_violated"] = rep.bound_violated;
    return out;
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json read_json_file(const std::string &path) {
    const std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("'" + path + "': " + e.what());
    }
}

} // namespace wse
