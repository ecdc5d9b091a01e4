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

#include "wse/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "wse/alpha_min.hpp"
#include "wse/bounds.hpp"
#include "wse/error.hpp"
#include "wse/json_io.hpp"
#include "wse/rng.hpp"
#include "wse/simulator.hpp"
#include "wse/verify.hpp"

namespace wse {

namespace {

using Config = std::map<std::string, std::string>;

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string underscore(std::string key) {
    std::replace(key.begin(), key.end(), '-', '_');
    return key;
}

std::string dash(std::string key) {
    std::replace(key.begin(), key.end(), '_', '-');
    return key;
}

double get_double(const Config &cfg, const std::string &key) {
    const std::string &s = cfg.at(key);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size() && std::isfinite(v),
            "config: '" + key + "' is not a number: '" + s + "'");
    return v;
}

std::uint64_t get_u64(const Config &cfg, const std::string &key) {
    const std::string &s = cfg.at(key);
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    require(res.ec == std::errc() && res.ptr == s.data() + s.size(),
            "config: '" + key + "' is not a non-negative integer: '" + s + "'");
    return v;
}

bool get_bool(const Config &cfg, const std::string &key) {
    const std::string &s = cfg.at(key);
    if (s == "true" || s == "1") {
        return true;
    }
    require(s == "false" || s == "0", "config: '" + key + "' must be true or false");
    return false;
}

// Tabular output: rows of numbers under named columns.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string render_table(const Table &t, const Config &cfg, const std::string &format) {
    if (format == "json") {
        Json out;
        Json c = Json::object();
        for (const auto &[k, v] : cfg) {
            c[k] = v;
        }
        out["config"] = c;
        out["columns"] = t.columns;
        out["rows"] = t.rows;
        return out.dump(2) + "\n";
    }
    std::string s;
    for (const auto &[k, v] : cfg) {
        s += "# " + k + "=" + v + "\n";
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        s += (i ? "," : "") + t.columns[i];
    }
    s += "\n";
    for (const auto &row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            s += (i ? "," : "") + format_number(row[i]);
        }
        s += "\n";
    }
    return s;
}

Json config_json(const Config &cfg) {
    Json c = Json::object();
    for (const auto &[k, v] : cfg) {
        c[k] = v;
    }
    return c;
}

struct Result {
    std::string text;
    int code = kExitOk;
};

Result cmd_bounds(const Config &cfg, const std::string &format) {
    const double lo = get_double(cfg, "beta_min");
    const double hi = get_double(cfg, "beta_max");
    const std::uint64_t points = get_u64(cfg, "points");
    require(lo >= 2.0 && hi <= kTsirelsonBound + 1e-12 && lo < hi, "bounds: need 2 <= beta_min < beta_max <= 2 sqrt 2");
    require(points >= 2, "bounds: points must be >= 2");
    Table t{{"beta", "f_beta"}, {}};
    for (std::uint64_t i = 0; i < points; ++i) {
        const double beta = i + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
        t.rows.push_back({beta, entropy_rate_from_chsh(beta)});
    }
    return {render_table(t, cfg, format)};
}

Result cmd_tradeoff(const Config &cfg, const std::string &format) {
    const std::uint64_t samples = get_u64(cfg, "samples");
    require(samples >= 2 && samples <= 10'000'000, "tradeoff: samples must lie in [2, 1e7]");
    Table t{{"t", "p_L", "p_T"}, {}};
    for (const auto &p : tradeoff_curve(samples)) {
        t.rows.push_back({p.t, p.p_live, p.p_test});
    }
    return {render_table(t, cfg, format)};
}

std::vector<double> grid(double lo, double hi, std::uint64_t points, const char *what) {
    require(points >= 1, std::string(what) + ": points must be >= 1");
    require(lo <= hi, std::string(what) + ": min must not exceed max");
    std::vector<double> g;
    for (std::uint64_t i = 0; i < points; ++i) {
        g.push_back(points == 1 ? lo
                    : i + 1 == points
                        ? hi
                        : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    return g;
}

Result cmd_alpha_min(const Config &cfg, const std::string &format) {
    const auto qs = grid(get_double(cfg, "q_min"), get_double(cfg, "q_max"), get_u64(cfg, "q_points"), "q grid");
    const auto gs = grid(get_double(cfg, "gamma_min"), get_double(cfg, "gamma_max"), get_u64(cfg, "gamma_points"),
                         "gamma grid");
    for (double q : qs) {
        validate_test_probability(q);
    }
    for (double g : gs) {
        validate_threshold(g);
    }
    require(qs.size() * gs.size() <= 1'000'000, "alpha-min: grid too large");
    std::vector<AlphaResult> cells(qs.size() * gs.size());
    parallel_for(cells.size(), worker_count(),
                 [&](std::size_t i) { cells[i] = optimal_decay_rate(qs[i / gs.size()], gs[i % gs.size()]); });
    Table t{{"q", "gamma", "alpha_min", "k_star"}, {}};
    for (std::size_t i = 0; i < cells.size(); ++i) {
        t.rows.push_back({qs[i / gs.size()], gs[i % gs.size()], cells[i].alpha_min, cells[i].k_star});
    }
    return {render_table(t, cfg, format)};
}

std::unique_ptr<AttackStrategy> make_strategy(const Config &cfg, const TestParams &params) {
    const std::string &name = cfg.at("strategy");
    if (name == "classical") {
        return classical_endpoint_strategy();
    }
    if (name == "curve") {
        const double t = get_double(cfg, "t");
        require(t >= 0.0 && t <= 1.0, "simulate: t must lie in [0, 1]");
        return curve_strategy(t);
    }
    if (name == "optimal") {
        return optimal_curve_strategy(params.q, params.gamma.value());
    }
    if (name == "fixed") {
        return std::make_unique<FixedLawStrategy>(RoundLaw{get_double(cfg, "p_live"), get_double(cfg, "p_test")},
                                                  get_bool(cfg, "admissible"));
    }
    if (name == "quantum") {
        if (!cfg.at("setup").empty()) {
            return std::make_unique<QuantumStrategy>(quantum_model_from_json(read_json_file(cfg.at("setup"))));
        }
        const double theta = get_double(cfg, "theta");
        require(theta > 0.0 && theta <= std::numbers::pi / 2.0 + 1e-12, "simulate: theta must lie in (0, pi/2]");
        return std::make_unique<QuantumStrategy>(bisector_model(std::min(theta, std::numbers::pi / 2.0)));
    }
    throw ValidationError("simulate: unknown strategy '" + name + "' (classical|curve|optimal|fixed|quantum)");
}

Result cmd_simulate(const Config &cfg, const std::string &format, std::uint64_t seed) {
    TestParams params;
    params.q = get_double(cfg, "q");
    params.gamma = Threshold::parse(cfg.at("gamma"));
    params.rounds = get_u64(cfg, "n");
    params.validate();
    const std::uint64_t trials = get_u64(cfg, "trials");
    require(trials >= 1, "simulate: trials must be >= 1");
    const auto strategy = make_strategy(cfg, params);

    if (!cfg.at("transcript").empty()) {
        const Transcript tr = run_sequential_attack(params, *strategy, seed);
        std::ofstream f(cfg.at("transcript"), std::ios::binary);
        require(static_cast<bool>(f), "cannot write '" + cfg.at("transcript") + "'");
        f << transcript_to_jsonl(tr);
    }

    const MonteCarloReport rep = monte_carlo_failure(params, *strategy, trials, seed);
    Result r;
    r.code = rep.bound_violated ? kExitViolation : kExitOk;
    if (format == "json") {
        Json out;
        out["config"] = config_json(cfg);
        out["report"] = report_to_json(rep);
        r.text = out.dump(2) + "\n";
    } else {
        Table t{{"q", "gamma", "n", "trials", "failures", "passes", "p_hat", "ci_low", "ci_high", "bound", "p_pass_hat",
                 "conditional_rate"},
                {{params.q, params.gamma.value(), static_cast<double>(params.rounds), static_cast<double>(trials),
                  static_cast<double>(rep.failures), static_cast<double>(rep.passes), rep.p_hat, rep.ci_low,
                  rep.ci_high, rep.bound, rep.p_pass_hat, rep.conditional_rate}}};
        r.text = render_table(t, cfg, format);
    }
    return r;
}

Result cmd_verify(const Config &cfg, const std::string &format, std::uint64_t seed) {
    VerifyOptions options;
    options.seed = seed;
    if (!cfg.at("setup").empty()) {
        options.setup = setup_from_json(read_json_file(cfg.at("setup")));
    }
    const auto checks = run_verification(options);
    const bool all = std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
    Result r;
    r.code = all ? kExitOk : kExitViolation;
    if (format == "json") {
        Json out;
        out["config"] = config_json(cfg);
        Json list = Json::array();
        for (const auto &c : checks) {
            Json item;
            item["name"] = c.name;
            item["passed"] = c.passed;
            item["detail"] = c.detail;
            list.push_back(item);
        }
        out["checks"] = list;
        out["passed"] = all;
        r.text = out.dump(2) + "\n";
    } else {
        for (const auto &[k, v] : cfg) {
            r.text += "# " + k + "=" + v + "\n";
        }
        r.text += "check,status,detail\n";
        for (const auto &c : checks) {
            r.text += c.name + "," + (c.passed ? "pass" : "fail") + "," + c.detail + "\n";
        }
    }
    return r;
}

struct Command {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, std::string>> keys;
    std::string default_format;
    std::function<Result(const Config &, const std::string &, std::uint64_t)> run;
};

std::vector<Command> commands() {
    return {
        {"bounds",
         "min-entropy rate f(beta) against the CHSH value",
         {{"beta_min", "2"}, {"beta_max", "2.8284271247461903"}, {"points", "100"}},
         "csv",
         [](const Config &c, const std::string &f, std::uint64_t) { return cmd_bounds(c, f); }},
        {"tradeoff",
         "live-round versus test-round winning probability curve",
         {{"samples", "1000"}},
         "csv",
         [](const Config &c, const std::string &f, std::uint64_t) { return cmd_tradeoff(c, f); }},
        {"alpha-min",
         "decay rate alpha_min over a (q, gamma) grid",
         {{"q_min", "0"},
          {"q_max", "1"},
          {"q_points", "11"},
          {"gamma_min", "0.75"},
          {"gamma_max", "1"},
          {"gamma_points", "11"}},
         "csv",
         [](const Config &c, const std::string &f, std::uint64_t) { return cmd_alpha_min(c, f); }},
        {"simulate",
         "Monte-Carlo failure probability of a sequential attack",
         {{"q", "0.5"},
          {"gamma", "0.85"},
          {"n", "20"},
          {"trials", "10000"},
          {"strategy", "optimal"},
          {"t", "1"},
          {"p_live", "1"},
          {"p_test", "0.75"},
          {"admissible", "true"},
          {"theta", "1.5707963267948966"},
          {"setup", ""},
          {"transcript", ""}},
         "json",
         cmd_simulate},
        {"verify", "run the built-in self-checks", {{"setup", ""}}, "csv", cmd_verify},
    };
}

} // namespace

std::map<std::string, std::string> parse_config(const std::string &text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        require(eq != std::string::npos, "config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = underscore(trim(std::string_view(body).substr(0, eq)));
        require(!key.empty(), "config line " + std::to_string(lineno) + ": empty key");
        out[key] = trim(std::string_view(body).substr(eq + 1));
    }
    return out;
}

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Device-independent weak string erasure: security bounds and simulation", "wse_di"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "wse_di 1.0.0");

    const auto cmds = commands();
    struct Parsed {
        std::string config_path;
        std::uint64_t seed = 1;
        std::string out_path;
        std::string format;
        std::map<std::string, std::string> overrides;
        std::map<std::string, CLI::Option *> options;
    };
    std::vector<Parsed> parsed(cmds.size());
    std::vector<CLI::App *> subs;
    for (std::size_t i = 0; i < cmds.size(); ++i) {
        auto *sub = app.add_subcommand(cmds[i].name, cmds[i].description);
        auto &p = parsed[i];
        p.format = cmds[i].default_format;
        sub->add_option("--config", p.config_path, "flat key=value file");
        sub->add_option("--seed", p.seed, "master seed")->capture_default_str();
        sub->add_option("--out", p.out_path, "output file (default: stdout)");
        sub->add_option("--format", p.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}))
            ->capture_default_str();
        for (const auto &[key, def] : cmds[i].keys) {
            p.options[key] = sub->add_option("--" + dash(key), p.overrides[key], "default: " + (def.empty() ? "-" : def));
        }
        subs.push_back(sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitValidation;
    }

    for (std::size_t i = 0; i < cmds.size(); ++i) {
        if (!subs[i]->parsed()) {
            continue;
        }
        const auto &cmd = cmds[i];
        const auto &p = parsed[i];
        try {
            Config cfg;
            for (const auto &[key, def] : cmd.keys) {
                cfg[key] = def;
            }
            cfg["seed"] = std::to_string(p.seed);
            if (!p.config_path.empty()) {
                for (auto &[key, value] : parse_config(read_file(p.config_path))) {
                    require(cfg.count(key) == 1, "config: unknown key '" + key + "' for " + cmd.name);
                    cfg[key] = value;
                }
            }
            if (subs[i]->get_option("--seed")->count() > 0) {
                cfg["seed"] = std::to_string(p.seed);
            }
            for (const auto &[key, opt] : p.options) {
                if (opt->count() > 0) {
                    cfg[key] = p.overrides.at(key);
                }
            }
            const std::uint64_t seed = get_u64(cfg, "seed");
            cfg["seed"] = std::to_string(seed);

            const Result r = cmd.run(cfg, p.format, seed);
            if (p.out_path.empty()) {
                out << r.text;
                out.flush();
            } else {
                std::ofstream f(p.out_path, std::ios::binary);
                require(static_cast<bool>(f), "cannot write '" + p.out_path + "'");
                f << r.text;
                require(static_cast<bool>(f), "write failed for '" + p.out_path + "'");
            }
            if (r.code == kExitViolation) {
                err << "wse_di " << cmd.name << ": bound violation or failed check\n";
            }
            return r.code;
        } catch (const ValidationError &e) {
            err << "wse_di " << cmd.name << ": " << e.what() << "\n";
            return kExitValidation;
        } catch (const nlohmann::json::exception &e) {
            err << "wse_di " << cmd.name << ": " << e.what() << "\n";
            return kExitValidation;
        }
    }
    return kExitValidation;
}

} // namespace wse
