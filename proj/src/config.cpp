#include "irclab/config.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "irclab/errors.hpp"

namespace irclab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyValue {
    std::string value;
    int line = 0;
};

double parse_double(const std::string& key, const KeyValue& kv) {
    size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(kv.value, &used);
    } catch (const std::exception&) {
        throw validation_error("config line " + std::to_string(kv.line) + ": key '" + key +
                               "' is not a number");
    }
    if (used != kv.value.size())
        throw validation_error("config line " + std::to_string(kv.line) + ": key '" + key +
                               "' has trailing characters");
    return v;
}

int parse_int(const std::string& key, const KeyValue& kv) {
    const double v = parse_double(key, kv);
    const int i = static_cast<int>(v);
    if (static_cast<double>(i) != v)
        throw validation_error("config line " + std::to_string(kv.line) + ": key '" + key +
                               "' must be an integer");
    return i;
}

std::vector<double> parse_list(const std::string& key, const KeyValue& kv) {
    std::vector<double> out;
    std::stringstream ss(kv.value);
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        size_t used = 0;
        try {
            out.push_back(std::stod(tok, &used));
        } catch (const std::exception&) {
            used = std::string::npos;
        }
        if (used != tok.size())
            throw validation_error("config line " + std::to_string(kv.line) + ": key '" + key +
                                   "' has a malformed list entry '" + tok + "'");
    }
    return out;
}

const std::map<std::string, std::vector<std::string>> kRequired = {
    {"bounds", {"alpha", "beta", "gamma"}},
    {"sweep", {"beta", "gamma", "alpha_min", "alpha_max", "alpha_step"}},
    {"ld-sim", {"nd", "nc", "nr", "ns", "blocks"}},
    {"gauss-opt", {}}, // gains or pattern, checked separately
    {"gdof-est", {"alpha", "beta", "gamma", "snr_list"}},
};

const std::map<std::string, std::vector<std::string>> kOptional = {
    {"bounds", {}},
    {"sweep", {}},
    {"ld-sim", {"allocation"}},
    {"gauss-opt", {"hd", "hc", "hr", "hs", "power", "alpha", "beta", "gamma", "snr", "w_splits",
                   "l_splits", "tol", "step_init", "step_min", "restarts", "seed_exponents"}},
    {"gdof-est", {"w_splits", "l_splits", "tol", "step_init", "step_min", "restarts",
                  "seed_exponents"}},
};

std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        out += v[i];
    }
    return out;
}

} // namespace

RunConfig parse_config(const std::string& text) {
    std::map<std::string, KeyValue> kv;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": expected key = value");
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty())
            throw validation_error("config line " + std::to_string(lineno) +
                                   ": empty key or value");
        if (kv.count(key))
            throw validation_error("config line " + std::to_string(lineno) + ": duplicate key '" +
                                   key + "'");
        kv[key] = {value, lineno};
    }

    if (!kv.count("command"))
        throw validation_error(
            "config: missing 'command'; one of bounds, sweep, ld-sim, gauss-opt, gdof-est; "
            "required keys per command: bounds: " + join(kRequired.at("bounds")) +
            "; sweep: " + join(kRequired.at("sweep")) + "; ld-sim: " + join(kRequired.at("ld-sim")) +
            "; gauss-opt: gains (hd,hc,hr,hs,power) or pattern (alpha,beta,gamma,snr)" +
            "; gdof-est: " + join(kRequired.at("gdof-est")));

    const std::string cmd = kv.at("command").value;
    if (!kRequired.count(cmd))
        throw validation_error("config: unknown command '" + cmd + "'");

    // strict key check
    for (const auto& [key, v] : kv) {
        if (key == "command") continue;
        const auto& req = kRequired.at(cmd);
        const auto& opt = kOptional.at(cmd);
        if (std::find(req.begin(), req.end(), key) == req.end() &&
            std::find(opt.begin(), opt.end(), key) == opt.end())
            throw validation_error("config line " + std::to_string(v.line) + ": unknown key '" +
                                   key + "' for command " + cmd);
    }
    std::vector<std::string> missing;
    for (const auto& key : kRequired.at(cmd))
        if (!kv.count(key)) missing.push_back(key);
    if (!missing.empty())
        throw validation_error("config: command " + cmd + " is missing required keys: " +
                               join(missing));

    RunConfig cfg;
    auto num = [&](const std::string& key) { return parse_double(key, kv.at(key)); };
    auto integer = [&](const std::string& key) { return parse_int(key, kv.at(key)); };

    if (cmd == "bounds") {
        cfg.command = RunConfig::Command::Bounds;
        cfg.alpha = num("alpha");
        cfg.beta = num("beta");
        cfg.gamma = num("gamma");
        if (cfg.alpha < 0 || cfg.beta < 0 || cfg.gamma < 0)
            throw validation_error("config: exponents must be nonnegative");
    } else if (cmd == "sweep") {
        cfg.command = RunConfig::Command::Sweep;
        cfg.beta = num("beta");
        cfg.gamma = num("gamma");
        cfg.alpha_min = num("alpha_min");
        cfg.alpha_max = num("alpha_max");
        cfg.alpha_step = num("alpha_step");
        if (cfg.alpha_step <= 0) throw validation_error("config: alpha_step must be positive");
    } else if (cmd == "ld-sim") {
        cfg.command = RunConfig::Command::LdSim;
        cfg.nd = integer("nd");
        cfg.nc = integer("nc");
        cfg.nr = integer("nr");
        cfg.ns = integer("ns");
        cfg.blocks = integer("blocks");
        if (cfg.nd < 0 || cfg.nc < 0 || cfg.nr < 0 || cfg.ns < 0)
            throw validation_error("config: channel levels must be nonnegative");
        if (cfg.blocks < 2) throw validation_error("config: blocks must be at least 2");
        if (kv.count("allocation")) {
            cfg.allocation = kv.at("allocation").value;
            if (cfg.allocation != "toy" && cfg.allocation != "auto" && cfg.allocation != "search")
                throw validation_error("config: allocation must be toy, auto, or search");
        }
    } else if (cmd == "gauss-opt") {
        cfg.command = RunConfig::Command::GaussOpt;
        const bool gains = kv.count("hd") || kv.count("hc") || kv.count("hr") || kv.count("hs") ||
                           kv.count("power");
        const bool pattern = kv.count("alpha") || kv.count("beta") || kv.count("gamma") ||
                             kv.count("snr");
        if (gains == pattern)
            throw validation_error("config: gauss-opt needs either gains "
                                   "(hd,hc,hr,hs,power) or a pattern (alpha,beta,gamma,snr)");
        if (gains) {
            for (const char* k : {"hd", "hc", "hr", "hs", "power"})
                if (!kv.count(k))
                    throw validation_error(std::string("config: gauss-opt gains need key '") + k +
                                           "'");
            cfg.has_gains = true;
            cfg.hd = num("hd");
            cfg.hc = num("hc");
            cfg.hr = num("hr");
            cfg.hs = num("hs");
            cfg.power = num("power");
            if (cfg.power <= 0) throw validation_error("config: power must be positive");
        } else {
            for (const char* k : {"alpha", "beta", "gamma", "snr"})
                if (!kv.count(k))
                    throw validation_error(std::string("config: gauss-opt pattern needs key '") +
                                           k + "'");
            cfg.has_snr = true;
            cfg.alpha = num("alpha");
            cfg.beta = num("beta");
            cfg.gamma = num("gamma");
            cfg.snr = num("snr");
            if (cfg.snr <= 1) throw validation_error("config: snr must exceed 1");
        }
    } else {
        cfg.command = RunConfig::Command::GdofEst;
        cfg.alpha = num("alpha");
        cfg.beta = num("beta");
        cfg.gamma = num("gamma");
        cfg.snr_list = parse_list("snr_list", kv.at("snr_list"));
        if (cfg.snr_list.size() < 2)
            throw validation_error("config: snr_list needs at least two points");
    }

    if (kv.count("w_splits")) cfg.W = parse_int("w_splits", kv.at("w_splits"));
    if (kv.count("l_splits")) cfg.L = parse_int("l_splits", kv.at("l_splits"));
    if (kv.count("tol")) cfg.tol = parse_double("tol", kv.at("tol"));
    if (kv.count("step_init")) cfg.step_init = parse_double("step_init", kv.at("step_init"));
    if (kv.count("step_min")) cfg.step_min = parse_double("step_min", kv.at("step_min"));
    if (kv.count("restarts")) cfg.restarts = parse_int("restarts", kv.at("restarts"));
    if (kv.count("seed_exponents"))
        cfg.seed_exponents = parse_list("seed_exponents", kv.at("seed_exponents"));
    if (cfg.W < 1 || cfg.W > 8 || cfg.L < 1 || cfg.L > 8)
        throw validation_error("config: split counts must be in 1..8");
    if (cfg.tol <= 0) throw validation_error("config: tol must be positive");
    if (cfg.step_init <= 0 || cfg.step_min <= 0 || cfg.step_min > cfg.step_init)
        throw validation_error("config: need 0 < step_min <= step_init");
    if (cfg.restarts < 0 || cfg.restarts > 64)
        throw validation_error("config: restarts must be in 0..64");
    return cfg;
}

} // namespace irclab::cli
