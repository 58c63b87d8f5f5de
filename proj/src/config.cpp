#include "ambdg/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace ambdg {

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::AmbDg: return "ambdg";
        case Scheme::Amb: return "amb";
        case Scheme::KBatchAsync: return "kbatch_async";
        case Scheme::Decentralized: return "decentralized";
    }
    return "?";
}

Scheme scheme_from_name(const std::string& name) {
    if (name == "ambdg") return Scheme::AmbDg;
    if (name == "amb") return Scheme::Amb;
    if (name == "kbatch_async") return Scheme::KBatchAsync;
    if (name == "decentralized") return Scheme::Decentralized;
    throw ConfigError("unknown scheme '" + name + "'");
}

long ExperimentConfig::scheme_tau() const {
    if (scheme == Scheme::Amb) return 0;
    if (t_c <= 0.0) return 0;
    return static_cast<long>(std::ceil(t_c / t_p - 1e-9));
}

namespace {

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? "" : s.substr(b, e - b + 1);
}

struct Entry {
    std::string value;
    int line = 0;
};

struct ParsedFile {
    std::map<std::string, Entry> kv;        // effective (global + active sections)
    std::string origin;
};

[[noreturn]] void fail(const ParsedFile& f, const std::string& key, const std::string& why, int line = 0) {
    std::ostringstream os;
    os << f.origin;
    if (line > 0) os << ":" << line;
    os << ": field '" << key << "': " << why;
    throw ConfigError(os.str());
}

double to_double(const ParsedFile& f, const std::string& key, const Entry& e) {
    try {
        std::size_t pos = 0;
        double v = std::stod(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(f, key, "expected a number, got '" + e.value + "'", e.line);
    }
}

long to_long(const ParsedFile& f, const std::string& key, const Entry& e) {
    try {
        std::size_t pos = 0;
        long v = std::stol(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(f, key, "expected an integer, got '" + e.value + "'", e.line);
    }
}

std::uint64_t to_u64(const ParsedFile& f, const std::string& key, const Entry& e) {
    try {
        std::size_t pos = 0;
        std::uint64_t v = std::stoull(e.value, &pos);
        if (pos != e.value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        fail(f, key, "expected an unsigned 64-bit integer, got '" + e.value + "'", e.line);
    }
}

bool to_bool(const ParsedFile& f, const std::string& key, const Entry& e) {
    if (e.value == "true" || e.value == "1") return true;
    if (e.value == "false" || e.value == "0") return false;
    fail(f, key, "expected true/false, got '" + e.value + "'", e.line);
}

const char* kKnownKeys[] = {
    "scheme", "n", "d", "T_p", "T_c", "b", "lambda", "xi", "noise_var",
    "step_lipschitz", "step_bbar", "step_tau",
    "horizon_updates", "horizon_seconds", "replications", "root_seed",
    "deterministic_timing", "record_for_regret", "targets",
    "K", "b_tilde",
    "graph", "rounds", "t_round", "delta", "exact_consensus",
    "J", "L", "C", "sigma2", "b_hat",
};

bool known_key(const std::string& k) {
    return std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                        [&](const char* s) { return k == s; }) != std::end(kKnownKeys);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text, const std::string& origin) {
    ParsedFile f;
    f.origin = origin;

    // first pass: find the scheme so we know which sections apply
    std::string scheme_value = "ambdg";
    {
        std::istringstream is(text);
        std::string line;
        std::string section;
        while (std::getline(is, line)) {
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) continue;
            if (trim(line.substr(0, eq)) == "scheme") scheme_value = trim(line.substr(eq + 1));
        }
    }

    {
        std::istringstream is(text);
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(is, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            line = trim(line);
            if (line.empty()) continue;
            if (line.front() == '[') {
                if (line.back() != ']')
                    throw ConfigError(origin + ":" + std::to_string(lineno) + ": malformed section header");
                section = trim(line.substr(1, line.size() - 2));
                continue;
            }
            auto eq = line.find('=');
            if (eq == std::string::npos)
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (!known_key(key))
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": unknown field '" + key + "'");
            // section keys apply only to the matching scheme; [bounds] always applies
            if (!section.empty() && section != "bounds" && section != scheme_value) continue;
            f.kv[key] = Entry{value, lineno};
            if (section == "bounds") f.kv["__bounds_present"] = Entry{"1", lineno};
        }
    }

    ExperimentConfig cfg;
    auto has = [&](const char* k) { return f.kv.count(k) > 0; };
    auto get = [&](const char* k) -> const Entry& { return f.kv.at(k); };

    if (has("scheme")) {
        try {
            cfg.scheme = scheme_from_name(get("scheme").value);
        } catch (const ConfigError& e) {
            fail(f, "scheme", e.what(), get("scheme").line);
        }
    }
    if (has("n")) cfg.n = static_cast<int>(to_long(f, "n", get("n")));
    if (has("d")) cfg.d = static_cast<int>(to_long(f, "d", get("d")));
    if (has("T_p")) cfg.t_p = to_double(f, "T_p", get("T_p"));
    if (has("T_c")) cfg.t_c = to_double(f, "T_c", get("T_c"));
    if (has("b")) cfg.b = to_long(f, "b", get("b"));
    if (has("lambda")) cfg.lambda = to_double(f, "lambda", get("lambda"));
    if (has("xi")) cfg.xi = to_double(f, "xi", get("xi"));
    if (has("noise_var")) cfg.noise_var = to_double(f, "noise_var", get("noise_var"));
    if (has("step_lipschitz")) cfg.step_lipschitz = to_double(f, "step_lipschitz", get("step_lipschitz"));
    if (has("step_bbar")) cfg.step_bbar = to_double(f, "step_bbar", get("step_bbar"));
    if (has("step_tau")) cfg.step_tau = to_long(f, "step_tau", get("step_tau"));
    if (has("horizon_updates")) cfg.horizon_updates = to_long(f, "horizon_updates", get("horizon_updates"));
    if (has("horizon_seconds")) cfg.horizon_seconds = to_double(f, "horizon_seconds", get("horizon_seconds"));
    if (has("replications")) cfg.replications = static_cast<int>(to_long(f, "replications", get("replications")));
    if (has("root_seed")) {
        cfg.root_seed = to_u64(f, "root_seed", get("root_seed"));
        cfg.seed_set = true;
    }
    if (has("deterministic_timing")) cfg.deterministic_timing = to_bool(f, "deterministic_timing", get("deterministic_timing"));
    if (has("record_for_regret")) cfg.record_for_regret = to_bool(f, "record_for_regret", get("record_for_regret"));
    if (has("K")) cfg.kbatch_k = to_long(f, "K", get("K"));
    if (has("b_tilde")) cfg.b_tilde = to_long(f, "b_tilde", get("b_tilde"));
    if (has("graph")) cfg.graph_path = get("graph").value;
    if (has("rounds")) cfg.consensus_rounds = to_long(f, "rounds", get("rounds"));
    if (has("t_round")) cfg.t_round = to_double(f, "t_round", get("t_round"));
    if (has("delta")) cfg.delta = to_double(f, "delta", get("delta"));
    if (has("exact_consensus")) cfg.exact_consensus = to_bool(f, "exact_consensus", get("exact_consensus"));
    if (has("J")) { cfg.bnd_j = to_double(f, "J", get("J")); cfg.bound_j = cfg.bnd_j; }
    if (has("L")) cfg.bnd_l = to_double(f, "L", get("L"));
    if (has("C")) cfg.bnd_c = to_double(f, "C", get("C"));
    if (has("sigma2")) cfg.bnd_sigma2 = to_double(f, "sigma2", get("sigma2"));
    if (has("b_hat")) cfg.bnd_b_hat = to_double(f, "b_hat", get("b_hat"));
    cfg.bounds_set = f.kv.count("__bounds_present") > 0;
    if (has("targets")) {
        cfg.targets.clear();
        std::istringstream ts(get("targets").value);
        std::string tok;
        while (std::getline(ts, tok, ',')) {
            tok = trim(tok);
            if (tok.empty()) continue;
            try {
                cfg.targets.push_back(std::stod(tok));
            } catch (...) {
                fail(f, "targets", "expected comma-separated numbers", get("targets").line);
            }
        }
        if (cfg.targets.empty()) fail(f, "targets", "no targets given", get("targets").line);
    }

    if (!cfg.seed_set)
        throw ConfigError(origin + ": field 'root_seed': required but missing");

    validate_config(cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

void validate_config(const ExperimentConfig& cfg) {
    auto bad = [](const std::string& key, const std::string& why) {
        throw ConfigError("field '" + key + "': " + why);
    };
    if (cfg.n < 1) bad("n", "must be >= 1");
    if (cfg.d < 1) bad("d", "must be >= 1");
    if (cfg.t_p <= 0.0) bad("T_p", "must be > 0");
    if (cfg.t_c < 0.0) bad("T_c", "must be >= 0");
    if (cfg.b < 1) bad("b", "must be >= 1");
    if (cfg.lambda <= 0.0) bad("lambda", "must be > 0");
    if (cfg.xi < 0.0) bad("xi", "must be >= 0");
    if (cfg.noise_var < 0.0) bad("noise_var", "must be >= 0");
    if (cfg.step_lipschitz < 0.0) bad("step_lipschitz", "must be >= 0");
    if (cfg.step_bbar < 0.0) bad("step_bbar", "must be >= 0");
    if (cfg.step_tau < -1) bad("step_tau", "must be >= 0 (or -1 for scheme default)");
    if (cfg.replications < 1) bad("replications", "must be >= 1");

    const bool has_u = cfg.horizon_updates > 0;
    const bool has_s = cfg.horizon_seconds > 0.0;
    if (has_u == has_s)
        bad("horizon_updates/horizon_seconds", "exactly one horizon must be set");

    if (cfg.scheme == Scheme::AmbDg || cfg.scheme == Scheme::Amb) {
        // the analysis assumes T_c is an integer multiple of T_p
        if (cfg.t_c > 0.0) {
            const double ratio = cfg.t_c / cfg.t_p;
            if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
                bad("T_c", "must be an integer multiple of T_p for scheme " + scheme_name(cfg.scheme));
        }
    }
    if (cfg.scheme == Scheme::KBatchAsync) {
        if (cfg.kbatch_k < 1) bad("K", "must be >= 1 for kbatch_async");
        if (cfg.b_tilde < 1) bad("b_tilde", "must be >= 1 for kbatch_async");
        if (cfg.b_tilde % cfg.kbatch_k != 0) bad("K", "must divide b_tilde");
    }
    if (cfg.scheme == Scheme::Decentralized) {
        if (cfg.graph_path.empty()) bad("graph", "required for decentralized scheme");
        if (cfg.t_round < 0.0) bad("t_round", "must be >= 0");
        if (cfg.consensus_rounds < 0) bad("rounds", "must be >= 0 (0 = derive from delta)");
        if (cfg.consensus_rounds == 0 && cfg.delta <= 0.0)
            bad("delta", "must be > 0 when rounds = 0 (rounds derived from the consensus bound)");
    }
    for (double t : cfg.targets)
        if (t <= 0.0) bad("targets", "targets must be > 0");
}

}  // namespace ambdg
