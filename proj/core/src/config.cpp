#include "rpfcone/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "rpfcone/errors.hpp"

namespace rpfcone {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

TomlScalar parse_scalar(const std::string& tok, int line_no) {
    if (tok.empty()) throw ValidationError("empty value on line " + std::to_string(line_no));
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"')
            throw ValidationError("unterminated string on line " + std::to_string(line_no));
        return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    const bool floaty = tok.find_first_of(".eE") != std::string::npos &&
                        tok.find_first_not_of("+-0123456789.eE") == std::string::npos;
    try {
        std::size_t used = 0;
        if (!floaty) {
            std::int64_t v = std::stoll(tok, &used);
            if (used == tok.size()) return v;
        }
        double d = std::stod(tok, &used);
        if (used == tok.size()) return d;
    } catch (const std::exception&) {
    }
    throw ValidationError("cannot parse value '" + tok + "' on line " + std::to_string(line_no));
}

std::vector<std::string> split_csv(const std::string& body) {
    std::vector<std::string> out;
    std::string cur;
    bool in_str = false;
    for (char ch : body) {
        if (ch == '"') in_str = !in_str;
        if (ch == ',' && !in_str) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

double as_double(const TomlScalar& s, const std::string& key) {
    if (std::holds_alternative<double>(s)) return std::get<double>(s);
    if (std::holds_alternative<std::int64_t>(s))
        return static_cast<double>(std::get<std::int64_t>(s));
    throw ValidationError("key '" + key + "' must be a number");
}

std::int64_t as_int(const TomlScalar& s, const std::string& key) {
    if (std::holds_alternative<std::int64_t>(s)) return std::get<std::int64_t>(s);
    throw ValidationError("key '" + key + "' must be an integer");
}

std::string as_string(const TomlScalar& s, const std::string& key) {
    if (std::holds_alternative<std::string>(s)) return std::get<std::string>(s);
    throw ValidationError("key '" + key + "' must be a string");
}

// Tracks which keys the loader consumed so leftovers can be reported.
class SectionReader {
public:
    SectionReader(const TomlTable& t, std::string section) : section_(std::move(section)) {
        auto it = t.find(section_);
        if (it != t.end()) kv_ = &it->second;
    }
    bool present() const { return kv_ != nullptr; }

    bool has(const std::string& key) {
        if (!kv_) return false;
        auto it = kv_->find(key);
        if (it == kv_->end()) return false;
        seen_.insert(key);
        return true;
    }
    const TomlValue& get(const std::string& key) { return kv_->at(key); }

    double num(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return as_double(get(key).scalar, section_ + "." + key);
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        if (!has(key)) return fallback;
        return as_int(get(key).scalar, section_ + "." + key);
    }
    std::string str(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        return as_string(get(key).scalar, section_ + "." + key);
    }
    std::vector<double> num_array(const std::string& key) {
        std::vector<double> out;
        if (!has(key)) return out;
        const TomlValue& v = get(key);
        if (!v.is_array) throw ValidationError("key '" + section_ + "." + key + "' must be an array");
        for (const TomlScalar& s : v.array) out.push_back(as_double(s, section_ + "." + key));
        return out;
    }

    void reject_unknown(std::vector<std::string>& unknown) const {
        if (!kv_) return;
        for (const auto& [key, _] : *kv_)
            if (!seen_.count(key)) unknown.push_back(section_ + "." + key);
    }

private:
    std::string section_;
    const std::map<std::string, TomlValue>* kv_ = nullptr;
    std::set<std::string> seen_;
};

}  // namespace

TomlTable parse_toml_text(const std::string& text) {
    TomlTable table;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t hash = std::string::npos;
        bool in_str = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') in_str = !in_str;
            if (line[i] == '#' && !in_str) { hash = i; break; }
        }
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ValidationError("malformed section header on line " + std::to_string(line_no));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ValidationError("empty section name on line " + std::to_string(line_no));
            table[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("expected key = value on line " + std::to_string(line_no));
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ValidationError("expected key = value on line " + std::to_string(line_no));
        if (section.empty())
            throw ValidationError("key '" + key + "' appears before any [section]");
        TomlValue tv;
        if (val.front() == '[') {
            if (val.back() != ']')
                throw ValidationError("unterminated array on line " + std::to_string(line_no));
            tv.is_array = true;
            for (const std::string& tok : split_csv(val.substr(1, val.size() - 2)))
                tv.array.push_back(parse_scalar(tok, line_no));
        } else {
            tv.scalar = parse_scalar(val, line_no);
        }
        if (table[section].count(key))
            throw ValidationError("duplicate key '" + section + "." + key + "'");
        table[section][key] = std::move(tv);
    }
    return table;
}

ExperimentConfig load_config_text(const std::string& text) {
    TomlTable table = parse_toml_text(text);
    ExperimentConfig cfg;
    cfg.raw_text = text;

    static const std::set<std::string> known_sections = {
        "system", "discretization", "cone", "twist", "solver", "statistics", "output"};
    std::vector<std::string> unknown;
    for (const auto& [name, _] : table)
        if (!known_sections.count(name)) unknown.push_back("[" + name + "]");

    SectionReader sys(table, "system");
    if (!sys.present()) throw ValidationError("missing system block");
    cfg.system.kind = sys.str("kind", "");
    cfg.system.symbol_weights = sys.num_array("symbol_weights");
    cfg.system.branch_cuts = sys.num_array("branch_cuts");
    cfg.system.branch_log_weights = sys.num_array("branch_log_weights");
    cfg.system.tower_atoms = static_cast<int>(sys.integer("tower_atoms", cfg.system.tower_atoms));
    cfg.system.tower_q = sys.num("tower_q", cfg.system.tower_q);
    cfg.system.tower_p = sys.num("tower_p", cfg.system.tower_p);
    cfg.system.tower_beta = sys.num("tower_beta", cfg.system.tower_beta);

    SectionReader dis(table, "discretization");
    cfg.discretization.nodes = static_cast<int>(dis.integer("nodes", cfg.discretization.nodes));
    cfg.discretization.truncation_N = dis.integer("N", cfg.discretization.truncation_N);
    cfg.discretization.r_max = static_cast<int>(dis.integer("R_max", cfg.discretization.r_max));
    cfg.discretization.k_depth = static_cast<int>(dis.integer("K_depth", cfg.discretization.k_depth));
    cfg.discretization.shift_depth =
        static_cast<int>(dis.integer("depth", cfg.discretization.shift_depth));

    SectionReader cone(table, "cone");
    cfg.cone.a = cone.num("a", cfg.cone.a);
    cfg.cone.b = cone.num("b", cfg.cone.b);
    cfg.cone.c = cone.num("c", cfg.cone.c);
    cfg.cone.eps0 = cone.num("eps0", cfg.cone.eps0);
    cfg.cone.s = cone.num("s", cfg.cone.s);
    cfg.cone.Q = cone.num("Q", cfg.cone.Q);
    cfg.cone.alpha = cone.num("alpha", cfg.cone.alpha);
    cfg.cone.xi = cone.num("xi", cfg.cone.xi);

    SectionReader tw(table, "twist");
    cfg.twist.u = tw.str("u", cfg.twist.u);
    cfg.twist.coef = tw.num("coef", cfg.twist.coef);
    cfg.twist.symbol_values = tw.num_array("symbol_values");
    cfg.twist.rho = tw.num("rho", cfg.twist.rho);
    cfg.twist.k_points = static_cast<int>(tw.integer("k_points", cfg.twist.k_points));
    cfg.twist.z_re = tw.num_array("z_re");
    cfg.twist.z_im = tw.num_array("z_im");

    SectionReader sol(table, "solver");
    cfg.solver.tol = sol.num("tol", cfg.solver.tol);
    cfg.solver.max_iters = static_cast<int>(sol.integer("max_iters", cfg.solver.max_iters));
    cfg.solver.boundary = sol.str("boundary", cfg.solver.boundary);
    cfg.solver.window = static_cast<int>(sol.integer("window", cfg.solver.window));

    SectionReader st(table, "statistics");
    cfg.statistics.n = static_cast<int>(st.integer("n", cfg.statistics.n));
    cfg.statistics.trials = static_cast<int>(st.integer("trials", cfg.statistics.trials));
    cfg.statistics.seed = static_cast<std::uint64_t>(st.integer("seed", 1));

    SectionReader out(table, "output");
    cfg.output.dir = out.str("dir", cfg.output.dir);
    cfg.output.prefix = out.str("prefix", cfg.output.prefix);

    for (const SectionReader* r : {&sys, &dis, &cone, &tw, &sol, &st, &out})
        r->reject_unknown(unknown);
    if (!unknown.empty()) {
        std::string msg = "unknown configuration keys:";
        for (const std::string& k : unknown) msg += " " + k;
        throw ValidationError(msg);
    }

    // Structural validation before any computation.
    static const std::set<std::string> kinds = {"gauss", "doubling", "interval", "full-shift",
                                                "tower"};
    if (!kinds.count(cfg.system.kind))
        throw ValidationError("system.kind must be one of gauss|doubling|interval|full-shift|tower");
    if (cfg.discretization.nodes < 2) throw ValidationError("discretization.nodes must be >= 2");
    if (cfg.discretization.truncation_N < 1)
        throw ValidationError("discretization.N must be >= 1");
    if (cfg.solver.tol <= 0.0) throw ValidationError("solver.tol must be positive");
    if (cfg.solver.max_iters < 1) throw ValidationError("solver.max_iters must be >= 1");
    if (cfg.solver.boundary != "periodic" && cfg.solver.boundary != "truncated")
        throw ValidationError("solver.boundary must be periodic|truncated");
    if (cfg.solver.window < 1) throw ValidationError("solver.window must be >= 1");
    if (cfg.twist.rho <= 0.0) throw ValidationError("twist.rho must be positive");
    if (cfg.twist.k_points < 4) throw ValidationError("twist.k_points must be >= 4");
    if (cfg.twist.z_re.size() != cfg.twist.z_im.size())
        throw ValidationError("twist.z_re and twist.z_im must pair up");
    static const std::set<std::string> twists = {"zero", "constant", "log-x", "coordinate",
                                                 "first-symbol"};
    if (!twists.count(cfg.twist.u))
        throw ValidationError("twist.u must be one of zero|constant|log-x|coordinate|first-symbol");
    if (cfg.statistics.n < 1 || cfg.statistics.trials < 1)
        throw ValidationError("statistics.n and statistics.trials must be >= 1");
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_config_text(buf.str());
}

std::shared_ptr<const SystemStage> make_stage(const ExperimentConfig& cfg) {
    const SystemConfig& s = cfg.system;
    const DiscretizationConfig& d = cfg.discretization;
    if (s.kind == "gauss") return gauss_stage(d.nodes);
    if (s.kind == "doubling") return doubling_stage(d.nodes);
    if (s.kind == "interval") {
        if (s.branch_cuts.size() < 2)
            throw ValidationError("interval system needs branch_cuts (partition of [0,1))");
        std::vector<IntervalBranch> branches;
        for (std::size_t i = 0; i + 1 < s.branch_cuts.size(); ++i) {
            double lw = i < s.branch_log_weights.size()
                            ? s.branch_log_weights[i]
                            : std::log(s.branch_cuts[i + 1] - s.branch_cuts[i]);
            branches.push_back({s.branch_cuts[i], s.branch_cuts[i + 1], lw});
        }
        return interval_stage(branches, d.nodes);
    }
    if (s.kind == "full-shift") {
        if (s.symbol_weights.empty())
            throw ValidationError("full-shift system needs symbol_weights");
        return full_shift_stage(s.symbol_weights, d.shift_depth);
    }
    // tower
    TowerSpec spec = geometric_tower_spec(s.tower_atoms, d.k_depth);
    spec.q = s.tower_q;
    spec.p = s.tower_p;
    spec.beta = s.tower_beta;
    spec.r_max = d.r_max;
    return tower_build(spec);
}

Potential make_potential(const ExperimentConfig& cfg, const std::shared_ptr<const Grid>& grid) {
    const TwistConfig& t = cfg.twist;
    if (t.u == "zero") return Potential::zero();
    if (t.u == "constant") return Potential::constant(t.coef);
    if (t.u == "log-x") return Potential::log_x(t.coef);
    if (t.u == "coordinate") return Potential::coordinate();
    // first-symbol
    if (t.symbol_values.empty())
        throw ValidationError("first-symbol twist needs symbol_values");
    if (grid && grid->kind != GridKind::IntervalCollocation &&
        t.symbol_values.size() != static_cast<std::size_t>(grid->n_symbols))
        throw ValidationError("twist.symbol_values length must match the symbol alphabet");
    return Potential::first_symbol(t.symbol_values);
}

std::uint64_t config_hash(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace rpfcone
