#include "fracsum/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "fracsum/errors.hpp"
#include "fracsum/kernel.hpp"

namespace fracsum {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void fail(int line, const std::string& what) {
    throw ConfigError("line " + std::to_string(line) + ": " + what, line);
}

double parse_double(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters after number '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

std::size_t parse_size(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size() || x < 0) fail(line, "expected a non-negative integer, got '" + v + "'");
        return static_cast<std::size_t>(x);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "expected a non-negative integer, got '" + v + "'");
    }
}

long parse_long(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long x = std::stol(v, &pos);
        if (pos != v.size()) fail(line, "expected an integer, got '" + v + "'");
        return x;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "yes" || v == "1") return true;
    if (v == "false" || v == "no" || v == "0") return false;
    fail(line, "expected a boolean (true/false), got '" + v + "'");
}

std::vector<double> parse_doubles(const std::string& v, int line) {
    std::vector<double> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_double(tok, line));
    if (out.empty()) fail(line, "expected at least one number");
    return out;
}

std::vector<std::size_t> parse_sizes(const std::string& v, int line) {
    std::vector<std::size_t> out;
    std::istringstream ss(v);
    std::string tok;
    while (ss >> tok) out.push_back(parse_size(tok, line));
    if (out.empty()) fail(line, "expected at least one integer");
    return out;
}

std::vector<std::vector<double>> parse_cw(const std::string& v, int line) {
    std::vector<std::vector<double>> out;
    std::string group;
    std::istringstream ss(v);
    while (std::getline(ss, group, '|')) out.push_back(parse_doubles(trim(group), line));
    if (out.empty()) fail(line, "expected at least one vector");
    return out;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join17(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ' ';
        out += fmt17(xs[i]);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream input(text);
    std::string raw;
    std::string section;
    int line = 0;

    while (std::getline(input, raw)) {
        ++line;
        const std::size_t cut = raw.find_first_of("#;");
        if (cut != std::string::npos) raw.erase(cut);
        const std::string s = trim(raw);
        if (s.empty()) continue;

        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "kernel" && section != "memory" && section != "innovation" &&
                section != "experiment")
                fail(line, "unknown section [" + section + "]");
            continue;
        }

        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (val.empty()) fail(line, "empty value for '" + key + "'");
        if (section.empty()) fail(line, "key '" + key + "' outside any section");

        if (section == "kernel") {
            if (key == "type") {
                if (val == "iid") cfg.kernel.type = KernelSpec::Type::iid;
                else if (val == "fractional") cfg.kernel.type = KernelSpec::Type::fractional;
                else if (val == "explicit") cfg.kernel.type = KernelSpec::Type::explicit_coeffs;
                else fail(line, "unknown kernel type '" + val + "'");
            } else if (key == "hurst") {
                cfg.kernel.hurst = parse_double(val, line);
            } else if (key == "truncation") {
                cfg.kernel.truncation = parse_size(val, line);
            } else if (key == "allow_truncation_override") {
                cfg.kernel.allow_truncation_override = parse_bool(val, line);
            } else if (key == "two_sided") {
                cfg.kernel.two_sided = parse_bool(val, line);
            } else if (key == "coeffs") {
                cfg.kernel.coeffs = parse_doubles(val, line);
            } else if (key == "k_min") {
                cfg.kernel.k_min = parse_long(val, line);
            } else {
                fail(line, "unknown key '" + key + "' in [kernel]");
            }
        } else if (section == "memory") {
            if (key == "nu") {
                cfg.memory.nu = parse_double(val, line);
            } else if (key == "form") {
                if (val == "constant") cfg.memory.form = SlowlyVarying::Form::constant;
                else if (val == "log_shift") cfg.memory.form = SlowlyVarying::Form::log_shift;
                else if (val == "bounded_rational")
                    cfg.memory.form = SlowlyVarying::Form::bounded_rational;
                else if (val == "tabulated") cfg.memory.form = SlowlyVarying::Form::tabulated;
                else fail(line, "unknown slowly varying form '" + val + "'");
            } else if (key == "c") {
                cfg.memory.c = parse_double(val, line);
            } else if (key == "c_inf") {
                cfg.memory.c_inf = parse_double(val, line);
            } else if (key == "b") {
                cfg.memory.b = parse_double(val, line);
            } else if (key == "table_t") {
                cfg.memory.table_t = parse_doubles(val, line);
            } else if (key == "table_v") {
                cfg.memory.table_v = parse_doubles(val, line);
            } else {
                fail(line, "unknown key '" + key + "' in [memory]");
            }
        } else if (section == "innovation") {
            if (key == "law") {
                if (val == "gaussian") cfg.innovation.law = InnovationModel::Law::gaussian;
                else if (val == "rademacher")
                    cfg.innovation.law = InnovationModel::Law::rademacher;
                else if (val == "student_t")
                    cfg.innovation.law = InnovationModel::Law::student_t;
                else fail(line, "unknown innovation law '" + val + "'");
            } else if (key == "df") {
                cfg.innovation.df = parse_double(val, line);
            } else {
                fail(line, "unknown key '" + key + "' in [innovation]");
            }
        } else {  // experiment
            if (key == "n_values") cfg.n_values = parse_sizes(val, line);
            else if (key == "trials") cfg.trials = parse_size(val, line);
            else if (key == "eval_times") cfg.eval_times = parse_doubles(val, line);
            else if (key == "cramer_wold") cfg.cramer_wold = parse_cw(val, line);
            else if (key == "master_seed")
                cfg.master_seed = static_cast<std::uint64_t>(parse_size(val, line));
            else if (key == "significance") cfg.significance = parse_double(val, line);
            else if (key == "seed_replicates") cfg.seed_replicates = parse_size(val, line);
            else if (key == "quad_points") cfg.quad_points = parse_size(val, line);
            else if (key == "fbm_grid") cfg.fbm_grid = parse_size(val, line);
            else if (key == "workers") cfg.workers = static_cast<int>(parse_size(val, line));
            else if (key == "cov_tolerance") cfg.cov_tolerance = parse_double(val, line);
            else if (key == "var_ratio_band") cfg.var_ratio_band = parse_double(val, line);
            else if (key == "delta_values") cfg.delta_values = parse_doubles(val, line);
            else if (key == "epsilon_values") cfg.epsilon_values = parse_doubles(val, line);
            else fail(line, "unknown key '" + key + "' in [experiment]");
        }
    }
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "[kernel]\n";
    switch (cfg.kernel.type) {
        case KernelSpec::Type::iid:
            out << "type = iid\n";
            break;
        case KernelSpec::Type::fractional: {
            out << "type = fractional\n";
            const std::size_t K = cfg.kernel.truncation == 0
                                      ? default_truncation_K(cfg.kernel.hurst)
                                      : cfg.kernel.truncation;
            out << "truncation = " << K << "\n";
            out << "allow_truncation_override = "
                << (cfg.kernel.allow_truncation_override ? "true" : "false") << "\n";
            out << "two_sided = " << (cfg.kernel.two_sided ? "true" : "false") << "\n";
            break;
        }
        case KernelSpec::Type::explicit_coeffs:
            out << "type = explicit\n";
            out << "coeffs = " << join17(cfg.kernel.coeffs) << "\n";
            out << "k_min = " << cfg.kernel.k_min << "\n";
            break;
    }
    out << "hurst = " << fmt17(cfg.kernel.hurst) << "\n";

    out << "\n[memory]\n";
    out << "nu = " << fmt17(cfg.memory.nu) << "\n";
    switch (cfg.memory.form) {
        case SlowlyVarying::Form::constant:
            out << "form = constant\n";
            out << "c = " << fmt17(cfg.memory.c) << "\n";
            break;
        case SlowlyVarying::Form::log_shift:
            out << "form = log_shift\n";
            break;
        case SlowlyVarying::Form::bounded_rational:
            out << "form = bounded_rational\n";
            out << "c_inf = " << fmt17(cfg.memory.c_inf) << "\n";
            out << "b = " << fmt17(cfg.memory.b) << "\n";
            break;
        case SlowlyVarying::Form::tabulated:
            out << "form = tabulated\n";
            out << "table_t = " << join17(cfg.memory.table_t) << "\n";
            out << "table_v = " << join17(cfg.memory.table_v) << "\n";
            break;
    }

    out << "\n[innovation]\n";
    switch (cfg.innovation.law) {
        case InnovationModel::Law::gaussian:
            out << "law = gaussian\n";
            break;
        case InnovationModel::Law::rademacher:
            out << "law = rademacher\n";
            break;
        case InnovationModel::Law::student_t:
            out << "law = student_t\n";
            out << "df = " << fmt17(cfg.innovation.df) << "\n";
            break;
    }

    out << "\n[experiment]\n";
    out << "n_values =";
    for (std::size_t n : cfg.n_values) out << ' ' << n;
    out << "\n";
    out << "trials = " << cfg.trials << "\n";
    out << "eval_times = " << join17(cfg.eval_times) << "\n";
    out << "cramer_wold = ";
    for (std::size_t i = 0; i < cfg.cramer_wold.size(); ++i) {
        if (i) out << " | ";
        out << join17(cfg.cramer_wold[i]);
    }
    out << "\n";
    out << "master_seed = " << cfg.master_seed << "\n";
    out << "significance = " << fmt17(cfg.significance) << "\n";
    out << "seed_replicates = " << cfg.seed_replicates << "\n";
    out << "quad_points = " << cfg.quad_points << "\n";
    out << "fbm_grid = " << cfg.fbm_grid << "\n";
    out << "workers = " << cfg.workers << "\n";
    out << "cov_tolerance = " << fmt17(cfg.cov_tolerance) << "\n";
    out << "var_ratio_band = " << fmt17(cfg.var_ratio_band) << "\n";
    out << "delta_values = " << join17(cfg.delta_values) << "\n";
    out << "epsilon_values = " << join17(cfg.epsilon_values) << "\n";
    return out.str();
}

}  // namespace fracsum
