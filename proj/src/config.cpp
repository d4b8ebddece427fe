#include "bmeter/config.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "bmeter/csv.hpp"

namespace bmeter::config {

namespace {

const std::set<std::string> kModelKeys = {"family", "g",      "a", "c",
                                          "probes", "lambda", "s", "omega_c"};
const std::set<std::string> kSystemKeys = {"energies", "rho0", "temperature"};
const std::set<std::string> kRunKeys = {
    "out",    "t_max",    "t_points", "t_values", "t0",       "p_min",
    "p_max",  "p_points", "u",        "probe_index", "g_values", "t0_values",
    "rel_tol", "abs_tol",  "threads"};

struct Entry {
    std::string value;
    int line;
    int col; // column of the value
};

using Sections = std::map<std::string, std::map<std::string, Entry>>;

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const Entry& e) {
    try {
        std::size_t used = 0;
        const double v = std::stod(e.value, &used);
        if (trim(e.value.substr(used)).empty()) return v;
    } catch (...) {
    }
    throw ConfigError("expected a number, got '" + e.value + "'", e.line, e.col);
}

std::size_t parse_size(const Entry& e) {
    const double v = parse_double(e);
    if (v < 0 || v != std::floor(v))
        throw ConfigError("expected a nonnegative integer", e.line, e.col);
    return static_cast<std::size_t>(v);
}

std::vector<double> parse_double_list(const Entry& e) {
    std::vector<double> out;
    std::istringstream is(e.value);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::runtime_error("");
        } catch (...) {
            throw ConfigError("expected a number list, got '" + tok + "'", e.line, e.col);
        }
    }
    if (out.empty()) throw ConfigError("empty number list", e.line, e.col);
    return out;
}

/// Complex literal: "1.5", "0.5+0.25i", "-2i", "3-1i".
std::complex<double> parse_complex_token(const std::string& tok, const Entry& e) {
    const std::string t = trim(tok);
    if (t.empty()) throw ConfigError("empty complex literal", e.line, e.col);
    if (t.back() != 'i' && t.back() != 'I') {
        try {
            std::size_t used = 0;
            const double v = std::stod(t, &used);
            if (used == t.size()) return {v, 0.0};
        } catch (...) {
        }
        throw ConfigError("bad complex literal '" + t + "'", e.line, e.col);
    }
    const std::string body = t.substr(0, t.size() - 1);
    // split a trailing signed imaginary part from an optional real part
    std::size_t split = std::string::npos;
    for (std::size_t i = body.size(); i-- > 1;) {
        if ((body[i] == '+' || body[i] == '-') &&
            body[i - 1] != 'e' && body[i - 1] != 'E') {
            split = i;
            break;
        }
    }
    try {
        if (split == std::string::npos) {
            const std::string im = body.empty() ? "1" : (body == "-" || body == "+")
                                                            ? body + "1"
                                                            : body;
            return {0.0, std::stod(im)};
        }
        const double re = std::stod(body.substr(0, split));
        std::string im = body.substr(split);
        if (im == "+" || im == "-") im += "1";
        return {re, std::stod(im)};
    } catch (...) {
        throw ConfigError("bad complex literal '" + t + "'", e.line, e.col);
    }
}

std::vector<std::complex<double>> parse_complex_list(const Entry& e) {
    std::vector<std::complex<double>> out;
    std::istringstream is(e.value);
    std::string tok;
    while (is >> tok) out.push_back(parse_complex_token(tok, e));
    if (out.empty()) throw ConfigError("empty complex list", e.line, e.col);
    return out;
}

Eigen::MatrixXcd parse_complex_matrix(const Entry& e) {
    std::vector<std::vector<std::complex<double>>> rows;
    std::stringstream ss(e.value);
    std::string row;
    while (std::getline(ss, row, ';')) {
        Entry re{trim(row), e.line, e.col};
        if (re.value.empty())
            throw ConfigError("empty matrix row", e.line, e.col);
        rows.push_back(parse_complex_list(re));
    }
    if (rows.empty()) throw ConfigError("empty matrix", e.line, e.col);
    const std::size_t n = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != n)
            throw ConfigError("ragged matrix rows", e.line, e.col);
    Eigen::MatrixXcd m(rows.size(), n);
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rows[i][j];
    return m;
}

Sections tokenize(const std::string& text) {
    Sections sections;
    std::istringstream is(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line.substr(0, line.find('#')));
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError("unterminated section header", lineno,
                                  static_cast<int>(line.find('[')) + 1);
            section = trim(stripped.substr(1, stripped.size() - 2));
            if (section != "model" && section != "system" && section != "run")
                throw ConfigError("unknown section '" + section + "'", lineno, 1);
            continue;
        }
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key = value", lineno, 1);
        if (section.empty())
            throw ConfigError("key outside of any section", lineno, 1);
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        const int col = static_cast<int>(line.find('=')) + 2;
        if (key.empty()) throw ConfigError("empty key", lineno, 1);

        const std::set<std::string>* allowed = &kRunKeys;
        if (section == "model") allowed = &kModelKeys;
        if (section == "system") allowed = &kSystemKeys;
        if (!allowed->count(key))
            throw ConfigError("unknown key '" + key + "' in section [" + section + "]",
                              lineno, 1);
        if (sections[section].count(key))
            throw ConfigError("duplicate key '" + key + "'", lineno, 1);
        sections[section][key] = Entry{value, lineno, col};
    }
    return sections;
}

} // namespace

void RunConfig::finalize() {
    const std::size_t L = energies.size();
    if (L < 2) throw std::invalid_argument("config: need at least 2 level energies");
    if (rho0.size() == 0) {
        // default: equal superposition of all levels
        Eigen::VectorXcd v = Eigen::VectorXcd::Constant(L, 1.0 / std::sqrt(double(L)));
        rho0 = v * v.adjoint();
    }
    if (static_cast<std::size_t>(rho0.rows()) != L)
        throw std::invalid_argument("config: rho0 dimension does not match energies");
    if (u.empty())
        u.assign(L, std::complex<double>(1.0 / std::sqrt(double(L)), 0.0));
    if (u.size() != L) throw std::invalid_argument("config: u dimension mismatch");
    if (family == "onedim-gaussian") {
        if (!(g > 0) || !(a > 0) || !(c > 0))
            throw std::invalid_argument("config: g, a, c must be positive");
    } else if (family == "ohmic" || family == "power-law") {
        if (!(lambda > 0) || !(omega_c > 0) || !(s > 0))
            throw std::invalid_argument("config: lambda, s, omega_c must be positive");
    } else {
        throw std::invalid_argument("config: unknown model family '" + family + "'");
    }
    if (probe_index >= probes.size())
        throw std::invalid_argument("config: probe_index out of range");
    if (!(rel_tol > 0) || !(abs_tol > 0))
        throw std::invalid_argument("config: tolerances must be positive");
    if (temperature < 0) throw std::invalid_argument("config: negative temperature");
}

RunConfig parse_config_text(const std::string& text) {
    const Sections sections = tokenize(text);
    RunConfig cfg;

    auto with = [&sections](const std::string& sec, const std::string& key,
                            auto&& fn) {
        auto s = sections.find(sec);
        if (s == sections.end()) return;
        auto e = s->second.find(key);
        if (e == s->second.end()) return;
        fn(e->second);
    };

    with("model", "family", [&](const Entry& e) { cfg.family = e.value; });
    with("model", "g", [&](const Entry& e) { cfg.g = parse_double(e); });
    with("model", "a", [&](const Entry& e) { cfg.a = parse_double(e); });
    with("model", "c", [&](const Entry& e) { cfg.c = parse_double(e); });
    with("model", "probes", [&](const Entry& e) { cfg.probes = parse_double_list(e); });
    with("model", "lambda", [&](const Entry& e) { cfg.lambda = parse_double(e); });
    with("model", "s", [&](const Entry& e) { cfg.s = parse_double(e); });
    with("model", "omega_c", [&](const Entry& e) { cfg.omega_c = parse_double(e); });

    with("system", "energies",
         [&](const Entry& e) { cfg.energies = parse_double_list(e); });
    with("system", "rho0", [&](const Entry& e) { cfg.rho0 = parse_complex_matrix(e); });
    with("system", "temperature",
         [&](const Entry& e) { cfg.temperature = parse_double(e); });

    with("run", "out", [&](const Entry& e) { cfg.out = e.value; });
    with("run", "t_max", [&](const Entry& e) { cfg.t_max = parse_double(e); });
    with("run", "t_points", [&](const Entry& e) { cfg.t_points = parse_size(e); });
    with("run", "t_values", [&](const Entry& e) { cfg.t_values = parse_double_list(e); });
    with("run", "t0", [&](const Entry& e) { cfg.t0 = parse_double(e); });
    with("run", "p_min", [&](const Entry& e) { cfg.p_min = parse_double(e); });
    with("run", "p_max", [&](const Entry& e) { cfg.p_max = parse_double(e); });
    with("run", "p_points", [&](const Entry& e) { cfg.p_points = parse_size(e); });
    with("run", "u", [&](const Entry& e) { cfg.u = parse_complex_list(e); });
    with("run", "probe_index", [&](const Entry& e) { cfg.probe_index = parse_size(e); });
    with("run", "g_values", [&](const Entry& e) { cfg.g_values = parse_double_list(e); });
    with("run", "t0_values",
         [&](const Entry& e) { cfg.t0_values = parse_double_list(e); });
    with("run", "rel_tol", [&](const Entry& e) { cfg.rel_tol = parse_double(e); });
    with("run", "abs_tol", [&](const Entry& e) { cfg.abs_tol = parse_double(e); });
    with("run", "threads",
         [&](const Entry& e) { cfg.threads = static_cast<int>(parse_size(e)); });

    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'", 0, 0);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string format_manifest(const RunConfig& cfg, const std::string& subcommand) {
    std::ostringstream os;
    os << "tool = bmeter " << kToolVersion << "\n";
    os << "subcommand = " << subcommand << "\n";
    os << "[model]\n";
    os << "family = " << cfg.family << "\n";
    auto num = [](double v) { return csv::format_double(v); };
    if (cfg.family == "onedim-gaussian") {
        os << "g = " << num(cfg.g) << "\na = " << num(cfg.a) << "\nc = " << num(cfg.c)
           << "\n";
        os << "probes =";
        for (double p : cfg.probes) os << " " << num(p);
        os << "\n";
    } else {
        os << "lambda = " << num(cfg.lambda) << "\ns = " << num(cfg.s)
           << "\nomega_c = " << num(cfg.omega_c) << "\n";
    }
    os << "[system]\n";
    os << "energies =";
    for (double e : cfg.energies) os << " " << num(e);
    os << "\n";
    os << "rho0 =";
    for (Eigen::Index i = 0; i < cfg.rho0.rows(); ++i) {
        for (Eigen::Index j = 0; j < cfg.rho0.cols(); ++j) {
            os << " " << num(cfg.rho0(i, j).real());
            if (cfg.rho0(i, j).imag() != 0.0) os << num(cfg.rho0(i, j).imag()) << "i";
        }
        if (i + 1 < cfg.rho0.rows()) os << " ;";
    }
    os << "\n";
    os << "temperature = " << num(cfg.temperature) << "\n";
    os << "[run]\n";
    os << "out = " << cfg.out << "\n";
    if (!cfg.t_values.empty()) {
        os << "t_values =";
        for (double t : cfg.t_values) os << " " << num(t);
        os << "\n";
    } else {
        os << "t_max = " << num(cfg.t_max) << "\nt_points = " << cfg.t_points << "\n";
    }
    os << "t0 = " << num(cfg.t0) << "\n";
    os << "p_min = " << num(cfg.p_min) << "\np_max = " << num(cfg.p_max)
       << "\np_points = " << cfg.p_points << "\n";
    os << "u =";
    for (const auto& v : cfg.u) {
        os << " " << num(v.real());
        if (v.imag() != 0.0) os << (v.imag() > 0 ? "+" : "") << num(v.imag()) << "i";
    }
    os << "\n";
    os << "probe_index = " << cfg.probe_index << "\n";
    if (!cfg.g_values.empty()) {
        os << "g_values =";
        for (double v : cfg.g_values) os << " " << num(v);
        os << "\n";
    }
    if (!cfg.t0_values.empty()) {
        os << "t0_values =";
        for (double v : cfg.t0_values) os << " " << num(v);
        os << "\n";
    }
    os << "rel_tol = " << num(cfg.rel_tol) << "\nabs_tol = " << num(cfg.abs_tol) << "\n";
    os << "threads = " << cfg.threads << "\n";
    return os.str();
}

} // namespace bmeter::config
