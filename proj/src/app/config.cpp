#include "qbm/app/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace qbm::app {

double ExperimentConfig::resolved_lambda() const {
    if (has_rates) return lambda;
    return 2.0 * gamma * q_scale * q_scale * kT / (hbar * hbar);
}

double ExperimentConfig::resolved_a0() const {
    if (has_rates) return a0;
    return 2.0 * gamma * q_scale * q_scale * delta() / (hbar * hbar);
}

double ExperimentConfig::resolved_gamma() const {
    if (has_gamma_q) return gamma;
    return a0 * hbar * hbar / (2.0 * q_scale * q_scale * delta());
}

double ExperimentConfig::resolved_kT() const {
    if (has_gamma_q) return kT;
    if (a0 == 0.0) return 0.0;
    return lambda * delta() / a0;
}

std::string ExperimentConfig::describe() const {
    std::ostringstream os;
    os << "preset=" << preset << " omega0=" << omega0 << " hbar=" << hbar
       << " Q=" << q_scale << " gamma=" << resolved_gamma() << " kT=" << resolved_kT()
       << " lambda=" << resolved_lambda() << " A0=" << resolved_a0() << " theta=" << theta
       << " dt=" << dt << " t_end=" << t_end << " n_traj=" << n_traj
       << " master_seed=" << master_seed << " record_stride=" << record_stride;
    return os.str();
}

ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig c;
    c.preset = name;
    c.omega0 = 5.0;
    c.hbar = 1.0;
    c.q_scale = 1.0;
    c.has_gamma_q = true;
    c.gamma = 0.1;  // A0 = 2 gamma Q^2 Delta / hbar^2 = 1
    c.theta = M_PI / 4.0;
    if (name == "fig1") {
        c.kT = 0.0;
        c.theta_list = {M_PI / 4.0, M_PI / 12.0, M_PI / 50.0};
        c.dt = 0.002;
        c.t_end = 25.0;
        c.record_stride = 25;
    } else if (name == "fig2a") {
        c.kT = 0.02 * c.delta();
        c.n_traj = 500;
        c.dt = 0.005;
        c.t_end = 25.0;
        c.record_stride = 10;
    } else if (name == "fig2b") {
        c.kT = 2.0 * c.delta();
        c.n_traj = 2000;
        c.dt = 0.005;
        c.t_end = 10.0;
        c.record_stride = 4;
    } else if (name == "fig3") {
        c.kT_over_delta = {0.02, 0.5, 1.0, 2.0, 4.0};
        c.n_traj = 1000;
        c.dt = 0.005;
        c.t_end = 30.0;
        c.record_stride = 20;
    } else if (name == "custom") {
        c.has_gamma_q = false;
    } else {
        throw ConfigError(0, "unknown preset '" + name + "'");
    }
    return c;
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, int line) {
    std::size_t pos = 0;
    double x;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError(line, "expected a number, got '" + v + "'");
    }
    if (pos != v.size()) throw ConfigError(line, "trailing characters after number: '" + v + "'");
    return x;
}

std::vector<double> parse_list(const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), line));
    if (out.empty()) throw ConfigError(line, "empty list");
    return out;
}

bool parse_bool(const std::string& v, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(line, "expected true/false, got '" + v + "'");
}

}  // namespace

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");

    // first pass to find the preset so its defaults can be overridden
    std::string preset = "custom";
    {
        std::string line;
        int ln = 0;
        while (std::getline(in, line)) {
            ++ln;
            const std::string s = trim(line);
            if (s.rfind("preset", 0) == 0) {
                const auto eq = s.find('=');
                if (eq == std::string::npos) throw ConfigError(ln, "expected 'preset = <name>'");
                preset = trim(s.substr(eq + 1));
            }
        }
    }
    ExperimentConfig cfg = preset_config(preset);

    in.clear();
    in.seekg(0);
    std::string section;
    std::string line;
    int ln = 0;
    bool saw_gamma_q = false, saw_rates = false;
    while (std::getline(in, line)) {
        ++ln;
        std::string s = trim(line);
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError(ln, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "physics" && section != "numerics" && section != "output")
                throw ConfigError(ln, "unknown section '" + section + "'");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError(ln, "expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (val.empty()) throw ConfigError(ln, "missing value for key '" + key + "'");

        if (section.empty()) {
            if (key == "preset") continue;  // handled in the first pass
            throw ConfigError(ln, "key '" + key + "' outside any section");
        }
        if (section == "physics") {
            if (key == "omega0") cfg.omega0 = parse_double(val, ln);
            else if (key == "hbar") cfg.hbar = parse_double(val, ln);
            else if (key == "gamma") { cfg.gamma = parse_double(val, ln); saw_gamma_q = true; }
            else if (key == "q") { cfg.q_scale = parse_double(val, ln); saw_gamma_q = true; }
            else if (key == "kT") { cfg.kT = parse_double(val, ln); saw_gamma_q = true; }
            else if (key == "lambda") { cfg.lambda = parse_double(val, ln); saw_rates = true; }
            else if (key == "A0") { cfg.a0 = parse_double(val, ln); saw_rates = true; }
            else if (key == "theta") cfg.theta = parse_double(val, ln);
            else if (key == "theta_list") cfg.theta_list = parse_list(val, ln);
            else if (key == "kT_over_delta") cfg.kT_over_delta = parse_list(val, ln);
            else throw ConfigError(ln, "unknown physics key '" + key + "'");
        } else if (section == "numerics") {
            if (key == "dt") cfg.dt = parse_double(val, ln);
            else if (key == "t_end") cfg.t_end = parse_double(val, ln);
            else if (key == "n_traj") cfg.n_traj = static_cast<int>(parse_double(val, ln));
            else if (key == "master_seed")
                cfg.master_seed = static_cast<std::uint64_t>(parse_double(val, ln));
            else if (key == "record_stride")
                cfg.record_stride = static_cast<int>(parse_double(val, ln));
            else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_double(val, ln));
            else throw ConfigError(ln, "unknown numerics key '" + key + "'");
        } else {  // output
            if (key == "dir") cfg.out_dir = val;
            else if (key == "svg") cfg.svg = parse_bool(val, ln);
            else throw ConfigError(ln, "unknown output key '" + key + "'");
        }
    }

    if (saw_gamma_q && saw_rates)
        throw ConfigError(0, "exactly one parameterization allowed: (gamma,q,kT) or (lambda,A0)");
    if (saw_rates) {
        cfg.has_rates = true;
        cfg.has_gamma_q = false;
    } else if (saw_gamma_q) {
        cfg.has_gamma_q = true;
        cfg.has_rates = false;
    }
    if (cfg.preset == "custom" && !cfg.has_gamma_q && !cfg.has_rates)
        throw ConfigError(0, "missing key: physics parameterization "
                             "(gamma/q/kT or lambda/A0) is required for custom runs");
    return cfg;
}

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
    std::vector<Diagnostic> out;
    auto add = [&](const std::string& m) { out.push_back({0, m}); };

    if (!(cfg.omega0 > 0.0)) add("omega0 must be > 0");
    if (!(cfg.hbar > 0.0)) add("hbar must be > 0");
    if (!(cfg.q_scale > 0.0)) add("q must be > 0");
    if (cfg.has_gamma_q && (cfg.gamma < 0.0 || cfg.kT < 0.0))
        add("gamma and kT must be >= 0");
    if (cfg.has_rates && (cfg.lambda < 0.0 || cfg.a0 < 0.0))
        add("lambda and A0 must be >= 0");
    if (!(cfg.dt > 0.0)) add("dt must be > 0");
    if (!(cfg.t_end > cfg.dt)) add("t_end must exceed dt");
    if (cfg.n_traj < 1) add("n_traj must be >= 1");
    if (cfg.record_stride < 1) add("record_stride must be >= 1");

    if (cfg.omega0 > 0.0 && cfg.dt > 0.0) {
        const double rate = std::max({cfg.omega0, 2.0 * cfg.resolved_lambda(), cfg.resolved_a0()});
        if (cfg.dt * rate >= 0.05) add("step-size bound violated: dt * max(omega0, 2 lambda, A0) "
                                       "must be < 0.05");
    }
    if (cfg.resolved_lambda() >= cfg.omega0 && (cfg.preset == "fig2a" || cfg.preset == "fig2b"))
        add("analytic comparison requires the underdamped branch lambda < omega0");
    if (cfg.has_rates && cfg.a0 == 0.0 && cfg.lambda > 0.0 &&
        (cfg.preset == "fig2a" || cfg.preset == "fig2b" || cfg.preset == "fig3"))
        add("A0 = 0 with lambda > 0 has no (gamma,kT) realization; ensemble runs "
            "need the (gamma,q,kT) parameterization");
    if (cfg.preset == "fig3" && cfg.kT_over_delta.size() < 2)
        add("fig3 needs a kT_over_delta sweep with >= 2 entries");
    return out;
}

}  // namespace qbm::app
