#include "nosetori/config.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nosetori {

using nlohmann::json;

namespace {

json int_map(const std::map<int, double>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[std::to_string(k)] = v;
    return out;
}

std::map<int, double> parse_int_map(const json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be an object of power -> coefficient");
    std::map<int, double> out;
    for (const auto& [key, value] : j.items()) {
        std::size_t used = 0;
        int k = 0;
        try {
            k = std::stoi(key, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != key.size() || key.empty()) throw ConfigError(what + ": key '" + key + "' is not an integer");
        if (!value.is_number()) throw ConfigError(what + ": coefficient for power " + key + " must be a number");
        out[k] = value.get<double>();
    }
    return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    return j.contains(key) ? j.at(key).get<T>() : fallback;
}

double require_number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + "." + key + " is required");
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + " must be a number");
    const double v = j.at(key).get<double>();
    if (!std::isfinite(v)) throw ConfigError(where + "." + key + " must be finite");
    return v;
}

void require_one_of(const std::string& value, std::initializer_list<const char*> allowed, const std::string& what) {
    for (const char* a : allowed)
        if (value == a) return;
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    throw ConfigError(what + " '" + value + "' is not one of: " + list);
}

}  // namespace

std::size_t IntegratorConfig::n_steps() const {
    if (!(h > 0.0) || !(B > 0.0)) throw ConfigError("integrator h and B must be positive");
    const double n = std::round(B / h);
    if (std::abs(n * h - B) > 1e-9 * B) throw ConfigError("B must be an integer multiple of h");
    return static_cast<std::size_t>(n);
}

Scheme parse_scheme(const std::string& name) {
    if (name == "crfr4") return Scheme::CRFR4;
    if (name == "rk4") return Scheme::RK4;
    throw ConfigError("scheme '" + name + "' is not one of: crfr4, rk4");
}

json to_json(const ExperimentConfig& cfg) {
    const auto& sys = cfg.system;
    json pot = {{"kind", sys.potential.kind}, {"metric", sys.potential.metric}};
    if (!sys.potential.coefficients.empty()) pot["coefficients"] = int_map(sys.potential.coefficients);
    if (sys.potential.domain) pot["domain"] = {sys.potential.domain->lo, sys.potential.domain->hi};
    if (!sys.potential.metric_coefficients.empty())
        pot["metric_coefficients"] = int_map(sys.potential.metric_coefficients);

    json th = {{"kind", sys.thermostat.kind}, {"parameter", sys.thermostat.parameter}};
    if (!sys.thermostat.omegas.empty()) {
        json om = json::object();
        for (const auto& [k, poly] : sys.thermostat.omegas) om[std::to_string(k)] = int_map(poly);
        th["omegas"] = om;
    }

    json system = {{"kind", sys.kind}, {"thermostat", th}, {"T", sys.T}, {"a", sys.a}};
    if (sys.kind == "rotational") {
        system["potential"] = pot;
        system["mu"] = sys.mu;
    } else {
        system["homogeneous"] = {{"n", sys.homogeneous.n}, {"xi", sys.homogeneous.xi}, {"eta", sys.homogeneous.eta}};
    }

    json analyses = json::array();
    for (const auto& a : cfg.analyses) {
        json entry = {{"kind", a.kind}};
        if (a.kind == "spectrum" || a.kind == "birkhoff") entry["series"] = a.series;
        if (a.kind == "spectrum") entry["demean"] = a.demean;
        if (a.kind == "ratio") {
            entry["thermostat_series"] = a.thermostat_series;
            entry["internal_series"] = a.internal_series;
        }
        if (a.kind == "sweep") {
            entry["variable"] = a.variable;
            entry["values"] = a.values;
        }
        analyses.push_back(entry);
    }

    json start = {{"kind", cfg.start.kind}};
    if (cfg.start.kind == "perturbed") {
        start["delta"] = cfg.start.delta;
        start["direction"] = cfg.start.direction;
    }
    if (cfg.start.kind == "explicit") start["state"] = cfg.start.state;

    return {{"system", system},
            {"integrator",
             {{"scheme", to_string(cfg.integrator.scheme)},
              {"h", cfg.integrator.h},
              {"B", cfg.integrator.B},
              {"sample_stride", cfg.integrator.sample_stride}}},
            {"start", start},
            {"analyses", analyses},
            {"output", {{"directory", cfg.output.directory}, {"formats", cfg.output.formats}}}};
}

ExperimentConfig config_from_json(const json& j, bool require_integrator) {
    try {
        ExperimentConfig cfg;
        if (!j.is_object() || !j.contains("system")) throw ConfigError("config needs a 'system' section");
        const json& s = j.at("system");
        auto& sys = cfg.system;
        sys.kind = get_or<std::string>(s, "kind", "rotational");
        require_one_of(sys.kind, {"rotational", "homogeneous"}, "system.kind");
        sys.T = require_number(s, "T", "system");
        sys.a = require_number(s, "a", "system");
        if (sys.kind == "rotational") {
            sys.mu = require_number(s, "mu", "system");
            if (!s.contains("potential")) throw ConfigError("system.potential is required");
            const json& p = s.at("potential");
            sys.potential.kind = p.at("kind").get<std::string>();
            require_one_of(sys.potential.kind, {"quartic", "lennard_jones", "spherical_pendulum", "custom"},
                           "potential.kind");
            sys.potential.metric = get_or<std::string>(p, "metric", "plane");
            require_one_of(sys.potential.metric, {"plane", "sphere", "custom"}, "potential.metric");
            if (p.contains("coefficients")) sys.potential.coefficients = parse_int_map(p.at("coefficients"), "coefficients");
            if (p.contains("metric_coefficients"))
                sys.potential.metric_coefficients = parse_int_map(p.at("metric_coefficients"), "metric_coefficients");
            if (p.contains("domain")) {
                const auto d = p.at("domain").get<std::vector<double>>();
                if (d.size() != 2) throw ConfigError("potential.domain must be [lo, hi]");
                sys.potential.domain = Interval{d[0], d[1]};
            }
        } else {
            if (!s.contains("homogeneous")) throw ConfigError("system.homogeneous is required");
            const json& h = s.at("homogeneous");
            sys.homogeneous = HomogeneousSpec(get_or<int>(h, "n", 1), h.at("xi").get<int>(), h.at("eta").get<int>());
        }
        if (!s.contains("thermostat")) throw ConfigError("system.thermostat is required");
        const json& t = s.at("thermostat");
        sys.thermostat.kind = t.at("kind").get<std::string>();
        require_one_of(sys.thermostat.kind, {"nose", "winkler", "tanh_logistic", "variable_mass", "generalized"},
                       "thermostat.kind");
        sys.thermostat.parameter = get_or<double>(t, "parameter", 1.0);
        if (t.contains("omegas")) {
            for (const auto& [key, poly] : t.at("omegas").items()) {
                const auto k = parse_int_map(json{{key, 0.0}}, "omegas").begin()->first;
                sys.thermostat.omegas[k] = parse_int_map(poly, "omegas." + key);
            }
        }

        const json integ = j.value("integrator", json::object());
        cfg.integrator.scheme = parse_scheme(get_or<std::string>(integ, "scheme", "crfr4"));
        if (require_integrator) {
            cfg.integrator.h = require_number(integ, "h", "integrator");
            cfg.integrator.B = require_number(integ, "B", "integrator");
            cfg.integrator.n_steps();
        } else {
            cfg.integrator.h = get_or<double>(integ, "h", 0.0);
            cfg.integrator.B = get_or<double>(integ, "B", 0.0);
        }
        cfg.integrator.sample_stride = get_or<std::size_t>(integ, "sample_stride", 1);
        if (cfg.integrator.sample_stride < 1) throw ConfigError("integrator.sample_stride must be >= 1");

        const json start = j.value("start", json{{"kind", "equilibrium"}});
        cfg.start.kind = start.at("kind").get<std::string>();
        require_one_of(cfg.start.kind, {"equilibrium", "perturbed", "explicit", "homogeneous"}, "start.kind");
        if (cfg.start.kind == "perturbed") {
            cfg.start.delta = require_number(start, "delta", "start");
            if (start.contains("direction")) cfg.start.direction = start.at("direction").get<std::array<double, 4>>();
        }
        if (cfg.start.kind == "explicit") {
            if (!start.contains("state")) throw ConfigError("start.state is required for an explicit start");
            cfg.start.state = start.at("state").get<std::array<double, 6>>();
        }

        for (const auto& a : j.value("analyses", json::array())) {
            AnalysisConfig ac;
            ac.kind = a.at("kind").get<std::string>();
            require_one_of(ac.kind, {"drift", "spectrum", "ratio", "birkhoff", "sweep"}, "analysis.kind");
            ac.series = get_or<std::string>(a, "series", ac.kind == "birkhoff" ? "T_inst" : "s");
            ac.demean = get_or<bool>(a, "demean", true);
            ac.thermostat_series = get_or<std::string>(a, "thermostat_series", "s");
            ac.internal_series = get_or<std::string>(a, "internal_series", "r");
            ac.variable = get_or<std::string>(a, "variable", "T");
            if (ac.kind == "sweep") {
                require_one_of(ac.variable, {"T", "mu", "a"}, "sweep.variable");
                ac.values = a.at("values").get<std::vector<double>>();
                if (ac.values.empty()) throw ConfigError("sweep.values must be non-empty");
            }
            cfg.analyses.push_back(ac);
        }

        const json out = j.value("output", json::object());
        cfg.output.directory = get_or<std::string>(out, "directory", "out");
        cfg.output.formats = get_or<std::vector<std::string>>(out, "formats", {"csv"});
        for (const auto& f : cfg.output.formats) require_one_of(f, {"csv", "binary"}, "output.formats entry");
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_config(const std::string& path, bool require_integrator) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return config_from_json(j, require_integrator);
}

Potential<double> build_potential(const PotentialConfig& cfg) {
    if (cfg.kind == "quartic") return Potential<double>::quartic();
    if (cfg.kind == "lennard_jones") return Potential<double>::lennard_jones(cfg.domain);
    if (cfg.kind == "spherical_pendulum") return Potential<double>::spherical_pendulum();
    if (cfg.kind == "custom") {
        if (!cfg.domain) throw ConfigError("custom potential needs a domain");
        if (cfg.coefficients.empty()) throw ConfigError("custom potential needs coefficients");
        const MetricKind metric = cfg.metric == "sphere"   ? MetricKind::Sphere
                                  : cfg.metric == "custom" ? MetricKind::Custom
                                                           : MetricKind::Plane;
        return Potential<double>::custom(LaurentPolynomial<double>(cfg.coefficients), *cfg.domain, metric,
                                         LaurentPolynomial<double>(cfg.metric_coefficients));
    }
    throw ConfigError("unknown potential '" + cfg.kind + "'");
}

Thermostat<double> build_thermostat(const SystemConfig& cfg) {
    const auto& t = cfg.thermostat;
    if (t.kind == "nose") return Thermostat<double>::nose(cfg.a, cfg.T);
    if (t.kind == "winkler") return Thermostat<double>::winkler(t.parameter, cfg.a, cfg.T);
    if (t.kind == "tanh_logistic") return Thermostat<double>::tanh_logistic(t.parameter, cfg.a, cfg.T);
    if (t.kind == "variable_mass") return Thermostat<double>::variable_mass(cfg.a, cfg.T);
    if (t.kind == "generalized") {
        std::map<int, LaurentPolynomial<double>> omegas;
        for (const auto& [k, poly] : t.omegas) omegas.emplace(k, LaurentPolynomial<double>(poly));
        return Thermostat<double>::generalized(std::move(omegas), cfg.a, cfg.T);
    }
    throw ConfigError("unknown thermostat '" + t.kind + "'");
}

std::string config_hash(const json& j) {
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char ch : j.dump()) {
        hash ^= ch;
        hash *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << std::setw(16) << std::setfill('0') << hash;
    return out.str();
}

}  // namespace nosetori
