#include "sliq/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace sliq {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& msg) {
    throw ValidationError(field, field + ": " + msg);
}

const json& get_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path, "expected an object");
    return node;
}

void reject_unknown(const json& node, const std::string& path,
                    const std::set<std::string>& allowed) {
    for (const auto& item : node.items()) {
        if (!allowed.count(item.key()))
            fail(path + "." + item.key(), "unknown key");
    }
}

const json& require_key(const json& node, const std::string& path,
                        const std::string& key) {
    auto it = node.find(key);
    if (it == node.end()) fail(path + "." + key, "missing required field");
    return *it;
}

double require_number(const json& node, const std::string& path,
                      const std::string& key) {
    const json& v = require_key(node, path, key);
    if (!v.is_number()) fail(path + "." + key, "expected a number");
    return v.get<double>();
}

double optional_number(const json& node, const std::string& path,
                       const std::string& key, double fallback) {
    auto it = node.find(key);
    if (it == node.end()) return fallback;
    if (!it->is_number()) fail(path + "." + key, "expected a number");
    return it->get<double>();
}

std::string require_string(const json& node, const std::string& path,
                           const std::string& key) {
    const json& v = require_key(node, path, key);
    if (!v.is_string()) fail(path + "." + key, "expected a string");
    return v.get<std::string>();
}

bool optional_bool(const json& node, const std::string& path,
                   const std::string& key, bool fallback) {
    auto it = node.find(key);
    if (it == node.end()) return fallback;
    if (!it->is_boolean()) fail(path + "." + key, "expected a boolean");
    return it->get<bool>();
}

ImpactFunction parse_impact(const json& node, const std::string& path) {
    get_object(node, path);
    reject_unknown(node, path, {"kind", "slope", "intercept", "coeffs"});
    const std::string kind = require_string(node, path, "kind");
    if (kind == "linear") {
        const double slope = require_number(node, path, "slope");
        const double intercept = optional_number(node, path, "intercept", 0.0);
        return ImpactFunction::linear(slope, intercept);
    }
    if (kind == "polynomial") {
        const json& c = require_key(node, path, "coeffs");
        if (!c.is_array() || c.empty()) fail(path + ".coeffs", "expected a non-empty array");
        std::vector<double> coeffs;
        for (const auto& v : c) {
            if (!v.is_number()) fail(path + ".coeffs", "expected numbers");
            coeffs.push_back(v.get<double>());
        }
        return ImpactFunction::polynomial(std::move(coeffs));
    }
    fail(path + ".kind", "expected 'linear' or 'polynomial'");
}

DiffusionSpec parse_diffusion(const json& node, const std::string& path) {
    get_object(node, path);
    reject_unknown(node, path, {"kind", "lambda", "theta", "sigma"});
    const std::string kind = require_string(node, path, "kind");
    if (kind != "cir") fail(path + ".kind", "expected 'cir'");
    return DiffusionSpec::cir(require_number(node, path, "lambda"),
                              require_number(node, path, "theta"),
                              require_number(node, path, "sigma"));
}

StrategyKind parse_strategy(const json& node, const std::string& path,
                            const InitState& init) {
    get_object(node, path);
    reject_unknown(node, path, {"kind", "frozen_a", "frozen_b", "no_buy"});
    const std::string kind = require_string(node, path, "kind");
    const bool no_buy = optional_bool(node, path, "no_buy", false);
    if (kind == "ac") {
        // The frozen impact pair defaults to the initial state, matching the
        // convention of calibrating the benchmark to time-zero impact.
        const double fa = optional_number(node, path, "frozen_a", init.a0);
        const double fb = optional_number(node, path, "frozen_b", init.b0);
        return StrategyKind::almgren_chriss(fa, fb, no_buy);
    }
    if (kind == "order0") return StrategyKind::order0(no_buy);
    if (kind == "order1") return StrategyKind::order1(no_buy);
    fail(path + ".kind", "expected 'ac', 'order0' or 'order1'");
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());

    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // convert the byte offset into line/column
        int line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        std::ostringstream os;
        os << "parse error at line " << line << ", column " << col << ": " << e.what();
        throw ParseError(os.str(), line, col);
    }

    get_object(root, "config");
    reject_unknown(root, "config", {"model", "penalties", "sim", "init", "strategies"});

    ExperimentConfig cfg;

    const json& init = get_object(require_key(root, "config", "init"), "init");
    reject_unknown(init, "init", {"X0", "S0", "Q0", "a0", "b0"});
    cfg.init.X0 = require_number(init, "init", "X0");
    cfg.init.S0 = require_number(init, "init", "S0");
    cfg.init.Q0 = require_number(init, "init", "Q0");
    cfg.init.a0 = require_number(init, "init", "a0");
    cfg.init.b0 = require_number(init, "init", "b0");

    const json& model = get_object(require_key(root, "config", "model"), "model");
    reject_unknown(model, "model", {"f", "g", "a_dyn", "b_dyn", "rho", "sigma"});
    cfg.model.f = parse_impact(require_key(model, "model", "f"), "model.f");
    cfg.model.g = parse_impact(require_key(model, "model", "g"), "model.g");
    cfg.model.a_dyn = parse_diffusion(require_key(model, "model", "a_dyn"), "model.a_dyn");
    cfg.model.b_dyn = parse_diffusion(require_key(model, "model", "b_dyn"), "model.b_dyn");
    cfg.model.rho = require_number(model, "model", "rho");
    cfg.model.sigma = require_number(model, "model", "sigma");
    cfg.model.validate();

    const json& pen = get_object(require_key(root, "config", "penalties"), "penalties");
    reject_unknown(pen, "penalties", {"kappa", "phi", "T", "regime"});
    cfg.penalties.T = require_number(pen, "penalties", "T");
    cfg.penalties.regime = regime_from_name(require_string(pen, "penalties", "regime"));
    cfg.penalties.kappa = optional_number(pen, "penalties", "kappa", 0.0);
    cfg.penalties.phi = optional_number(pen, "penalties", "phi", 0.0);
    if (cfg.penalties.regime == Regime::Nonlimiting) {
        if (pen.find("kappa") == pen.end())
            fail("penalties.kappa", "missing required field");
        if (pen.find("phi") == pen.end())
            fail("penalties.phi", "missing required field");
    }
    if (cfg.penalties.regime == Regime::KappaInfinity &&
        pen.find("phi") == pen.end())
        fail("penalties.phi", "missing required field");
    cfg.penalties.validate();

    const json& sim = get_object(require_key(root, "config", "sim"), "sim");
    reject_unknown(sim, "sim",
                   {"n_steps", "master_seed", "M", "force_final_liquidation", "threads",
                    "scheme"});
    {
        const double n = require_number(sim, "sim", "n_steps");
        if (n < 2 || n != static_cast<int>(n))
            fail("sim.n_steps", "expected an integer >= 2");
        cfg.sim.n_steps = static_cast<int>(n);
        const json& seed = require_key(sim, "sim", "master_seed");
        if (!seed.is_number_unsigned()) fail("sim.master_seed", "expected an unsigned integer");
        cfg.sim.master_seed = seed.get<std::uint64_t>();
        const double m = require_number(sim, "sim", "M");
        if (m < 1 || m != static_cast<std::size_t>(m))
            fail("sim.M", "expected an integer >= 1");
        cfg.paths = static_cast<std::size_t>(m);
        cfg.sim.force_final_liquidation =
            optional_bool(sim, "sim", "force_final_liquidation", true);
        const double threads = optional_number(sim, "sim", "threads", 0.0);
        if (threads < 0 || threads != static_cast<int>(threads))
            fail("sim.threads", "expected a non-negative integer");
        cfg.sim.threads = static_cast<int>(threads);
        if (sim.find("scheme") != sim.end()) {
            const std::string scheme = require_string(sim, "sim", "scheme");
            if (scheme != "euler-full-truncation")
                fail("sim.scheme", "expected 'euler-full-truncation'");
        }
        cfg.sim.validate();
    }

    const json& strats = require_key(root, "config", "strategies");
    if (!strats.is_array() || strats.empty())
        fail("strategies", "expected a non-empty array");
    for (std::size_t i = 0; i < strats.size(); ++i) {
        std::ostringstream os;
        os << "strategies[" << i << "]";
        cfg.strategies.push_back(parse_strategy(strats[i], os.str(), cfg.init));
    }

    for (const auto* dyn : {&cfg.model.a_dyn, &cfg.model.b_dyn}) {
        if (dyn->kind == DiffusionSpec::Kind::CIR && !feller_check(*dyn)) {
            std::ostringstream os;
            os << "Feller condition violated (2*lambda*theta = "
               << 2.0 * dyn->lambda * dyn->theta << " <= sigma^2 = "
               << dyn->sigma_v * dyn->sigma_v
               << "); the process can reach zero";
            cfg.warnings.push_back(os.str());
        }
    }
    return cfg;
}

}  // namespace sliq
