#include "qfridge/cli/commands.hpp"

#include "qfridge/catalyst.hpp"
#include "qfridge/cli/output.hpp"
#include "qfridge/permutations.hpp"
#include "qfridge/regions.hpp"
#include "qfridge/search.hpp"
#include "qfridge/thermo.hpp"
#include "qfridge/verify.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace qfridge::cli {

using nlohmann::json;

namespace {

std::string mode_name(Mode m) { return std::string(to_string(m)); }

json perm_json(const Permutation& p) { return json(std::vector<std::int32_t>(p.map().begin(), p.map().end())); }

json probabilities_json(const CatalystDistribution& c) {
    return json(std::vector<double>(c.probabilities().begin(), c.probabilities().end()));
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

bool close(const std::optional<double>& a, const std::optional<double>& b, double tol) {
    if (a.has_value() != b.has_value()) return false;
    return !a || std::abs(*a - *b) <= tol;
}

std::size_t require(const std::optional<std::size_t>& v, const char* field, const char* why) {
    if (!v) throw ConfigError(field, why);
    return *v;
}

// Resolves the configured permutation and the catalyst dimension it implies.
std::pair<Permutation, std::size_t> resolve_permutation(const RunConfig& cfg) {
    const auto& choice = cfg.permutation;
    auto check_d = [&](std::size_t implied) {
        if (cfg.d && *cfg.d != implied) {
            throw ConfigError("d", "permutation implies d=" + std::to_string(implied) + " but d=" +
                                       std::to_string(*cfg.d) + " was given");
        }
        return implied;
    };
    if (choice.name == "pi_opt") return {pi_opt(), check_d(1)};
    if (choice.name == "identity") {
        const std::size_t d = cfg.d.value_or(1);
        if (d == 0) throw ConfigError("d", "must be at least 1");
        return {Permutation::identity(kStatesPerNode * d), d};
    }
    if (choice.name == "pi_1") {
        const std::size_t d = require(cfg.d, "d", "pi_1 needs a catalyst dimension");
        if (d == 0) throw ConfigError("d", "must be at least 1");
        return {pi_1(d), d};
    }
    if (choice.name == "pi_2") {
        const std::size_t n = require(choice.n, "n", "pi_2 needs n");
        const std::size_t np = require(choice.n_prime, "n_prime", "pi_2 needs n_prime");
        if (np == 0) throw ConfigError("n_prime", "must be at least 1");
        return {pi_2(n, np), check_d(n + np)};
    }
    if (choice.map.size() % kStatesPerNode != 0) {
        throw ConfigError("permutation", "length must be a multiple of 4");
    }
    try {
        Permutation p(choice.map);
        return {std::move(p), check_d(choice.map.size() / kStatesPerNode)};
    } catch (const std::invalid_argument& e) {
        throw ConfigError("permutation", e.what());
    }
}

}  // namespace

int cmd_table1(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const SearchResult t = table1(cfg.machine);
    bool ok = true;
    json rows = json::array();
    CsvWriter csv(out);
    if (cfg.format.value_or(Format::Csv) == Format::Csv) {
        csv.row({"index", "perm", "q_cold_closed_form", "q_cold_numeric", "cop_closed_form", "cop_numeric", "mode"});
    }
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const ClosedForm cf = table1_closed_form(r + 1, cfg.machine);
        if (std::abs(cf.q_cold - row.flows.q_cold) > cfg.tol || !close(cf.cop, row.flows.cop, cfg.tol)) {
            ok = false;
            err << "row " << r + 1 << ": closed form and simulation disagree\n";
        }
        if (cfg.format.value_or(Format::Csv) == Format::Csv) {
            csv.row({std::to_string(r + 1), row.perm.to_json(), format_double(cf.q_cold),
                     format_double(row.flows.q_cold), format_optional(cf.cop), format_optional(row.flows.cop),
                     mode_name(row.flows.mode)});
        } else {
            rows.push_back({{"index", r + 1},
                            {"perm", perm_json(row.perm)},
                            {"q_cold_closed_form", cf.q_cold},
                            {"q_cold_numeric", row.flows.q_cold},
                            {"cop_closed_form", json_optional(cf.cop)},
                            {"cop_numeric", json_optional(row.flows.cop)},
                            {"mode", mode_name(row.flows.mode)}});
        }
    }
    if (cfg.format.value_or(Format::Csv) == Format::Json) emit_json(out, rows);
    return ok ? kExitOk : kExitMismatch;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto [perm, d] = resolve_permutation(cfg);

    std::optional<StationaryResult> st;
    std::optional<CatalystDistribution> given;
    if (cfg.p) {
        if (cfg.p->size() != d) {
            throw ConfigError("p", "has " + std::to_string(cfg.p->size()) + " entries but d=" + std::to_string(d));
        }
        try {
            given.emplace(*cfg.p, cfg.epsilon);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("p", e.what());
        }
    } else {
        st = stationary_catalyst(cfg.machine, perm, d, cfg.tol);
        if (!st->unique) {
            err << "stationary catalyst is not unique for this permutation; flows are undefined\n";
            return kExitDegenerate;
        }
        if (!cfg.epsilon.empty()) {
            try {
                st->distribution = st->distribution.with_level_energies(cfg.epsilon);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("epsilon", e.what());
            }
        }
    }
    const CatalystDistribution& cat = given ? *given : st->distribution;

    const EnergyFlows f = energy_flows(cfg.machine, cat, perm);
    const double margin = second_law_margin(cfg.machine, f);
    const bool catalytic = is_catalytic(cfg.machine, perm, cat, cfg.tol);
    std::optional<FlowReport> flows;
    if (as_transpositions(perm)) flows = node_flows(cfg.machine, perm, cat);

    if (cfg.format.value_or(Format::Json) == Format::Csv) {
        CsvWriter csv(out);
        csv.row({"q_hot", "q_cold", "work", "cop", "mode", "second_law_margin", "p", "unique", "catalytic",
                 "uniform_flow"});
        csv.row({format_double(f.q_hot), format_double(f.q_cold), format_double(f.work), format_optional(f.cop),
                 mode_name(f.mode), format_double(margin), format_array(cat.probabilities()),
                 st ? (st->unique ? "1" : "0") : "", catalytic ? "1" : "0",
                 flows ? format_optional(flows->uniform_flow) : ""});
        return kExitOk;
    }

    json j{{"perm", perm_json(perm)},
           {"d", d},
           {"q_hot", f.q_hot},
           {"q_cold", f.q_cold},
           {"work", f.work},
           {"cop", json_optional(f.cop)},
           {"mode", mode_name(f.mode)},
           {"second_law_margin", margin},
           {"p", probabilities_json(cat)},
           {"stationary", st.has_value()},
           {"unique", st ? json(st->unique) : json(nullptr)},
           {"stationary_residual", st ? json(st->residual) : json(nullptr)},
           {"catalytic", catalytic}};
    if (flows) {
        json records = json::array();
        for (const auto& r : flows->records) {
            records.push_back({{"source_node", r.source_node},
                               {"target_node", r.target_node},
                               {"source_state", r.source_state},
                               {"target_state", r.target_state},
                               {"delta_p", r.delta_p}});
        }
        j["flows"] = {{"records", records}, {"uniform_flow", json_optional(flows->uniform_flow)}};
    }
    emit_json(out, j);
    return kExitOk;
}

int cmd_search(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const std::size_t d = cfg.d.value_or(1);
    if (d != 1 && d != 2) throw ConfigError("d", "search supports d = 1 or 2, got " + std::to_string(d));
    const SearchResult res = exhaustive_catalytic(cfg.machine, d, {.tol = cfg.tol, .threads = cfg.threads});

    if (cfg.format.value_or(Format::Csv) == Format::Csv) {
        CsvWriter csv(out);
        csv.row({"index", "perm", "q_hot", "q_cold", "work", "cop", "mode", "second_law_margin", "p", "unique"});
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            const auto& r = res.rows[i];
            csv.row({std::to_string(i + 1), r.perm.to_json(), format_double(r.flows.q_hot),
                     format_double(r.flows.q_cold), format_double(r.flows.work), format_optional(r.flows.cop),
                     mode_name(r.flows.mode), format_double(second_law_margin(cfg.machine, r.flows)),
                     format_array(r.catalyst.probabilities()), r.unique ? "1" : "0"});
        }
    } else {
        json rows = json::array();
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            const auto& r = res.rows[i];
            rows.push_back({{"index", i + 1},
                            {"perm", perm_json(r.perm)},
                            {"q_hot", r.flows.q_hot},
                            {"q_cold", r.flows.q_cold},
                            {"work", r.flows.work},
                            {"cop", json_optional(r.flows.cop)},
                            {"mode", mode_name(r.flows.mode)},
                            {"second_law_margin", second_law_margin(cfg.machine, r.flows)},
                            {"p", probabilities_json(r.catalyst)},
                            {"unique", r.unique}});
        }
        emit_json(out, rows);
    }

    if (res.best_refrigerator) {
        const auto& b = res.rows[*res.best_refrigerator];
        err << "best refrigerator: index=" << *res.best_refrigerator + 1 << " perm=" << b.perm.to_json()
            << " cop=" << format_double(*b.flows.cop) << '\n';
    } else {
        err << "best refrigerator: none\n";
    }
    return kExitOk;
}

int cmd_region(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<RegionPoint> pts;
    try {
        pts = scan_region(cfg.beta_ratios, cfg.omega_ratios, cfg.caps,
                          {.max_d = 64, .simulate = true, .tol = cfg.tol, .threads = cfg.threads});
    } catch (const std::invalid_argument& e) {
        throw ConfigError("region", e.what());
    }
    bool ok = true;
    for (const auto& p : pts) {
        if (!p.simulated_mode) continue;
        const bool fridge = *p.simulated_mode == Mode::Refrigerator;
        if ((!fridge && *p.simulated_mode != Mode::Idle) ||
            (fridge && std::abs(*p.cop_simulated - *p.cop_formula) > cfg.tol + p.cop_slack)) {
            ok = false;
            err << "witness at beta_ratio=" << format_double(p.beta_ratio)
                << " omega_ratio=" << format_double(p.omega_ratio) << " does not match the formula\n";
        }
    }

    auto witness_field = [](const RegionPoint& p, bool first) {
        if (!p.witness) return std::string();
        return std::to_string(first ? p.witness->d : p.witness->n_prime);
    };
    if (cfg.format.value_or(Format::Csv) == Format::Csv) {
        CsvWriter csv(out);
        csv.row({"beta_ratio", "omega_ratio", "cap", "coolable", "witness_d", "witness_n_prime", "cop_formula",
                 "cop_simulated"});
        for (const auto& p : pts) {
            csv.row({format_double(p.beta_ratio), format_double(p.omega_ratio), format_double(p.cap),
                     p.coolable ? "1" : "0", witness_field(p, true), witness_field(p, false),
                     format_optional(p.cop_formula), format_optional(p.cop_simulated)});
        }
    } else {
        json rows = json::array();
        for (const auto& p : pts) {
            rows.push_back({{"beta_ratio", p.beta_ratio},
                            {"omega_ratio", p.omega_ratio},
                            {"cap", p.cap},
                            {"coolable", p.coolable},
                            {"witness_d", p.witness ? json(p.witness->d) : json(nullptr)},
                            {"witness_n_prime", p.witness ? json(p.witness->n_prime) : json(nullptr)},
                            {"cop_formula", json_optional(p.cop_formula)},
                            {"cop_simulated", json_optional(p.cop_simulated)},
                            {"simulated_mode", p.simulated_mode ? json(mode_name(*p.simulated_mode)) : json(nullptr)}});
        }
        emit_json(out, rows);
    }
    return ok ? kExitOk : kExitMismatch;
}

int cmd_cop_curve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<CopPoint> curve;
    try {
        curve = cop_curve(cfg.machine, cfg.d_max, cfg.tol);
    } catch (const std::domain_error& e) {
        throw ConfigError("machine", e.what());
    }
    bool ok = true;
    for (const auto& pt : curve) {
        // The zero-power endpoint idles; everything else must follow the formula.
        const bool matches = pt.cop_simulated ? std::abs(*pt.cop_simulated - pt.cop) <= cfg.tol : pt.mode == Mode::Idle;
        if (!matches) {
            ok = false;
            err << "d=" << pt.d << ": simulated COP does not match the formula\n";
        }
    }
    if (cfg.format.value_or(Format::Csv) == Format::Csv) {
        CsvWriter csv(out);
        csv.row({"d", "cop", "normalized_cop", "cop_simulated", "mode"});
        for (const auto& pt : curve) {
            csv.row({std::to_string(pt.d), format_double(pt.cop), format_double(pt.normalized_cop),
                     format_optional(pt.cop_simulated), mode_name(pt.mode)});
        }
    } else {
        json rows = json::array();
        for (const auto& pt : curve) {
            rows.push_back({{"d", pt.d},
                            {"cop", pt.cop},
                            {"normalized_cop", pt.normalized_cop},
                            {"cop_simulated", json_optional(pt.cop_simulated)},
                            {"mode", mode_name(pt.mode)}});
        }
        emit_json(out, rows);
    }
    return ok ? kExitOk : kExitMismatch;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
    VerifyOptions opt;
    opt.seed = cfg.seed;
    opt.tol = cfg.tol;
    opt.threads = cfg.threads;
    const VerifyReport report = run_verify(opt);
    for (const auto& g : report.groups) {
        char time[32];
        std::snprintf(time, sizeof time, "%.3f", g.seconds);
        out << (g.passed ? "PASS " : "FAIL ") << g.name << " checks=" << g.checks << " time=" << time << "s";
        if (!g.passed) out << " first_failure=\"" << g.first_failure << '"';
        out << '\n';
    }
    return report.all_passed() ? kExitOk : kExitMismatch;
}

}  // namespace qfridge::cli
