#include "wak/driver.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <set>

#include "wak/errors.hpp"

namespace wak {

namespace {

using nlohmann::json;

struct TargetInfo {
    const char* name;
    bool needs_inverse;  // uses 1/(k+2), so k = −2 is rejected
};

const TargetInfo kTargets[] = {
    {"heisenberg", false},       {"affine", false},         {"virasoro", false},
    {"sugawara", true},          {"casimir-commute", true}, {"hierarchy", true},
    {"twisted-heisenberg", false}, {"twisted-affine", false}, {"twisted-hierarchy", true},
};

const TargetInfo* find_target(const std::string& name) {
    for (const auto& t : kTargets)
        if (name == t.name) return &t;
    return nullptr;
}

int untwisted_mode(const std::string& target, const CampaignConfig& cfg) {
    if (cfg.max_mode) return *cfg.max_mode;
    return target == "casimir-commute" ? 2 : 3;
}

int untwisted_weight(const std::string& target, const CampaignConfig& cfg) {
    if (cfg.max_weight) return *cfg.max_weight;
    if (target == "casimir-commute") return 4;
    if (target == "virasoro" || target == "sugawara") return 5;
    return 6;
}

CampaignOptions untwisted_options(const std::string& target, const CampaignConfig& cfg) {
    CampaignOptions o;
    o.max_mode = untwisted_mode(target, cfg);
    o.max_weight = untwisted_weight(target, cfg);
    o.policy = cfg.policy;
    o.fail_fast = cfg.fail_fast;
    return o;
}

TwistedOptions twisted_options(const CampaignConfig& cfg) {
    TwistedOptions o;
    o.max_doubled_mode = cfg.max_doubled_mode.value_or(5);
    o.max_weight = cfg.max_weight.value_or(5);
    o.policy = cfg.policy;
    o.fail_fast = cfg.fail_fast;
    return o;
}

// Equations read off at the reduced point and checked on the default τ orbit.
VerificationReport tau_equations(const Wakimoto& wak) {
    const auto win = ExtractionWindow::reduced();
    std::vector<HirotaEquation> eqs;
    for (const Monomial& bar : {Monomial(), bar_monomial({{Family::XBAR, 1, 2}})})
        eqs.push_back(extract_sector_equation(wak, 0, 0, bar, win));
    VerificationReport r = verify_equation_on_tau(eqs, tau_orbit(wak, default_tau_word(), 4), &win);
    r.campaign = "tau-equations";
    return r;
}

VerificationReport twisted_vacuum(const TwistedCasimir& cas) {
    const SparsePoly one = twisted_orbit_vectors(cas, 0, default_twisted_generators()).front();
    VerificationReport r;
    r.campaign = "twisted-vacuum";
    for (int n = 2; n <= 4; ++n)
        r.record(expect_equal(cas.casimir_mode(n, one), SparsePoly(one.arity()),
                              "Omega^M_(" + std::to_string(n) + ")(1x1)", "0"));
    return r;
}

std::string now_utc() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

json failure_json(const Failure& f) {
    return {{"lhs", f.lhs}, {"rhs", f.rhs}, {"difference", f.difference.to_string()}};
}

}  // namespace

const std::vector<std::string>& verify_targets() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& t : kTargets) v.emplace_back(t.name);
        return v;
    }();
    return names;
}

void validate_config(const std::string& target, const CampaignConfig& cfg) {
    std::vector<std::string> targets;
    if (target == "all") {
        targets = verify_targets();
    } else {
        if (!find_target(target)) throw ConfigError("unknown verify target '" + target + "'");
        targets = {target};
    }
    auto positive = [](const char* what, std::optional<int> v) {
        if (v && *v <= 0) throw ConfigError(std::string(what) + " must be positive");
    };
    positive("max-mode", cfg.max_mode);
    positive("max-doubled-mode", cfg.max_doubled_mode);
    positive("max-weight", cfg.max_weight);
    positive("depth", cfg.orbit_depth);
    positive("bar-window", cfg.bar_window);
    positive("series-order", cfg.series_order);
    const BigRational pole(-2);
    for (const auto& t : targets) {
        if (!find_target(t)->needs_inverse) continue;
        for (const auto& k : cfg.k_values)
            if (k == pole) throw ConfigError("k = -2 is a pole of 1/(k+2), which campaign '" + t + "' needs");
    }
}

std::vector<VerificationReport> run_target_reports(const std::string& target, const CampaignConfig& cfg,
                                                   const Level& level) {
    const bool critical = level.value() && *level.value() == BigRational(-2);
    std::vector<VerificationReport> out;
    if (target == "heisenberg") {
        out.push_back(verify_heisenberg(FockSpace(level), untwisted_options(target, cfg)));
    } else if (target == "affine") {
        out.push_back(verify_affine_relations(Wakimoto(level), untwisted_options(target, cfg)));
    } else if (target == "virasoro") {
        // At the critical level the lattice operators are replaced by their critical form.
        out.push_back(verify_virasoro_relations(Wakimoto(level),
                                                critical ? VirasoroKind::LatticeCritical : VirasoroKind::Lattice,
                                                untwisted_options(target, cfg)));
    } else if (target == "sugawara") {
        out.push_back(verify_virasoro_relations(Wakimoto(level), VirasoroKind::Sugawara,
                                                untwisted_options(target, cfg)));
    } else if (target == "casimir-commute") {
        Wakimoto wak(level);
        out.push_back(verify_casimir_commutes(Casimir(wak), untwisted_options(target, cfg)));
    } else if (target == "hierarchy") {
        Wakimoto wak(level);
        Casimir cas(wak);
        out.push_back(verify_untwisted_hierarchy(cas, cfg.orbit_depth.value_or(3), LevelScalar::rational(1, 2),
                                                 cfg.policy));
        out.push_back(tau_equations(wak));
    } else if (target == "twisted-heisenberg") {
        out.push_back(verify_twisted_heisenberg(TwistedFock(level), twisted_options(cfg)));
    } else if (target == "twisted-affine") {
        TwistedWakimoto wak(level);
        out.push_back(verify_twisted_affine(wak, twisted_options(cfg)));
        out.push_back(verify_twisted_equivariance(wak, twisted_options(cfg)));
    } else if (target == "twisted-hierarchy") {
        TwistedWakimoto wak(level);
        TwistedCasimir cas(wak);
        const int depth = cfg.orbit_depth.value_or(2);
        out.push_back(twisted_vacuum(cas));
        out.push_back(verify_twisted_hierarchy(cas, depth, true, cfg.policy));
        out.push_back(verify_twisted_assemblies(cas, 0, 4, twisted_orbit_vectors(cas, depth, default_twisted_generators()),
                                                cfg.policy));
        out.push_back(verify_twisted_virasoro(wak, twisted_options(cfg)));
    } else {
        throw ConfigError("unknown verify target '" + target + "'");
    }
    return out;
}

VerificationReport run_target(const std::string& target, const CampaignConfig& cfg, const Level& level) {
    VerificationReport all;
    all.campaign = target;
    for (auto& r : run_target_reports(target, cfg, level)) all.merge(std::move(r));
    return all;
}

std::vector<CampaignResult> run_verify(const std::string& target, const CampaignConfig& cfg) {
    validate_config(target, cfg);
    const std::vector<std::string> targets = target == "all" ? verify_targets() : std::vector<std::string>{target};
    std::vector<Level> levels{Level::symbolic()};
    for (const auto& k : cfg.k_values) levels.push_back(Level::at(k));

    std::vector<CampaignResult> results;
    for (const auto& t : targets) {
        for (const auto& level : levels) {
            const auto t0 = std::chrono::steady_clock::now();
            auto reports = run_target_reports(t, cfg, level);
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            // Sub-campaigns share the target's wall time, split evenly.
            for (auto& r : reports)
                results.push_back({t, level.label(), std::move(r), secs / static_cast<double>(reports.size())});
        }
    }
    return results;
}

json config_json(const CampaignConfig& cfg) {
    auto opt = [](std::optional<int> v) { return v ? json(*v) : json(nullptr); };
    json ks = json::array();
    for (const auto& k : cfg.k_values) ks.push_back(k.to_string());
    return {{"max_mode", opt(cfg.max_mode)},
            {"max_doubled_mode", opt(cfg.max_doubled_mode)},
            {"max_weight", opt(cfg.max_weight)},
            {"orbit_depth", opt(cfg.orbit_depth)},
            {"bar_window", cfg.bar_window},
            {"series_order", cfg.series_order},
            {"k_values", ks},
            {"fail_fast", cfg.fail_fast}};
}

json report_document(const std::vector<CampaignResult>& results, const CampaignConfig& cfg) {
    std::vector<const CampaignResult*> order;
    for (const auto& r : results) order.push_back(&r);
    std::stable_sort(order.begin(), order.end(), [](const CampaignResult* a, const CampaignResult* b) {
        return std::tie(a->target, a->report.campaign, a->level) < std::tie(b->target, b->report.campaign, b->level);
    });
    json campaigns = json::array();
    bool pass = true;
    double total = 0;
    for (const CampaignResult* r : order) {
        json notes = json::object();
        for (const auto& [k, v] : r->report.notes) notes[k] = v;
        json failures = json::array();
        for (const auto& f : r->report.failures) failures.push_back(failure_json(f));
        campaigns.push_back({{"target", r->target},
                             {"name", r->report.campaign},
                             {"level", r->level},
                             {"checks", r->report.total_checks},
                             {"failed", r->report.failed_checks},
                             {"pass", r->report.pass()},
                             {"notes", notes},
                             {"failures", failures},
                             {"seconds", r->seconds}});
        pass = pass && r->report.pass();
        total += r->seconds;
    }
    return {{"engine_version", kEngineVersion}, {"config", config_json(cfg)}, {"campaigns", campaigns},
            {"pass", pass},  {"total_seconds", total},  {"generated_at", now_utc()}};
}

json operator_terms_json(const SparsePoly& p) {
    json terms = json::array();
    for (const auto& t : p) terms.push_back({{"coeff", t.coeff.to_string()}, {"monomial", t.mono.to_string()}});
    return terms;
}

json equation_json(const HirotaEquation& eq, bool with_latex) {
    json blocks = json::array();
    for (const auto& [ab, P] : eq.blocks)
        blocks.push_back({{"tau", {ab.first, ab.second}}, {"terms", operator_terms_json(P)}});
    json out = {{"kind", "hirota-equation"}, {"single_tau", eq.single_tau}, {"blocks", blocks}};
    if (with_latex) out["latex"] = eq.to_latex();
    return out;
}

json pde_json(const PdeForm& pde, PdeVariant variant, bool with_latex) {
    json terms = json::array();
    for (const auto& [c, m] : pde.terms()) terms.push_back({{"coeff", c.to_string()}, {"monomial", m}});
    json out = {{"kind", "pde"}, {"variant", pde_variant_name(variant)}, {"lhs", "u_t"}, {"rhs", terms}};
    if (with_latex) out["latex"] = pde.to_latex();
    return out;
}

json aggregate_reports(const std::vector<std::string>& paths) {
    json rows = json::array();
    json warnings = json::array();
    if (paths.empty()) warnings.push_back("no input reports; the aggregate is vacuously passing");
    struct Row {
        std::string name, level, source;
        json value;
    };
    std::vector<Row> all;
    for (const auto& path : paths) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot read report '" + path + "'");
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw IoError("malformed report '" + path + "': " + e.what());
        }
        if (!doc.is_object() || !doc.contains("campaigns") || !doc["campaigns"].is_array())
            throw IoError("report '" + path + "' has no campaign list");
        for (const auto& c : doc["campaigns"]) {
            try {
                all.push_back({c.at("name").get<std::string>(), c.at("level").get<std::string>(), path,
                               {{"source", path},
                                {"target", c.value("target", std::string())},
                                {"name", c.at("name")},
                                {"level", c.at("level")},
                                {"checks", c.at("checks")},
                                {"failed", c.at("failed")},
                                {"pass", c.at("pass")},
                                {"seconds", c.value("seconds", 0.0)}}});
            } catch (const json::exception& e) {
                throw IoError("malformed campaign entry in '" + path + "': " + e.what());
            }
        }
    }
    std::stable_sort(all.begin(), all.end(), [](const Row& a, const Row& b) {
        return std::tie(a.name, a.level, a.source) < std::tie(b.name, b.level, b.source);
    });
    bool pass = true;
    double total = 0;
    json failing = json::array();
    for (auto& r : all) {
        const bool ok = r.value["pass"].get<bool>();
        if (!ok) failing.push_back(r.name + " (" + r.level + ")");
        pass = pass && ok;
        total += r.value["seconds"].get<double>();
        rows.push_back(std::move(r.value));
    }
    return {{"inputs", paths.size()}, {"campaigns", rows}, {"failing", failing},
            {"pass", pass},           {"total_seconds", total}, {"warnings", warnings}};
}

}  // namespace wak
