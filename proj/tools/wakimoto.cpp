// wakimoto: verification campaigns, equation derivation and report merging.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "wak/driver.hpp"
#include "wak/errors.hpp"
#include "wak/parse.hpp"

namespace {

using nlohmann::json;
using namespace wak;

struct Output {
    std::string out;
    std::string format = "json";
};

// --out wins; otherwise WAKIMOTO_OUT_DIR/<default_name>; otherwise stdout.
void emit(const std::string& text, const Output& o, const std::string& default_name) {
    std::string path = o.out;
    if (path.empty()) {
        if (const char* dir = std::getenv("WAKIMOTO_OUT_DIR"); dir && *dir)
            path = (std::filesystem::path(dir) / default_name).string();
    }
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::error_code ec;
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) throw IoError("cannot write '" + path + "'");
    std::cerr << "wrote " << path << "\n";
}

std::pair<int, int> parse_sector(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw SelectorError("sector must be 'm,n', got '" + s + "'");
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const int m = std::stoi(a, &p1), n = std::stoi(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument(s);
        return {m, n};
    } catch (const std::logic_error&) {
        throw SelectorError("sector must be 'm,n', got '" + s + "'");
    }
}

Monomial parse_bar(const std::string& s, bool twisted) {
    SparsePoly p;
    try {
        p = parse_poly(s);
    } catch (const ConfigError& e) {
        throw SelectorError(std::string("bar monomial: ") + e.what());
    }
    if (p.size() != 1 || !(p.terms().front().coeff == LevelScalar(1)))
        throw SelectorError("bar selector must be a single monomial with coefficient 1, got '" + s + "'");
    const Monomial m = p.terms().front().mono;
    for (const auto& vp : m.vars()) {
        const Family f = vp.id().family;
        const bool ok = f == Family::XBAR || f == Family::TBAR || (!twisted && f == Family::YBAR);
        if (!ok) throw SelectorError("'" + var_name(vp.id()) + "' is not a bar coordinate");
    }
    return m;
}

TwistedPart parse_part(const std::string& s) {
    if (s == "first") return TwistedPart::First;
    if (s == "others") return TwistedPart::Others;
    if (s == "all") return TwistedPart::All;
    throw SelectorError("part must be first, others or all, got '" + s + "'");
}

PdeVariant parse_which(const std::string& s) {
    if (s == "general") return PdeVariant::General;
    if (s == "critical") return PdeVariant::Critical;
    if (s == "uyzero") return PdeVariant::UyZero;
    throw SelectorError("which must be general, critical or uyzero, got '" + s + "'");
}

std::string file_tag(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wakimoto realization: verification campaigns and Hirota equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kEngineVersion));

    CampaignConfig cfg;
    std::vector<std::string> k_text;
    Output out;
    bool exhaustive = false, serial = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--max-mode", cfg.max_mode, "largest |mode| (untwisted)");
        sub->add_option("--max-doubled-mode", cfg.max_doubled_mode, "largest |2j| (twisted)");
        sub->add_option("--max-weight", cfg.max_weight, "largest basis weight");
        sub->add_option("--depth", cfg.orbit_depth, "orbit depth for hierarchy targets");
        sub->add_option("--bar-window", cfg.bar_window, "extraction window; 1 is the reduced point");
        sub->add_option("--series-order", cfg.series_order, "truncation order for series checks");
        sub->add_option("--k", k_text, "rational level to specialize at (repeatable)");
        sub->add_option("--format", out.format, "json or latex")->check(CLI::IsMember({"json", "latex"}));
        sub->add_option("--out", out.out, "output file");
    };

    std::string target;
    auto* verify = app.add_subcommand("verify", "run a verification campaign");
    verify->add_option("target", target, "campaign target or 'all'")->required();
    verify->add_flag("--exhaustive", exhaustive, "check every unit instead of stopping at the first failure");
    verify->add_flag("--serial", serial, "disable OpenMP parallelism");
    add_common(verify);

    std::string derive_target, sector = "0,0", bar = "1", part = "all", which = "general";
    bool normalize = false, no_independence = false;
    auto* derive = app.add_subcommand("derive", "derive an equation or PDE");
    derive->add_option("target", derive_target, "untwisted-eq, twisted-eq or pde")
        ->required()
        ->check(CLI::IsMember({"untwisted-eq", "twisted-eq", "pde"}));
    derive->add_option("--sector", sector, "charge sector m,n (untwisted)");
    derive->add_option("--bar", bar, "bar monomial to read off, e.g. 1 or xbar1^2");
    derive->add_option("--part", part, "first, others or all (twisted)");
    derive->add_option("--which", which, "general, critical or uyzero (pde)");
    derive->add_flag("--normalize", normalize, "scale so the leading term has coefficient 1");
    derive->add_flag("--no-independence", no_independence, "keep x3, x4, t3, t5 dependence (twisted)");
    add_common(derive);

    std::vector<std::string> inputs;
    auto* report = app.add_subcommand("report", "merge report documents");
    report->add_option("inputs", inputs, "report files");
    report->add_option("--out", out.out, "output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        for (const auto& k : k_text) {
            try {
                cfg.k_values.push_back(BigRational::parse(k));
            } catch (const Error&) {
                throw ConfigError("--k expects a rational, got '" + k + "'");
            }
        }
        cfg.fail_fast = !exhaustive;
        cfg.policy = serial ? ExecPolicy::Serial : ExecPolicy::Parallel;

        if (verify->parsed()) {
            if (out.format != "json") throw ConfigError("verify writes json reports only");
            const auto results = run_verify(target, cfg);
            const json doc = report_document(results, cfg);
            for (const auto& c : doc["campaigns"])
                std::cerr << (c["pass"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << " ["
                          << c["level"].get<std::string>() << "] " << c["failed"] << "/" << c["checks"] << "\n";
            emit(doc.dump(2) + "\n", out, "report-" + file_tag(target) + ".json");
            return doc["pass"].get<bool>() ? 0 : 1;
        }

        if (derive->parsed()) {
            validate_config("heisenberg", cfg);  // bound checks only
            if (cfg.k_values.size() > 1) throw ConfigError("derive accepts at most one --k");
            const std::optional<BigRational> k0 =
                cfg.k_values.empty() ? std::nullopt : std::optional<BigRational>(cfg.k_values.front());
            std::string text, name;
            if (derive_target == "pde") {
                const PdeVariant v = parse_which(which);
                PdeForm pde = pde_forms(TwistedWakimoto(Level::symbolic()), v);
                if (k0) pde.rhs = pde.rhs.specialize(*k0);
                text = out.format == "latex" ? pde.to_latex() + "\n" : pde_json(pde, v).dump(2) + "\n";
                name = "pde-" + which;
            } else {
                const bool twisted = derive_target == "twisted-eq";
                const Monomial m = parse_bar(bar, twisted);
                HirotaEquation eq;
                if (twisted) {
                    const TwistedPart p = parse_part(part);
                    ExtractionWindow win = twisted_reduced_window(!no_independence);
                    eq = twisted_extract_equation(TwistedWakimoto(Level::symbolic()), m, win, p);
                    name = "twisted-eq-" + part + "-" + file_tag(bar);
                } else {
                    const auto [qm, qn] = parse_sector(sector);
                    const ExtractionWindow win =
                        cfg.bar_window == 1 ? ExtractionWindow::reduced() : ExtractionWindow::window(cfg.bar_window);
                    eq = extract_sector_equation(Wakimoto(Level::symbolic()), qm, qn, m, win);
                    name = "untwisted-eq-" + std::to_string(qm) + "_" + std::to_string(qn) + "-" + file_tag(bar);
                }
                if (k0) eq = eq.specialize(*k0);
                if (normalize) eq = eq.normalized();
                json doc = equation_json(eq);
                doc["selector"] = {{"target", derive_target}, {"bar", bar}, {"normalized", normalize}};
                if (twisted) doc["selector"]["part"] = part;
                else doc["selector"]["sector"] = sector;
                text = out.format == "latex" ? eq.to_latex() + "\n" : doc.dump(2) + "\n";
            }
            emit(text, out, file_tag(name) + (out.format == "latex" ? ".tex" : ".json"));
            return 0;
        }

        if (report->parsed()) {
            const json agg = aggregate_reports(inputs);
            for (const auto& w : agg["warnings"]) std::cerr << "warning: " << w.get<std::string>() << "\n";
            for (const auto& f : agg["failing"]) std::cerr << "FAIL " << f.get<std::string>() << "\n";
            emit(agg.dump(2) + "\n", out, "aggregate.json");
            return agg["pass"].get<bool>() ? 0 : 1;
        }
    } catch (const SelectorError& e) {
        std::cerr << "selector error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
