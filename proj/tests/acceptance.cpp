// Acceptance run: one PASS/FAIL line per criterion, followed by a summary.
//
// Exit status is 0 when the failing set equals kKnownFailures (each analysed in
// the decisions ledger and the README) and 1 otherwise, so a regression or a
// newly passing criterion both show up in ctest.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "wak/driver.hpp"
#include "wak/errors.hpp"
#include "wak/parse.hpp"

using namespace wak;

namespace {

const std::set<int> kKnownFailures{4, 8, 9};

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        if (!ok) pass = false;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
    void report(const VerificationReport& r, const std::string& label = {}) {
        std::ostringstream s;
        s << (label.empty() ? r.campaign : label) << ": " << r.failed_checks << " failed of " << r.total_checks;
        for (const auto& [k, v] : r.notes) s << ", " << k << "=" << v;
        if (!r.failures.empty())
            s << "; first: " << r.failures[0].lhs << " diff " << r.failures[0].difference.to_string().substr(0, 160);
        require(r.pass(), s.str());
    }
    void same(const SparsePoly& got, const SparsePoly& want, const std::string& what) {
        if (got == want) {
            require(true, what);
        } else {
            require(false, what + "; derived minus expected: " + (got - want).to_string());
        }
    }
    void same_pde(const PdeForm& got, const SparsePoly& want, const std::string& what) {
        if (got.rhs == want) {
            require(true, what);
        } else {
            require(false, what + "; derived minus expected: " + PdeForm{got.rhs - want, got.relabel}.to_string());
        }
    }
};

std::string note(const VerificationReport& r, const std::string& key) {
    for (const auto& [k, v] : r.notes)
        if (k == key) return v;
    return {};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

const std::string kGolden = WAK_GOLDEN_DIR;

CampaignOptions uopt(int mode, int weight, bool fail_fast = false) {
    CampaignOptions o;
    o.max_mode = mode;
    o.max_weight = weight;
    o.fail_fast = fail_fast;
    return o;
}

TwistedOptions topt(int mode, int weight) {
    TwistedOptions o;
    o.max_doubled_mode = mode;
    o.max_weight = weight;
    return o;
}

SparsePoly block(const HirotaEquation& eq) { return eq.blocks.empty() ? SparsePoly() : eq.blocks.begin()->second; }

Monomial xbar1_sq() { return bar_monomial({{Family::XBAR, 1, 2}}); }

// ---------------------------------------------------------------- criteria

Outcome gram() {
    Outcome o;
    const Level sym = Level::symbolic();
    const GramMatrix g = gram_from_level(sym);
    const SparsePoly expected[3][3] = {{parse_poly("0"), parse_poly("1"), parse_poly("-1")},
                                       {parse_poly("1"), parse_poly("1"), parse_poly("k+1")},
                                       {parse_poly("-1"), parse_poly("k+1"), parse_poly("1")}};
    bool entries = true;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) entries = entries && SparsePoly::constant(g(i, j)) == expected[i][j];
    o.require(entries, "Gram matrix on (delta, alpha, gamma) is [[0,1,-1],[1,1,k+1],[-1,k+1,1]]");
    o.require(g.determinant() == LevelScalar(-2) * LevelScalar::k() - LevelScalar(4),
              "det G = " + g.determinant().to_string());
    bool zero = true;
    for (const auto& r : classification_residuals(g, sym)) zero = zero && r.is_zero();
    o.require(zero, "classification residuals vanish");
    return o;
}

Outcome affine() {
    Outcome o;
    o.report(verify_affine_relations(Wakimoto(Level::symbolic()), uopt(3, 6)));
    return o;
}

Outcome virasoro() {
    Outcome o;
    Wakimoto wak(Level::symbolic());
    const auto lat = verify_virasoro_relations(wak, VirasoroKind::Lattice, uopt(3, 5));
    o.report(lat);
    o.require(note(lat, "central_charge") == "3", "lattice central charge 3");
    const auto sug = verify_virasoro_relations(wak, VirasoroKind::Sugawara, uopt(3, 5));
    o.report(sug);
    const LevelScalar k = LevelScalar::k();
    o.require(note(sug, "central_charge") == (LevelScalar(3) * k / (k + LevelScalar(2))).to_string(),
              "Sugawara central charge 3k/(k+2)");
    return o;
}

Outcome casimir_commutes() {
    Outcome o;
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    // Stops at the first failing basis vector; see the ledger for the full-sweep cost.
    o.report(verify_casimir_commutes(cas, uopt(2, 4, true)));
    o.report(verify_casimir_covariance(cas, uopt(2, 2)), "casimir-covariance (measured replacement identity)");
    return o;
}

Outcome untwisted_hierarchy() {
    Outcome o;
    Wakimoto wak(Level::symbolic());
    Casimir cas(wak);
    const SparsePoly vac = tensor_product(SparsePoly::constant(1, 1), SparsePoly::constant(1, 1));
    o.require(cas.casimir_mode(0, vac).is_zero(), "Omega_(0)(1x1) = 0");
    o.report(verify_untwisted_hierarchy(cas, 3));
    const auto win = ExtractionWindow::reduced();
    const std::vector<HirotaEquation> eqs{extract_sector_equation(wak, 0, 0, Monomial(), win),
                                          extract_sector_equation(wak, 0, 0, xbar1_sq(), win)};
    o.report(verify_equation_on_tau(eqs, tau_orbit(wak, default_tau_word(), 4), &win),
             "both displayed equations on the tau orbit (parameter degree <= 4)");
    return o;
}

Outcome equations() {
    Outcome o;
    Wakimoto wak(Level::symbolic());
    const auto win = ExtractionWindow::reduced();
    const auto e1 = extract_sector_equation(wak, 0, 0, Monomial(), win).normalized();
    const auto e2 = extract_sector_equation(wak, 0, 0, xbar1_sq(), win).normalized();
    o.require(e1.blocks.size() == 1 && e1.blocks.count({-1, 1}) == 1, "coefficient of 1 lives on tau_-1 . tau_1");
    o.same(block(e1), parse_poly("x1*y1*(du1 - dv1) + x1 + y1"), "coefficient of 1");
    o.same(block(e2), parse_poly("x1*y1*du1^3 - x1*y1*du1^2*dv1 + x1*du1^2 + 3*y1*du1^2 - 2*y1*du1*dv1 + 2*du1"),
           "coefficient of xbar1^2");
    o.require(read_file(kGolden + "/untwisted_eq_0_0_1.tex") == e1.to_latex() + "\n", "golden latex, coefficient of 1");
    o.require(read_file(kGolden + "/untwisted_eq_0_0_xbar1_2.tex") == e2.to_latex() + "\n",
              "golden latex, coefficient of xbar1^2");
    auto golden_terms = [&](const std::string& file, const HirotaEquation& eq) {
        const auto doc = nlohmann::json::parse(read_file(kGolden + "/" + file));
        return doc["blocks"] == equation_json(eq)["blocks"];
    };
    o.require(golden_terms("untwisted_eq_0_0_1.json", e1), "golden json terms, coefficient of 1");
    o.require(golden_terms("untwisted_eq_0_0_xbar1_2.json", e2), "golden json terms, coefficient of xbar1^2");
    return o;
}

Outcome twisted_module() {
    Outcome o;
    TwistedWakimoto wak(Level::symbolic());
    const SparsePoly one = SparsePoly::constant(1);
    o.same(wak.field_mode(AffineGen::E, 0, one), parse_poly("-1/2"), "e^M_(0) 1 = -1/2");
    o.same(wak.virasoro_mode(0, one), parse_poly("1/8"), "L^M_0 1 = 1/8");
    o.report(verify_twisted_heisenberg(wak.fock(), topt(5, 5)));
    o.report(verify_twisted_affine(wak, topt(5, 5)));
    return o;
}

Outcome twisted_hierarchy() {
    Outcome o;
    TwistedWakimoto wak(Level::symbolic());
    TwistedCasimir cas(wak);
    const SparsePoly vac = tensor_product(SparsePoly::constant(1), SparsePoly::constant(1), kTwistedLayout);
    for (int n = 2; n <= 4; ++n)
        o.require(cas.casimir_mode(n, vac).is_zero(), "Omega^M_(" + std::to_string(n) + ")(1x1) = 0");
    o.report(verify_twisted_hierarchy(cas, 2));
    const auto vecs = twisted_orbit_vectors(cas, 2, default_twisted_generators());
    o.report(verify_twisted_assemblies(cas, 0, 4, vecs));
    o.report(verify_twisted_covariance(cas, topt(3, 3), 0, 3), "twisted-covariance (measured replacement identity)");
    return o;
}

Outcome twisted_chain() {
    Outcome o;
    TwistedWakimoto wak(Level::symbolic());
    const auto win = twisted_reduced_window(true);
    auto part = [&](TwistedPart p) { return twisted_extract_equation(wak, Monomial(), win, p); };
    const SparsePoly a = parse_poly(
        "-8/45*cp^2*x2^2*dw1^6 - 1/3*(t1+cm*x1)^2*dw1^4 - 2*(t1+cm*x1)*Dx1*dw1^2 - 4*cp*x2*Dx2*dw1^2"
        " - 1/2*(Dx1^2-du1^2)");
    const SparsePoly b = parse_poly(
        "4/3*cp*x2*dw1^4 + 2*du1*dw1 + Dx2 + 1/2*dw1^2 + k^2/8*(Dt1^2-dw1^2) + k/2*(Dt1*Dx1-du1*dw1)"
        " + 1/2*(Dx1^2-du1^2) - k^2/8*(Dt1^2+dw1^2) - k/2*(Dt1*Dx1+du1*dw1)");
    const SparsePoly c = parse_poly(
        "-8/45*cp^2*x2^2*dw1^6 - 1/3*((t1+cm*x1)^2-4*cp*x2)*dw1^4 - 2*(t1+cm*x1)*Dx1*dw1^2"
        " + 1/4*(2-k^2)*dw1^2 + (2-k)*du1*dw1 + Dx2");
    const HirotaEquation all = part(TwistedPart::All);
    o.same(block(part(TwistedPart::First)), a, "first-term display");
    o.same(block(part(TwistedPart::Others)), b, "other-terms display");
    o.same(block(all), c, "final bilinear equation");
    o.same(a + b, c, "printed first + other displays sum to printed final equation");

    ParseOptions po;
    po.pde = true;
    const SparsePoly general = parse_poly(
        "8/45*cp^2*t^2*(u_xxxxxx+30*u_xxxx*u_xx+60*u_xx^3) + 1/3*((x+cm*y)^2-4*cp*t)*(u_xxxx+6*u_xx^2)"
        " + 1/2*(k^2-2)*u_xx + (k-2)*u_xy + 2*(x+cm*y)*(u_xxy+2*u_xx*u_y)", po);
    const SparsePoly critical = parse_poly(
        "1/3*(x+y)^2*(u_xxxx+6*u_xx^2) + 2*(x+y)*(u_xxy+2*u_xx*u_y) + u_xx - 4*u_xy", po);
    const SparsePoly uyzero = parse_poly(
        "2/45*(k+2)^2*t^2*(u_xxxxxx+30*u_xxxx*u_xx+60*u_xx^3) + 1/3*(x^2-2*(k+2)*t)*(u_xxxx+6*u_xx^2)"
        " + 1/2*(k^2-2)*u_xx", po);
    o.same_pde(pde_forms(wak, PdeVariant::General), general, "general PDE");
    o.same_pde(pde_forms(wak, PdeVariant::Critical), critical, "critical-level PDE");
    o.same_pde(pde_forms(wak, PdeVariant::UyZero), uyzero, "u_y = 0 PDE");

    const std::pair<const char*, std::string> goldens[] = {
        {"twisted_eq_all_1.tex", all.to_latex()},
        {"twisted_eq_first_1.tex", part(TwistedPart::First).to_latex()},
        {"twisted_eq_others_1.tex", part(TwistedPart::Others).to_latex()},
        {"pde_general.tex", pde_forms(wak, PdeVariant::General).to_latex()},
        {"pde_critical.tex", pde_forms(wak, PdeVariant::Critical).to_latex()},
        {"pde_uyzero.tex", pde_forms(wak, PdeVariant::UyZero).to_latex()},
    };
    for (const auto& [file, text] : goldens)
        o.require(read_file(kGolden + "/" + file) == text + "\n", std::string("golden ") + file + " is stable");
    const SparsePoly tau = parse_poly("1 + 2*x1 + x2*t1 - 3*t1^2 + x1*x2^2 + t1^3*x1");
    o.require(pde_residual_check(block(all), PdeRelabel{}, tau, 6).is_zero(),
              "derived PDE residual vanishes through order 6");
    return o;
}

Outcome hirota_machinery() {
    Outcome o;
    std::mt19937 rng(20240611);
    const std::vector<VarId> coords{var(Family::X, 1), var(Family::X, 2), var(Family::X, 3), var(Family::Y, 1),
                                    var(Family::Y, 2), var(Family::T, 1), var(Family::T, 3)};
    const std::vector<VarId> symbols{var(Family::U, 1), var(Family::U, 2), var(Family::U, 3), var(Family::V, 1),
                                     var(Family::W, 1), var(Family::W, 2)};
    auto random_poly = [&](const std::vector<VarId>& vars, int terms, int max_deg) {
        PolyBuilder pb(0);
        for (int i = 0; i < terms; ++i) {
            Monomial m;
            const int d = static_cast<int>(rng() % static_cast<unsigned>(max_deg + 1));
            for (int j = 0; j < d; ++j) m.multiply_var(vars[rng() % vars.size()]);
            pb.add(m, LevelScalar(static_cast<long long>(rng() % 9) - 4));
        }
        return pb.build();
    };
    int bad_hbo = 0, bad_odd = 0, bad_flip = 0;
    const int cases = 100;
    for (int c = 0; c < cases; ++c) {
        const SparsePoly f = random_poly(coords, 4, 4), g = random_poly(coords, 4, 4);
        const SparsePoly P = random_poly(symbols, 3, 4);
        if (!hbo_identity_residual(P, f).is_zero()) ++bad_hbo;
        const SparsePoly odd = P - sign_flip(P);
        if (!odd_operator_vanishes(odd) || !hirota_apply(odd, f, f).is_zero()) ++bad_odd;
        if (!(hirota_apply(P, f, g) == hirota_apply(sign_flip(P), g, f))) ++bad_flip;
    }
    o.require(bad_hbo == 0, "bar-operator conversion identity on " + std::to_string(cases) + " random pairs, " +
                                std::to_string(bad_hbo) + " failures");
    o.require(bad_odd == 0, "odd operators vanish on tau.tau, " + std::to_string(bad_odd) + " failures");
    o.require(bad_flip == 0, "sign flip swaps the factors, " + std::to_string(bad_flip) + " failures");
    return o;
}

Outcome specialization() {
    Outcome o;
    for (int k0 : {0, 1, -1, 3}) {
        const Level lv = Level::at(k0);
        const std::string at = " at k=" + std::to_string(k0);
        bool zero = true;
        for (const auto& r : classification_residuals(gram_from_level(lv), lv)) zero = zero && r.is_zero();
        o.require(zero && gram_from_level(lv).determinant() == LevelScalar(-2 * k0 - 4), "Gram data" + at);
        Wakimoto wak(lv);
        o.report(verify_affine_relations(wak, uopt(3, 5)), "affine" + at);
        o.report(verify_virasoro_relations(wak, VirasoroKind::Lattice, uopt(3, 5)), "virasoro-lattice" + at);
        const auto sug = verify_virasoro_relations(wak, VirasoroKind::Sugawara, uopt(3, 4));
        o.report(sug, "virasoro-sugawara" + at);
        o.require(note(sug, "central_charge") == BigRational(3 * k0, k0 + 2).to_string(), "Sugawara central charge" + at);
        Casimir cas(wak);
        o.report(verify_casimir_covariance(cas, uopt(2, 2)), "casimir-covariance" + at);
        o.report(verify_untwisted_hierarchy(cas, 3), "untwisted-hierarchy" + at);
        const auto win = ExtractionWindow::reduced();
        const std::vector<HirotaEquation> eqs{
            extract_sector_equation(Wakimoto(Level::symbolic()), 0, 0, Monomial(), win).specialize(k0),
            extract_sector_equation(Wakimoto(Level::symbolic()), 0, 0, xbar1_sq(), win).specialize(k0)};
        o.report(verify_equation_on_tau(eqs, tau_orbit(wak, default_tau_word(), 4), &win), "tau equations" + at);

        TwistedWakimoto tw(lv);
        TwistedCasimir tcas(tw);
        o.report(verify_twisted_heisenberg(tw.fock(), topt(5, 5)), "twisted-heisenberg" + at);
        o.report(verify_twisted_affine(tw, topt(5, 5)), "twisted-affine" + at);
        o.report(verify_twisted_virasoro(tw, topt(5, 5)), "twisted-virasoro" + at);
        o.report(verify_twisted_equivariance(tw, topt(5, 5)), "twisted-equivariance" + at);
        const SparsePoly vac = tensor_product(SparsePoly::constant(1), SparsePoly::constant(1), kTwistedLayout);
        bool vz = true;
        for (int n = 2; n <= 4; ++n) vz = vz && tcas.casimir_mode(n, vac).is_zero();
        o.require(vz, "Omega^M_(n)(1x1) = 0, n = 2..4" + at);
        o.report(verify_twisted_assemblies(tcas, 0, 4, twisted_orbit_vectors(tcas, 2, default_twisted_generators())),
                 "twisted-assemblies" + at);
    }
    Wakimoto crit(Level::at(-2));
    o.report(verify_virasoro_relations(crit, VirasoroKind::LatticeCritical, uopt(3, 5)),
             "virasoro-lattice-critical at k=-2");
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"Gram data", gram},
        {"affine relations", affine},
        {"Virasoro (lattice, Sugawara)", virasoro},
        {"Casimir commutes with the diagonal action", casimir_commutes},
        {"untwisted hierarchy and tau equations", untwisted_hierarchy},
        {"untwisted equation reproduction", equations},
        {"twisted module", twisted_module},
        {"twisted hierarchy and assemblies", twisted_hierarchy},
        {"twisted equation chain and PDEs", twisted_chain},
        {"Hirota machinery properties", hirota_machinery},
        {"specialization consistency", specialization},
    };
    std::set<int> failed;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << criteria[i].first << " ("
                  << static_cast<int>(secs + 0.5) << " s)" << std::endl;
        for (const auto& d : o.details) std::cout << "       " << d << "\n";
        if (!o.pass) failed.insert(id);
    }
    std::cout << "summary: " << criteria.size() - failed.size() << " of " << criteria.size() << " criteria pass";
    if (!failed.empty()) {
        std::cout << "; failing:";
        for (int id : failed) std::cout << " " << id;
    }
    std::cout << "; documented failures:";
    for (int id : kKnownFailures) std::cout << " " << id;
    std::cout << std::endl;
    return failed == kKnownFailures ? 0 : 1;
}
