#include "wak/hirota.hpp"

#include <algorithm>
#include <unordered_map>

#include "wak/errors.hpp"

namespace wak {

namespace {

bool is_bar(Family f) { return f == Family::XBAR || f == Family::YBAR || f == Family::TBAR; }
bool is_coordinate(Family f) { return f == Family::X || f == Family::Y || f == Family::T; }
bool is_ordinary_derivative(Family f) { return f == Family::DX || f == Family::DY || f == Family::DT; }

Family bar_of(Family coordinate) {
    switch (coordinate) {
        case Family::X: return Family::XBAR;
        case Family::Y: return Family::YBAR;
        default: return Family::TBAR;
    }
}

Family ordinary_of(Family coordinate) {
    switch (coordinate) {
        case Family::X: return Family::DX;
        case Family::Y: return Family::DY;
        default: return Family::DT;
    }
}

// Slot families → (coordinate family, sign of the bar part).
bool slot_coordinate(Family f, Family& coord, int& sign) {
    switch (f) {
        case Family::XP: coord = Family::X; sign = 1; return true;
        case Family::YP: coord = Family::Y; sign = 1; return true;
        case Family::TP: coord = Family::T; sign = 1; return true;
        case Family::XPP: coord = Family::X; sign = -1; return true;
        case Family::YPP: coord = Family::Y; sign = -1; return true;
        case Family::TPP: coord = Family::T; sign = -1; return true;
        default: return false;
    }
}

long long binomial(unsigned n, unsigned k) {
    long long r = 1;
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

LevelScalar factorial(unsigned n) {
    BigRational r(1);
    for (unsigned i = 2; i <= n; ++i) r *= BigRational(static_cast<long long>(i));
    return LevelScalar(r);
}

// (a + s·b)^e as a polynomial in the two variables.
SparsePoly binomial_power(VarId a, VarId b, int s, unsigned e, int arity) {
    std::vector<Term> terms;
    for (unsigned j = 0; j <= e; ++j) {
        Monomial m(arity);
        m.multiply_var(a, e - j);
        m.multiply_var(b, j);
        long long c = binomial(e, j);
        if (s < 0 && (j % 2)) c = -c;
        terms.push_back({std::move(m), LevelScalar(c)});
    }
    return SparsePoly::from_terms(std::move(terms), arity);
}

// Replaces each term's variables through `expand`, which maps (var, exp) to a
// polynomial or returns false to keep the factor as is.
template <class Expand>
SparsePoly substitute(const SparsePoly& w, Expand expand) {
    const int arity = w.arity();
    PolyBuilder pb(arity);
    for (const auto& t : w) {
        Monomial kept = Monomial::from_sorted({}, arity, t.mono.charges());
        SparsePoly acc = SparsePoly::constant(t.coeff, arity);
        for (const auto& vp : t.mono.vars()) {
            SparsePoly img(arity);
            if (expand(vp.id(), vp.exp, arity, img))
                acc = acc * img;
            else
                kept.multiply_var(vp.id(), vp.exp);
        }
        pb.add_product(acc, kept, LevelScalar(1));
    }
    return pb.build();
}

SparsePoly derive_multi(const SparsePoly& f, const Monomial& d) {
    SparsePoly r = f;
    for (const auto& vp : d.vars()) {
        for (unsigned i = 0; i < vp.exp && !r.is_zero(); ++i) r = r.derive(vp.id());
    }
    return r;
}

// Derivatives of a fixed polynomial by multi-index, cached.
class DerivativeCache {
public:
    explicit DerivativeCache(const SparsePoly& f) : f_(f) {}

    const SparsePoly& get(const Monomial& d) {
        auto it = cache_.find(d);
        if (it != cache_.end()) return it->second;
        return cache_.emplace(d, derive_multi(f_, d)).first->second;
    }

private:
    const SparsePoly& f_;
    std::unordered_map<Monomial, SparsePoly, MonomialHash> cache_;
};

// Σ_{b ≤ beta} Π C(β_v, b_v) (−1)^{|β−b|} ∂^b f · ∂^{β−b} g; beta is in coordinates.
SparsePoly hirota_product(const Monomial& beta, DerivativeCache& fc, DerivativeCache& gc) {
    const auto& vars = beta.vars();
    PolyBuilder pb(0);
    std::vector<unsigned> b(vars.size(), 0);
    while (true) {
        Monomial df, dg;
        long long c = 1;
        int parity = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            df.multiply_var(vars[i].id(), b[i]);
            dg.multiply_var(vars[i].id(), vars[i].exp - b[i]);
            c *= binomial(vars[i].exp, b[i]);
            parity += vars[i].exp - b[i];
        }
        if (parity % 2) c = -c;
        const SparsePoly& a = fc.get(df);
        if (!a.is_zero()) {
            const SparsePoly& d = gc.get(dg);
            if (!d.is_zero()) pb.add(a * d, LevelScalar(c));
        }
        std::size_t i = 0;
        for (; i < vars.size(); ++i) {
            if (b[i] < vars[i].exp) {
                ++b[i];
                break;
            }
            b[i] = 0;
        }
        if (i == vars.size()) break;
    }
    return pb.build();
}

}  // namespace

Family hirota_symbol(Family coordinate) {
    switch (coordinate) {
        case Family::X:
        case Family::XBAR: return Family::U;
        case Family::Y:
        case Family::YBAR: return Family::V;
        case Family::T:
        case Family::TBAR: return Family::W;
        default: throw Error(std::string("no Hirota symbol for family ") + family_name(coordinate));
    }
}

Family coordinate_of(Family symbol) {
    switch (symbol) {
        case Family::U:
        case Family::DX: return Family::X;
        case Family::V:
        case Family::DY: return Family::Y;
        case Family::W:
        case Family::DT: return Family::T;
        default: throw Error(std::string("not a derivative symbol: ") + family_name(symbol));
    }
}

bool is_hirota_symbol(Family f) { return f == Family::U || f == Family::V || f == Family::W; }

int hirota_degree(const Monomial& m) {
    int d = 0;
    for (const auto& vp : m.vars())
        if (is_hirota_symbol(vp.id().family)) d += static_cast<int>(vp.exp);
    return d;
}

SparsePoly to_bar_coordinates(const SparsePoly& w) {
    return substitute(w, [](VarId v, unsigned e, int arity, SparsePoly& out) {
        Family coord;
        int s;
        if (!slot_coordinate(v.family, coord, s)) return false;
        out = binomial_power(var(coord, v.index), var(bar_of(coord), v.index), s, e, arity);
        return true;
    });
}

SparsePoly from_bar_coordinates(const SparsePoly& w) {
    const LevelScalar half = LevelScalar::rational(1, 2);
    return substitute(w, [&half](VarId v, unsigned e, int arity, SparsePoly& out) {
        Family primed, dprimed;
        int s;
        switch (v.family) {
            case Family::X: primed = Family::XP; dprimed = Family::XPP; s = 1; break;
            case Family::Y: primed = Family::YP; dprimed = Family::YPP; s = 1; break;
            case Family::T: primed = Family::TP; dprimed = Family::TPP; s = 1; break;
            case Family::XBAR: primed = Family::XP; dprimed = Family::XPP; s = -1; break;
            case Family::YBAR: primed = Family::YP; dprimed = Family::YPP; s = -1; break;
            case Family::TBAR: primed = Family::TP; dprimed = Family::TPP; s = -1; break;
            default: return false;
        }
        LevelScalar scale(1);
        for (unsigned i = 0; i < e; ++i) scale *= half;
        out = binomial_power(var(primed, v.index), var(dprimed, v.index), s, e, arity).scaled(scale);
        return true;
    });
}

SparsePoly with_charge(const SparsePoly& p, int q) {
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p) terms.push_back({Monomial::from_sorted(t.mono.vars(), 1, {q, 0}), t.coeff});
    return SparsePoly::from_terms(std::move(terms), 1);
}

SparsePoly uncharged(const SparsePoly& p) {
    if (p.arity() == 0) return p;
    std::vector<Term> terms;
    terms.reserve(p.size());
    for (const auto& t : p) terms.push_back({Monomial::from_sorted(t.mono.vars(), 0, {0, 0}), t.coeff});
    return SparsePoly::from_terms(std::move(terms), 0);
}

SparsePoly hirota_apply(const HirotaOperator& P, const SparsePoly& f0, const SparsePoly& g0) {
    const SparsePoly f = uncharged(f0);
    const SparsePoly g = uncharged(g0);
    DerivativeCache fc(f), gc(g);
    std::unordered_map<Monomial, SparsePoly, MonomialHash> products;
    PolyBuilder pb(0);
    for (const auto& t : P) {
        Monomial pre, beta, alpha;
        for (const auto& vp : t.mono.vars()) {
            VarId v = vp.id();
            if (is_hirota_symbol(v.family))
                beta.multiply_var(var(coordinate_of(v.family), v.index), vp.exp);
            else if (is_ordinary_derivative(v.family))
                alpha.multiply_var(var(coordinate_of(v.family), v.index), vp.exp);
            else if (is_bar(v.family))
                throw Error("bar variable " + var_name(v) + " in a Hirota operator");
            else
                pre.multiply_var(v, vp.exp);
        }
        auto it = products.find(beta);
        if (it == products.end()) it = products.emplace(beta, hirota_product(beta, fc, gc)).first;
        if (it->second.is_zero()) continue;
        SparsePoly r = alpha.has_vars() ? derive_multi(it->second, alpha) : it->second;
        pb.add_product(r, pre, t.coeff);
    }
    return pb.build();
}

HirotaOperator hbo_convert(const HirotaOperator& P, const Monomial& bar) {
    Monomial m;
    LevelScalar c(1);
    for (const auto& vp : bar.vars()) {
        VarId v = vp.id();
        if (!is_bar(v.family)) throw Error("hbo_convert: " + var_name(v) + " is not a bar variable");
        m.multiply_var(var(hirota_symbol(v.family), v.index), vp.exp);
        c /= factorial(vp.exp);
    }
    return P.times_monomial(m, c);
}

HirotaOperator sign_flip(const HirotaOperator& P) {
    return P.scale_by([](const Monomial& m) { return LevelScalar(hirota_degree(m) % 2 ? -1 : 1); });
}

bool odd_operator_vanishes(const HirotaOperator& P) {
    for (const auto& t : P)
        if (hirota_degree(t.mono) % 2 == 0) return false;
    return true;
}

SparsePoly shifted(const SparsePoly& f, int s) {
    return substitute(f, [s](VarId v, unsigned e, int arity, SparsePoly& out) {
        if (!is_coordinate(v.family)) return false;
        out = binomial_power(v, var(bar_of(v.family), v.index), s, e, arity);
        return true;
    });
}

SparsePoly hbo_identity_residual(const HirotaOperator& P, const SparsePoly& f0) {
    const SparsePoly f = uncharged(f0);
    const SparsePoly G = shifted(f, 1) * shifted(f, -1);
    PolyBuilder lhs(0);
    for (const auto& t : P) {
        Monomial d;
        for (const auto& vp : t.mono.vars()) {
            if (!is_hirota_symbol(vp.id().family)) throw Error("hbo_identity_residual: P must be pure Hirota");
            d.multiply_var(var(bar_of(coordinate_of(vp.id().family)), vp.id().index), vp.exp);
        }
        lhs.add(derive_multi(G, d), t.coeff);
    }
    SparsePoly L = lhs.build();
    auto bar_part = [](const Monomial& m) {
        Monomial b;
        for (const auto& vp : m.vars())
            if (is_bar(vp.id().family)) b.multiply_var(vp.id(), vp.exp);
        return b;
    };
    std::vector<Monomial> support;
    for (const SparsePoly* src : std::initializer_list<const SparsePoly*>{&L, &G})
        for (const auto& t : *src) support.push_back(bar_part(t.mono));
    std::sort(support.begin(), support.end());
    support.erase(std::unique(support.begin(), support.end()), support.end());
    PolyBuilder rhs(0);
    for (const auto& g : support) rhs.add_product(hirota_apply(hbo_convert(P, g), f, f), g, LevelScalar(1));
    return L - rhs.build();
}

// ---------------------------------------------------------------- equations

bool HirotaEquation::is_zero() const {
    for (const auto& [k, p] : blocks)
        if (!p.is_zero()) return false;
    return true;
}

void HirotaEquation::add(int a, int b, const HirotaOperator& P) {
    if (P.is_zero()) return;
    HirotaOperator Q;
    if (a > b) {
        std::swap(a, b);
        Q = sign_flip(P);
    } else if (a == b) {
        Q = P.filter([](const Monomial& m) { return hirota_degree(m) % 2 == 0; });
    } else {
        Q = P;
    }
    auto& slot = blocks[{a, b}];
    slot += Q;
    if (slot.is_zero()) blocks.erase({a, b});
}

HirotaEquation HirotaEquation::scaled(const LevelScalar& c) const {
    HirotaEquation r;
    r.single_tau = single_tau;
    if (c.is_zero()) return r;
    for (const auto& [k, p] : blocks) r.blocks.emplace(k, p.scaled(c));
    return r;
}

namespace {

// True when a ranks strictly above b as the leading term.
bool leads(const Monomial& a, const Monomial& b) {
    int da = hirota_degree(a), db = hirota_degree(b);
    if (da != db) return da > db;
    std::vector<VarPower> ha, hb;
    for (const auto& vp : a.vars())
        if (is_hirota_symbol(vp.id().family)) ha.push_back(vp);
    for (const auto& vp : b.vars())
        if (is_hirota_symbol(vp.id().family)) hb.push_back(vp);
    for (std::size_t i = 0; i < std::min(ha.size(), hb.size()); ++i) {
        if (ha[i].code != hb[i].code) return ha[i].code < hb[i].code;
        if (ha[i].exp != hb[i].exp) return ha[i].exp > hb[i].exp;
    }
    if (ha.size() != hb.size()) return ha.size() > hb.size();
    int pa = a.degree() - da, pb = b.degree() - db;
    if (pa != pb) return pa > pb;
    return a < b;
}

}  // namespace

HirotaEquation HirotaEquation::normalized() const {
    const Term* lead = nullptr;
    for (const auto& [k, p] : blocks)
        for (const auto& t : p)
            if (!lead || leads(t.mono, lead->mono)) lead = &t;
    if (!lead) return *this;
    return scaled(lead->coeff.inverse());
}

HirotaEquation HirotaEquation::specialize(const BigRational& k0) const {
    HirotaEquation r;
    r.single_tau = single_tau;
    for (const auto& [k, p] : blocks) {
        SparsePoly s = p.specialize(k0);
        if (!s.is_zero()) r.blocks.emplace(k, std::move(s));
    }
    return r;
}

bool operator==(const HirotaEquation& a, const HirotaEquation& b) {
    return a.single_tau == b.single_tau && a.blocks == b.blocks;
}

namespace {

std::string var_latex(VarId v) {
    const std::string i = std::to_string(v.index);
    switch (v.family) {
        case Family::X: return "x_{" + i + "}";
        case Family::Y: return "y_{" + i + "}";
        case Family::T: return "t_{" + i + "}";
        case Family::U: return "\\partial_{u_{" + i + "}}";
        case Family::V: return "\\partial_{v_{" + i + "}}";
        case Family::W: return "\\partial_{w_{" + i + "}}";
        case Family::DX: return "\\partial_{x_{" + i + "}}";
        case Family::DY: return "\\partial_{y_{" + i + "}}";
        case Family::DT: return "\\partial_{t_{" + i + "}}";
        case Family::XBAR: return "\\bar{x}_{" + i + "}";
        case Family::YBAR: return "\\bar{y}_{" + i + "}";
        case Family::TBAR: return "\\bar{t}_{" + i + "}";
        case Family::PARAM: return var_name(v);
        default: return var_name(v);
    }
}

std::string tau_latex(int a, bool single) {
    if (single) return "\\tau";
    return "\\tau_{" + std::to_string(a) + "}";
}

}  // namespace

std::string monomial_latex(const Monomial& m) {
    std::string out;
    // Prefactor first, derivative symbols after it.
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& vp : m.vars()) {
            Family f = vp.id().family;
            bool deriv = is_hirota_symbol(f) || is_ordinary_derivative(f);
            if (deriv != (pass == 1)) continue;
            if (!out.empty()) out += " ";
            out += var_latex(vp.id());
            if (vp.exp > 1) out += "^{" + std::to_string(vp.exp) + "}";
        }
    }
    return out;
}

std::string combination_latex(const std::vector<std::pair<LevelScalar, std::string>>& terms) {
    if (terms.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [c, mono] : terms) {
        std::string coeff;
        bool neg = false;
        if (c.is_constant()) {
            BigRational v = c.constant_value();
            neg = v.sign() < 0;
            BigRational a = v.abs();
            if (!a.is_one() || mono.empty())
                coeff = a.is_integer() ? a.to_string()
                                       : "\\frac{" + a.numerator_string() + "}{" + a.denominator_string() + "}";
        } else {
            coeff = "\\left(" + c.to_latex() + "\\right)";
        }
        if (first)
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        first = false;
        out += coeff;
        if (!coeff.empty() && !mono.empty()) out += " ";
        out += mono;
    }
    return out;
}

std::string operator_latex(const SparsePoly& P) {
    // Terms with derivative symbols of higher total degree first.
    std::vector<const Term*> order;
    for (const auto& t : P) order.push_back(&t);
    std::stable_sort(order.begin(), order.end(), [](const Term* a, const Term* b) { return leads(a->mono, b->mono); });
    std::vector<std::pair<LevelScalar, std::string>> terms;
    for (const Term* t : order) terms.emplace_back(t->coeff, monomial_latex(t->mono));
    return combination_latex(terms);
}

std::string HirotaEquation::to_latex() const {
    if (is_zero()) return "0 = 0";
    std::string out;
    bool first = true;
    for (const auto& [k, p] : blocks) {
        if (!first) out += " + ";
        first = false;
        out += "\\left[" + operator_latex(p) + "\\right] " + tau_latex(k.first, single_tau) + "\\cdot" +
               tau_latex(k.second, single_tau);
    }
    return out + " = 0";
}

std::string HirotaEquation::to_string() const {
    if (is_zero()) return "0 = 0";
    std::string out;
    bool first = true;
    for (const auto& [k, p] : blocks) {
        if (!first) out += " + ";
        first = false;
        out += "[" + p.to_string() + "] ";
        out += single_tau ? "tau.tau" : "tau" + std::to_string(k.first) + ".tau" + std::to_string(k.second);
    }
    return out + " = 0";
}

// ---------------------------------------------------------------- extraction

bool ExtractionWindow::admits_bar(const Monomial& bar) const {
    for (const auto& vp : bar.vars()) {
        VarId v = vp.id();
        int lim = v.family == Family::TBAR ? tbar_max : bar_max;
        if (v.index > lim) return false;
    }
    return true;
}

bool ExtractionWindow::admits_prefactor(const Monomial& m) const {
    for (const auto& vp : m.vars()) {
        VarId v = vp.id();
        if (!is_coordinate(v.family)) continue;
        if (v.index > (v.family == Family::T ? t_limit() : mult_max)) return false;
    }
    return true;
}

int ExtractionWindow::creation_max() const noexcept { return std::max({mult_max, t_limit(), bar_max, tbar_max}); }

namespace {

bool differentiates_independent(const Monomial& m, const std::vector<VarId>& independent) {
    if (independent.empty()) return false;
    for (const auto& vp : m.vars()) {
        Family f = vp.id().family;
        if (!is_hirota_symbol(f) && !is_ordinary_derivative(f)) continue;
        VarId c = var(coordinate_of(f), vp.id().index);
        if (std::find(independent.begin(), independent.end(), c) != independent.end()) return true;
    }
    return false;
}

}  // namespace

HirotaOperator extract_at(const SparsePoly& op, const Monomial& bar, const ExtractionWindow& win) {
    if (!win.admits_bar(bar)) return SparsePoly(0);
    PolyBuilder pb(0);
    for (const auto& t : op) {
        if (!win.admits_prefactor(t.mono)) continue;
        Monomial rest;
        Monomial remaining = bar;
        bool ok = true;
        for (const auto& vp : t.mono.vars()) {
            VarId v = vp.id();
            if (!is_bar(v.family)) {
                rest.multiply_var(v, vp.exp);
                continue;
            }
            unsigned have = remaining.exponent(v);
            if (have < vp.exp) {
                ok = false;
                break;
            }
            remaining.remove(v);
            if (have > vp.exp) remaining.multiply_var(v, have - vp.exp);
        }
        if (!ok) continue;
        SparsePoly q = hbo_convert(SparsePoly::constant(t.coeff), remaining).times_monomial(rest);
        for (const auto& qt : q)
            if (!differentiates_independent(qt.mono, win.independent)) pb.add(qt.mono, qt.coeff);
    }
    return pb.build();
}

namespace {

// a_(n) in slot s written in bar coordinates; zero modes use the input charge.
SparsePoly heis_bar(const Level& level, const HeisVec& a, int n, Slot s, int charge) {
    const int sign = s == Slot::Primed ? 1 : -1;
    const Family fam[3] = {Family::X, Family::Y, Family::T};
    if (n == 0) return SparsePoly::constant((a.alpha - a.gamma) * LevelScalar(charge));
    PolyBuilder pb(0);
    if (n < 0) {
        const int r = -n;
        const LevelScalar* cf[3] = {&a.alpha, &a.gamma, &a.delta};
        for (int i = 0; i < 3; ++i) {
            if (cf[i]->is_zero()) continue;
            LevelScalar c = *cf[i] * LevelScalar(r);
            pb.add(Monomial::of(var(fam[i], r)), c);
            pb.add(Monomial::of(var(bar_of(fam[i]), r)), c * LevelScalar(sign));
        }
        return pb.build();
    }
    const LevelScalar& c = level.c();
    const LevelScalar half = LevelScalar::rational(1, 2);
    LevelScalar d[3] = {a.alpha + c * a.gamma + a.delta, c * a.alpha + a.gamma - a.delta, a.alpha - a.gamma};
    for (int i = 0; i < 3; ++i) {
        if (d[i].is_zero()) continue;
        pb.add(Monomial::of(var(ordinary_of(fam[i]), n)), d[i] * half);
        pb.add(Monomial::of(var(hirota_symbol(fam[i]), n)), d[i] * half * LevelScalar(sign));
    }
    return pb.build();
}

// S_m with the generating variables t_r = sign·(V_r − U_r)/r.
std::vector<SparsePoly> derivative_schur(int max_m, int sign) {
    std::vector<SparsePoly> S(std::max(max_m + 1, 1), SparsePoly(0));
    S[0] = SparsePoly::constant(LevelScalar(1));
    for (int m = 1; m <= max_m; ++m) {
        PolyBuilder pb(0);
        for (int j = 1; j <= m; ++j) {
            SparsePoly step = SparsePoly::variable(var(Family::V, j)) - SparsePoly::variable(var(Family::U, j));
            pb.add(step * S[m - j], LevelScalar(sign));
        }
        S[m] = pb.build().scaled(LevelScalar::rational(1, m));
    }
    return S;
}

}  // namespace

std::map<std::pair<int, int>, SparsePoly> sector_blocks(const Wakimoto& wak, int m, int n, int creation_max,
                                                        int tbar_degree, const LevelScalar& hh_coeff) {
    const Level& level = wak.level();
    const int Nc = creation_max;
    const HeisVec alpha = HeisVec::of(HeisGen::ALPHA), gamma = HeisVec::of(HeisGen::GAMMA),
                  delta = HeisVec::of(HeisGen::DELTA);
    std::map<std::pair<int, int>, SparsePoly> out;

    const int smax = tbar_degree - 1 + 2 * Nc;
    SchurTable tplus(Family::TBAR, LevelScalar(2), 0), tminus(Family::TBAR, LevelScalar(-2), 0);
    auto dplus = derivative_schur(smax, 1);   // S(−∂̃u + ∂̃v)
    auto dminus = derivative_schur(smax, -1); // S(∂̃u − ∂̃v)

    // e⊗f on τ_{m−1}⊗τ_{n+1} and f⊗e on τ_{m+1}⊗τ_{n−1}.
    for (int pass = 0; pass < 2; ++pass) {
        const bool ef = pass == 0;
        const int a = ef ? m - 1 : m + 1, b = ef ? n + 1 : n - 1;
        const HeisVec& first = ef ? alpha : gamma;
        const HeisVec& second = ef ? gamma : alpha;
        PolyBuilder pb(0);
        for (int l = 0; l <= tbar_degree; ++l) {
            const SparsePoly& sl = ef ? tplus.get(l) : tminus.get(l);
            if (sl.is_zero()) continue;
            for (int i = -Nc; i <= l - 1 + Nc; ++i) {
                SparsePoly A = heis_bar(level, first, i, Slot::Primed, a);
                if (A.is_zero()) continue;
                SparsePoly sA = sl * A;
                for (int j = -Nc; i + j <= l - 1; ++j) {
                    SparsePoly G = heis_bar(level, second, j, Slot::DoublePrimed, b);
                    if (G.is_zero()) continue;
                    const SparsePoly& D = ef ? dplus[l - i - j - 1] : dminus[l - i - j - 1];
                    pb.add(sA * G * D);
                }
            }
        }
        out[{a, b}] += pb.build();
    }

    // ½h⊗h − k(L_{−1}⊗1 + 1⊗L_{−1}) on τ_m⊗τ_n.
    const HeisVec h{1, -1, level.k()};
    PolyBuilder pb(0);
    for (int j = -Nc; j <= Nc - 1; ++j)
        pb.add(heis_bar(level, h, -j - 1, Slot::Primed, m) * heis_bar(level, h, j, Slot::DoublePrimed, n), hh_coeff);
    const LevelScalar& c = level.c();
    struct Quad {
        HeisVec a, b;
        LevelScalar coeff;
    };
    const std::vector<Quad> quads = {
        {delta, delta, (c - LevelScalar(1)) * LevelScalar::rational(1, 4)},
        {delta, alpha - gamma, LevelScalar::rational(1, 2)},
        {alpha + gamma, alpha + gamma, level.inv_k_plus_2() * LevelScalar::rational(1, 4)},
    };
    for (Slot s : {Slot::Primed, Slot::DoublePrimed}) {
        const int q = s == Slot::Primed ? m : n;
        for (const auto& qd : quads)
            for (int j = -Nc; j <= Nc - 1; ++j)
                pb.add(heis_bar(level, qd.a, j, s, q) * heis_bar(level, qd.b, -1 - j, s, q), -level.k() * qd.coeff);
    }
    out[{m, n}] += pb.build();
    return out;
}

HirotaEquation extract_sector_equation(const Wakimoto& wak, int m, int n, const Monomial& bar,
                                       const ExtractionWindow& win, const LevelScalar& hh_coeff) {
    HirotaEquation eq;
    if (!win.admits_bar(bar)) return eq;
    int tbar_degree = 0;
    for (const auto& vp : bar.vars())
        if (vp.id().family == Family::TBAR) tbar_degree += vp.id().index * static_cast<int>(vp.exp);
    const int Nc = win.creation_max();
    for (const auto& [key, op] : sector_blocks(wak, m, n, Nc, tbar_degree, hh_coeff))
        eq.add(key.first, key.second, extract_at(op, bar, win));
    return eq;
}

SparsePoly equation_residual(const HirotaEquation& eq, const std::map<int, SparsePoly>& tau) {
    PolyBuilder pb(0);
    auto get = [&tau](int a) {
        auto it = tau.find(a);
        return it == tau.end() ? SparsePoly(0) : it->second;
    };
    for (const auto& [k, P] : eq.blocks) pb.add(hirota_apply(P, get(k.first), get(k.second)));
    return pb.build();
}

SparsePoly restrict_to_point(const SparsePoly& p, const ExtractionWindow& win) {
    return p.filter([&win](const Monomial& m) { return win.admits_prefactor(m); });
}

VerificationReport verify_equation_on_tau(const std::vector<HirotaEquation>& eqs, const TauFamily& tau,
                                          const ExtractionWindow* point) {
    VerificationReport rep;
    rep.campaign = "equation_on_tau";
    std::map<int, SparsePoly> comps;
    for (const auto& eq : eqs)
        for (const auto& [k, P] : eq.blocks)
            for (int a : {k.first, k.second})
                if (!comps.count(a)) comps.emplace(a, uncharged(tau.component(a)));
    for (std::size_t i = 0; i < eqs.size(); ++i) {
        SparsePoly r = equation_residual(eqs[i], comps);
        if (point) r = restrict_to_point(r, *point);
        if (tau.max_param_degree() >= 0) r = truncate_params(r, tau.max_param_degree());
        rep.record(expect_equal(r, SparsePoly(0), "equation " + std::to_string(i) + " on tau", "0"));
    }
    return rep;
}

SparsePoly direct_sector_coefficient(const Casimir& cas, const std::map<int, SparsePoly>& tau, int m, int n,
                                     const Monomial& bar, const ExtractionWindow& win) {
    auto get = [&tau](int a) {
        auto it = tau.find(a);
        return it == tau.end() ? SparsePoly(1) : it->second;
    };
    PolyBuilder wb(2);
    const std::pair<int, int> pairs[3] = {{m - 1, n + 1}, {m + 1, n - 1}, {m, n}};
    for (const auto& [a, b] : pairs) {
        SparsePoly ta = get(a), tb = get(b);
        if (ta.is_zero() || tb.is_zero()) continue;
        wb.add(tensor_product(with_charge(ta, a), with_charge(tb, b)));
    }
    SparsePoly w = wb.build();
    SparsePoly out = to_bar_coordinates(cas.casimir_mode(0, w));
    PolyBuilder pb(0);
    for (const auto& t : out) {
        if (t.mono.charge(0) != m || t.mono.charge(1) != n) continue;
        Monomial rest, barpart;
        for (const auto& vp : t.mono.vars()) {
            if (is_bar(vp.id().family))
                barpart.multiply_var(vp.id(), vp.exp);
            else
                rest.multiply_var(vp.id(), vp.exp);
        }
        if (!(barpart == bar)) continue;
        pb.add(std::move(rest), t.coeff);
    }
    return restrict_to_point(pb.build(), win);
}

Monomial bar_monomial(std::initializer_list<BarFactor> factors) {
    Monomial m;
    for (const auto& f : factors) {
        if (!is_bar(f.family)) throw Error("bar_monomial: not a bar family");
        m.multiply_var(var(f.family, f.index), f.exp);
    }
    return m;
}

}  // namespace wak
