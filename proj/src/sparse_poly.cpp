#include "wak/sparse_poly.hpp"

#include <algorithm>

#include "wak/errors.hpp"

namespace wak {
namespace {

bool term_less(const Term& a, const Term& b) { return a.mono < b.mono; }

// Sorts and merges in place, dropping zero coefficients.
void canonicalize(std::vector<Term>& terms) {
    if (terms.size() > 1) std::sort(terms.begin(), terms.end(), term_less);
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i + 1;
        LevelScalar c = std::move(terms[i].coeff);
        while (j < terms.size() && terms[j].mono == terms[i].mono) {
            c += terms[j].coeff;
            ++j;
        }
        if (!c.is_zero()) {
            if (out != i) terms[out].mono = std::move(terms[i].mono);
            terms[out].coeff = std::move(c);
            ++out;
        }
        i = j;
    }
    terms.resize(out);
}

}  // namespace

void check_arity(const SparsePoly& a, const SparsePoly& b) {
    if (a.arity() != b.arity() && !a.is_zero() && !b.is_zero())
        throw ArityMismatch("q-charge arity " + std::to_string(a.arity()) + " vs " + std::to_string(b.arity()));
}

SparsePoly SparsePoly::constant(const LevelScalar& c, int arity) {
    SparsePoly p(arity);
    if (!c.is_zero()) p.terms_.push_back(Term{Monomial(arity), c});
    return p;
}

SparsePoly SparsePoly::from_monomial(Monomial m, LevelScalar c) {
    SparsePoly p(m.arity());
    if (!c.is_zero()) p.terms_.push_back(Term{std::move(m), std::move(c)});
    return p;
}

SparsePoly SparsePoly::variable(VarId v, int arity) { return from_monomial(Monomial::of(v, 1, arity)); }

SparsePoly SparsePoly::from_terms(std::vector<Term> terms, int arity) {
    for (const auto& t : terms)
        if (t.mono.arity() != arity) throw ArityMismatch("term arity differs from polynomial arity");
    canonicalize(terms);
    SparsePoly p(arity);
    p.terms_ = std::move(terms);
    return p;
}

SparsePoly SparsePoly::from_canonical(std::vector<Term> terms, int arity) {
    SparsePoly p(arity);
    p.terms_ = std::move(terms);
    return p;
}

LevelScalar SparsePoly::coefficient(const Monomial& m) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                               [](const Term& t, const Monomial& key) { return t.mono < key; });
    if (it != terms_.end() && it->mono == m) return it->coeff;
    return {};
}

int SparsePoly::max_weight() const noexcept {
    int w = 0;
    for (const auto& t : terms_) w = std::max(w, t.mono.weight());
    return w;
}

int SparsePoly::max_degree_in(Family f) const noexcept {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree_in(f));
    return d;
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly r(arity_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) r.terms_.push_back(Term{t.mono, -t.coeff});
    return r;
}

namespace {

SparsePoly merge(const SparsePoly& a, const SparsePoly& b, bool subtract) {
    check_arity(a, b);
    std::vector<Term> out;
    out.reserve(a.size() + b.size());
    auto i = a.terms().begin(), ie = a.terms().end();
    auto j = b.terms().begin(), je = b.terms().end();
    while (i != ie || j != je) {
        if (j == je || (i != ie && i->mono < j->mono)) {
            out.push_back(*i++);
        } else if (i == ie || j->mono < i->mono) {
            out.push_back(Term{j->mono, subtract ? -j->coeff : j->coeff});
            ++j;
        } else {
            LevelScalar c = subtract ? i->coeff - j->coeff : i->coeff + j->coeff;
            if (!c.is_zero()) out.push_back(Term{i->mono, std::move(c)});
            ++i;
            ++j;
        }
    }
    return SparsePoly::from_canonical(std::move(out), a.is_zero() ? b.arity() : a.arity());
}

}  // namespace

SparsePoly operator+(const SparsePoly& a, const SparsePoly& b) { return merge(a, b, false); }
SparsePoly operator-(const SparsePoly& a, const SparsePoly& b) { return merge(a, b, true); }
SparsePoly& SparsePoly::operator+=(const SparsePoly& b) { return *this = *this + b; }
SparsePoly& SparsePoly::operator-=(const SparsePoly& b) { return *this = *this - b; }

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    check_arity(a, b);
    int arity = a.is_zero() ? b.arity() : a.arity();
    if (a.is_zero() || b.is_zero()) return SparsePoly(arity);
    PolyBuilder pb(arity);
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) pb.add(x.mono * y.mono, x.coeff * y.coeff);
    return pb.build();
}

bool operator==(const SparsePoly& a, const SparsePoly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    if (a.is_zero()) return true;
    if (a.arity_ != b.arity_) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
    return true;
}

SparsePoly SparsePoly::scaled(const LevelScalar& c) const {
    SparsePoly r(arity_);
    if (c.is_zero()) return r;
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        LevelScalar v = t.coeff * c;
        if (!v.is_zero()) r.terms_.push_back(Term{t.mono, std::move(v)});
    }
    return r;
}

SparsePoly SparsePoly::derive(VarId v) const {
    PolyBuilder pb(arity_);
    for (const auto& t : terms_) {
        Monomial m = t.mono;
        unsigned e = m.lower(v);
        if (e == 0) continue;
        pb.add(std::move(m), t.coeff * LevelScalar(static_cast<long long>(e)));
    }
    return pb.build();
}

SparsePoly SparsePoly::times_var(VarId v, const LevelScalar& c) const {
    if (c.is_zero()) return SparsePoly(arity_);
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
        Monomial m = t.mono;
        m.multiply_var(v);
        out.push_back(Term{std::move(m), t.coeff * c});
    }
    return from_terms(std::move(out), arity_);
}

SparsePoly SparsePoly::times_monomial(const Monomial& m, const LevelScalar& c) const {
    if (c.is_zero() || is_zero()) return SparsePoly(is_zero() ? m.arity() : arity_);
    PolyBuilder pb(arity_);
    for (const auto& t : terms_) pb.add(t.mono * m, t.coeff * c);
    return pb.build();
}

SparsePoly SparsePoly::shift_charge(int slot, int delta) const {
    SparsePoly r = *this;
    for (auto& t : r.terms_) t.mono.set_charge(slot, t.mono.charge(slot) + delta);
    // a uniform shift keeps the sort order
    return r;
}

SparsePoly SparsePoly::scale_by(const std::function<LevelScalar(const Monomial&)>& f) const {
    SparsePoly r(arity_);
    r.terms_.reserve(terms_.size());
    for (const auto& t : terms_) {
        LevelScalar v = t.coeff * f(t.mono);
        if (!v.is_zero()) r.terms_.push_back(Term{t.mono, std::move(v)});
    }
    return r;
}

SparsePoly SparsePoly::filter(const std::function<bool(const Monomial&)>& pred) const {
    SparsePoly r(arity_);
    for (const auto& t : terms_)
        if (pred(t.mono)) r.terms_.push_back(t);
    return r;
}

SparsePoly SparsePoly::map_coeffs(const std::function<LevelScalar(const LevelScalar&)>& f) const {
    SparsePoly r(arity_);
    for (const auto& t : terms_) {
        LevelScalar v = f(t.coeff);
        if (!v.is_zero()) r.terms_.push_back(Term{t.mono, std::move(v)});
    }
    return r;
}

SparsePoly SparsePoly::specialize(const BigRational& k0) const {
    return map_coeffs([&k0](const LevelScalar& c) { return LevelScalar(c.specialize(k0)); });
}

std::string SparsePoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : terms_) {
        std::string c = t.coeff.to_string();
        bool simple = t.coeff.is_constant();
        bool neg = simple && t.coeff.constant_value().sign() < 0;
        std::string mag = neg ? (-t.coeff).to_string() : c;
        if (!first) out += neg ? " - " : " + ";
        else if (neg) out += "-";
        first = false;
        if (!simple) mag = "(" + mag + ")";
        bool unit_mono = !t.mono.has_vars() && (t.mono.arity() == 0 || t.mono.to_string() == "1");
        if (unit_mono) {
            out += mag;
        } else if (simple && mag == "1") {
            out += t.mono.to_string();
        } else {
            out += mag + "*" + t.mono.to_string();
        }
    }
    return out;
}

void PolyBuilder::add(Monomial m, LevelScalar c) {
    if (c.is_zero()) return;
    if (m.arity() != arity_) throw ArityMismatch("builder arity " + std::to_string(arity_) + " vs term arity " + std::to_string(m.arity()));
    auto [it, inserted] = acc_.try_emplace(std::move(m), std::move(c));
    if (!inserted) it->second += c;
}

void PolyBuilder::add(const SparsePoly& p) {
    for (const auto& t : p.terms()) add(t.mono, t.coeff);
}

void PolyBuilder::add(const SparsePoly& p, const LevelScalar& c) {
    if (c.is_zero()) return;
    for (const auto& t : p.terms()) add(t.mono, t.coeff * c);
}

void PolyBuilder::add_product(const SparsePoly& p, const Monomial& m, const LevelScalar& c) {
    if (c.is_zero()) return;
    for (const auto& t : p.terms()) add(t.mono * m, t.coeff * c);
}

SparsePoly PolyBuilder::build() {
    std::vector<Term> terms;
    terms.reserve(acc_.size());
    for (auto& [m, c] : acc_)
        if (!c.is_zero()) terms.push_back(Term{m, std::move(c)});
    acc_.clear();
    std::sort(terms.begin(), terms.end(), term_less);
    return SparsePoly::from_canonical(std::move(terms), arity_);
}

}  // namespace wak
