#include "wak/monomial.hpp"

#include <algorithm>

#include "wak/errors.hpp"

namespace wak {

const char* family_name(Family f) {
    switch (f) {
        case Family::X: return "x";
        case Family::Y: return "y";
        case Family::T: return "t";
        case Family::U: return "du";
        case Family::V: return "dv";
        case Family::W: return "dw";
        case Family::XBAR: return "xbar";
        case Family::YBAR: return "ybar";
        case Family::TBAR: return "tbar";
        case Family::DX: return "Dx";
        case Family::DY: return "Dy";
        case Family::DT: return "Dt";
        case Family::XP: return "x'";
        case Family::YP: return "y'";
        case Family::TP: return "t'";
        case Family::XPP: return "x''";
        case Family::YPP: return "y''";
        case Family::TPP: return "t''";
        case Family::PARAM: return "p";
        case Family::JET: return "u";
    }
    return "?";
}

std::string var_name(VarId v) {
    switch (v.family) {
        case Family::XP: return "x" + std::to_string(v.index) + "'";
        case Family::YP: return "y" + std::to_string(v.index) + "'";
        case Family::TP: return "t" + std::to_string(v.index) + "'";
        case Family::XPP: return "x" + std::to_string(v.index) + "''";
        case Family::YPP: return "y" + std::to_string(v.index) + "''";
        case Family::TPP: return "t" + std::to_string(v.index) + "''";
        case Family::PARAM:
            if (v.index <= 26) return std::string(1, static_cast<char>('a' + v.index - 1));
            return "p" + std::to_string(v.index);
        default: return family_name(v.family) + std::to_string(v.index);
    }
}

Monomial Monomial::of(VarId v, unsigned exp, int arity) {
    Monomial m(arity);
    if (exp > 0) m.vars_.push_back(VarPower{v.code(), exp});
    return m;
}

Monomial Monomial::charged(int arity, int q0, int q1) {
    Monomial m(arity);
    m.charges_ = {q0, q1};
    return m;
}

Monomial Monomial::from_sorted(Vars vars, int arity, std::array<int, 2> charges) {
    Monomial m(arity);
    m.vars_ = std::move(vars);
    m.charges_ = charges;
    return m;
}

unsigned Monomial::exponent(VarId v) const noexcept {
    std::uint32_t c = v.code();
    for (const auto& vp : vars_) {
        if (vp.code == c) return vp.exp;
        if (vp.code > c) break;
    }
    return 0;
}

int Monomial::weight() const noexcept {
    int w = 0;
    for (const auto& vp : vars_) {
        Family f = static_cast<Family>(vp.code >> 16);
        if (f == Family::PARAM || f == Family::JET) continue;
        w += static_cast<int>(vp.code & 0xffffu) * static_cast<int>(vp.exp);
    }
    return w;
}

int Monomial::degree() const noexcept {
    int d = 0;
    for (const auto& vp : vars_) d += static_cast<int>(vp.exp);
    return d;
}

int Monomial::degree_in(Family f) const noexcept {
    int d = 0;
    for (const auto& vp : vars_)
        if (static_cast<Family>(vp.code >> 16) == f) d += static_cast<int>(vp.exp);
    return d;
}

void Monomial::multiply_var(VarId v, unsigned exp) {
    if (exp == 0) return;
    std::uint32_t c = v.code();
    auto it = std::lower_bound(vars_.begin(), vars_.end(), c,
                               [](const VarPower& vp, std::uint32_t code) { return vp.code < code; });
    if (it != vars_.end() && it->code == c)
        it->exp += exp;
    else
        vars_.insert(it, VarPower{c, exp});
}

unsigned Monomial::lower(VarId v) {
    std::uint32_t c = v.code();
    for (auto it = vars_.begin(); it != vars_.end(); ++it) {
        if (it->code == c) {
            unsigned e = it->exp;
            if (e == 1)
                vars_.erase(it);
            else
                --it->exp;
            return e;
        }
        if (it->code > c) break;
    }
    return 0;
}

unsigned Monomial::remove(VarId v) {
    std::uint32_t c = v.code();
    for (auto it = vars_.begin(); it != vars_.end(); ++it) {
        if (it->code == c) {
            unsigned e = it->exp;
            vars_.erase(it);
            return e;
        }
        if (it->code > c) break;
    }
    return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    if (a.arity_ != b.arity_)
        throw ArityMismatch("monomial charge arity " + std::to_string(a.arity_) + " vs " + std::to_string(b.arity_));
    Monomial r(a.arity_);
    r.charges_ = {a.charges_[0] + b.charges_[0], a.charges_[1] + b.charges_[1]};
    r.vars_.reserve(a.vars_.size() + b.vars_.size());
    auto i = a.vars_.begin(), ie = a.vars_.end();
    auto j = b.vars_.begin(), je = b.vars_.end();
    while (i != ie && j != je) {
        if (i->code < j->code) {
            r.vars_.push_back(*i++);
        } else if (j->code < i->code) {
            r.vars_.push_back(*j++);
        } else {
            r.vars_.push_back(VarPower{i->code, i->exp + j->exp});
            ++i;
            ++j;
        }
    }
    r.vars_.insert(r.vars_.end(), i, ie);
    r.vars_.insert(r.vars_.end(), j, je);
    return r;
}

bool operator==(const Monomial& a, const Monomial& b) noexcept {
    if (a.arity_ != b.arity_ || a.charges_ != b.charges_ || a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
        if (a.vars_[i].key() != b.vars_[i].key()) return false;
    return true;
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) noexcept {
    std::size_t n = std::min(a.vars_.size(), b.vars_.size());
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t x = a.vars_[i].key(), y = b.vars_[i].key();
        if (x != y) return x <=> y;
    }
    if (auto c = a.vars_.size() <=> b.vars_.size(); c != 0) return c;
    if (auto c = a.arity_ <=> b.arity_; c != 0) return c;
    if (auto c = a.charges_[0] <=> b.charges_[0]; c != 0) return c;
    return a.charges_[1] <=> b.charges_[1];
}

std::size_t Monomial::hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ arity_;
    auto mix = [&h](std::uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    };
    for (const auto& vp : vars_) mix(vp.key());
    mix(static_cast<std::uint32_t>(charges_[0]));
    mix(static_cast<std::uint32_t>(charges_[1]));
    return static_cast<std::size_t>(h ^ (h >> 33));
}

std::string Monomial::to_string() const {
    std::string out;
    auto append = [&out](const std::string& s) {
        if (!out.empty()) out += "*";
        out += s;
    };
    for (const auto& vp : vars_) {
        std::string s = var_name(vp.id());
        if (vp.exp > 1) s += "^" + std::to_string(vp.exp);
        append(s);
    }
    static const char* qnames[2][2] = {{"q", ""}, {"q'", "q''"}};
    if (arity_ == 1 || arity_ == 2) {
        for (int s = 0; s < arity_; ++s) {
            int c = charges_[s];
            if (c == 0) continue;
            std::string name = qnames[arity_ - 1][s];
            append(c == 1 ? name : name + "^" + std::to_string(c));
        }
    }
    return out.empty() ? "1" : out;
}

}  // namespace wak
