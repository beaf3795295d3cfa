#include "wak/level_scalar.hpp"

#include <utility>

#include "wak/errors.hpp"

namespace wak {
namespace {

using Coeffs = LevelScalar::Coeffs;

void trim(Coeffs& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(const Coeffs& p) { return static_cast<int>(p.size()) - 1; }

Coeffs add(const Coeffs& a, const Coeffs& b) {
    Coeffs r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size())
            r[i] = a[i] + b[i];
        else
            r[i] = i < a.size() ? a[i] : b[i];
    }
    trim(r);
    return r;
}

Coeffs negate(const Coeffs& a) {
    Coeffs r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

Coeffs mul(const Coeffs& a, const Coeffs& b) {
    if (a.empty() || b.empty()) return {};
    Coeffs r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].is_zero()) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!b[j].is_zero()) r[i + j] += a[i] * b[j];
    }
    trim(r);
    return r;
}

Coeffs scale(const Coeffs& a, const BigRational& c) {
    if (c.is_zero()) return {};
    Coeffs r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * c;
    return r;
}

// Division with remainder; d must be nonzero.
std::pair<Coeffs, Coeffs> divmod(Coeffs a, const Coeffs& d) {
    if (degree(a) < degree(d)) return {{}, std::move(a)};
    Coeffs q(a.size() - d.size() + 1);
    BigRational lead_inv = d.back().inverse();
    for (int i = degree(a); i >= degree(d); --i) {
        if (a[i].is_zero()) continue;
        BigRational f = a[i] * lead_inv;
        int shift = i - degree(d);
        q[shift] = f;
        for (int j = 0; j <= degree(d); ++j) a[shift + j] -= f * d[j];
    }
    trim(a);
    trim(q);
    return {std::move(q), std::move(a)};
}

Coeffs monic(const Coeffs& a) { return a.empty() ? a : scale(a, a.back().inverse()); }

Coeffs gcd(Coeffs a, Coeffs b) {
    while (!b.empty()) {
        Coeffs r = divmod(std::move(a), b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return monic(a);
}

BigRational eval(const Coeffs& p, const BigRational& x) {
    BigRational acc;
    for (int i = degree(p); i >= 0; --i) acc = acc * x + p[i];
    return acc;
}

std::string poly_string(const Coeffs& p, bool latex) {
    if (p.empty()) return "0";
    std::string out;
    bool first = true;
    for (int i = degree(p); i >= 0; --i) {
        const BigRational& c = p[i];
        if (c.is_zero()) continue;
        bool neg = c.sign() < 0;
        BigRational a = c.abs();
        if (first) {
            if (neg) out += "-";
        } else {
            out += neg ? " - " : " + ";
        }
        first = false;
        bool unit = a.is_one();
        if (!unit || i == 0) {
            if (latex && !a.is_integer())
                out += "\\frac{" + a.numerator_string() + "}{" + a.denominator_string() + "}";
            else
                out += a.to_string();
        }
        if (i > 0) {
            if (!unit || i == 0) out += latex ? " " : "*";
            out += "k";
            if (i > 1) out += latex ? "^{" + std::to_string(i) + "}" : "^" + std::to_string(i);
        }
    }
    return out;
}

bool is_single_term(const Coeffs& p) {
    int n = 0;
    for (const auto& c : p) n += !c.is_zero();
    return n <= 1;
}

}  // namespace

LevelScalar LevelScalar::k() {
    LevelScalar r;
    r.rep_ = std::make_shared<const Rep>(Rep{{BigRational(0), BigRational(1)}, {}});
    return r;
}

LevelScalar::Coeffs LevelScalar::numerator() const {
    if (rep_) return rep_->num;
    if (c_.is_zero()) return {};
    return {c_};
}

LevelScalar::Coeffs LevelScalar::denominator() const { return rep_ ? rep_->den : Coeffs{}; }

LevelScalar LevelScalar::from_coeffs(Coeffs num, Coeffs den) {
    bool had_den = !den.empty();
    trim(den);
    if (had_den && den.empty()) throw DivisionByZero();
    return normalized(std::move(num), std::move(den));
}

LevelScalar LevelScalar::normalized(Coeffs num, Coeffs den) {
    trim(num);
    if (num.empty()) return {};
    trim(den);
    if (!den.empty()) {
        if (degree(den) > 0) {
            Coeffs g = gcd(num, den);
            if (degree(g) > 0) {
                num = divmod(std::move(num), g).first;
                den = divmod(std::move(den), g).first;
            }
        }
        if (!den.back().is_one()) {
            BigRational inv = den.back().inverse();
            num = scale(num, inv);
            den = scale(den, inv);
        }
        if (degree(den) == 0) den.clear();
    }
    LevelScalar r;
    if (den.empty() && num.size() == 1) {
        r.c_ = std::move(num[0]);
        return r;
    }
    r.rep_ = std::make_shared<const Rep>(Rep{std::move(num), std::move(den)});
    return r;
}

LevelScalar LevelScalar::operator-() const {
    LevelScalar r;
    if (!rep_) {
        r.c_ = -c_;
        return r;
    }
    r.rep_ = std::make_shared<const Rep>(Rep{negate(rep_->num), rep_->den});
    return r;
}

LevelScalar LevelScalar::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (!rep_) return LevelScalar(c_.inverse());
    Coeffs den = rep_->den.empty() ? Coeffs{BigRational(1)} : rep_->den;
    return normalized(std::move(den), rep_->num);
}

LevelScalar operator+(const LevelScalar& a, const LevelScalar& b) {
    if (!a.rep_ && !b.rep_) return LevelScalar(a.c_ + b.c_);
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    Coeffs an = a.numerator(), bn = b.numerator();
    Coeffs ad = a.denominator(), bd = b.denominator();
    if (ad.empty() && bd.empty()) return LevelScalar::normalized(add(an, bn), {});
    if (ad == bd) return LevelScalar::normalized(add(an, bn), ad);
    if (ad.empty()) return LevelScalar::normalized(add(mul(an, bd), bn), bd);
    if (bd.empty()) return LevelScalar::normalized(add(an, mul(bn, ad)), ad);
    return LevelScalar::normalized(add(mul(an, bd), mul(bn, ad)), mul(ad, bd));
}

LevelScalar operator-(const LevelScalar& a, const LevelScalar& b) {
    if (!a.rep_ && !b.rep_) return LevelScalar(a.c_ - b.c_);
    return a + (-b);
}

LevelScalar operator*(const LevelScalar& a, const LevelScalar& b) {
    if (!a.rep_ && !b.rep_) return LevelScalar(a.c_ * b.c_);
    if (a.is_zero() || b.is_zero()) return {};
    if (!a.rep_ || !b.rep_) {
        const LevelScalar& c = a.rep_ ? b : a;
        const LevelScalar& p = a.rep_ ? a : b;
        if (c.c_.is_one()) return p;
        LevelScalar r;
        r.rep_ = std::make_shared<const LevelScalar::Rep>(LevelScalar::Rep{scale(p.rep_->num, c.c_), p.rep_->den});
        return r;
    }
    const auto& ar = *a.rep_;
    const auto& br = *b.rep_;
    if (ar.den.empty() && br.den.empty()) return LevelScalar::normalized(mul(ar.num, br.num), {});
    Coeffs ad = ar.den.empty() ? Coeffs{BigRational(1)} : ar.den;
    Coeffs bd = br.den.empty() ? Coeffs{BigRational(1)} : br.den;
    return LevelScalar::normalized(mul(ar.num, br.num), mul(ad, bd));
}

LevelScalar operator/(const LevelScalar& a, const LevelScalar& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (!b.rep_) return a * LevelScalar(b.c_.inverse());
    return a * b.inverse();
}

bool operator==(const LevelScalar& a, const LevelScalar& b) {
    if (!a.rep_ || !b.rep_) return !a.rep_ && !b.rep_ && a.c_ == b.c_;
    return a.rep_ == b.rep_ || (a.rep_->num == b.rep_->num && a.rep_->den == b.rep_->den);
}

LevelScalar& LevelScalar::operator+=(const LevelScalar& b) {
    if (!rep_ && !b.rep_) {
        c_ += b.c_;
        return *this;
    }
    return *this = *this + b;
}
LevelScalar& LevelScalar::operator-=(const LevelScalar& b) { return *this = *this - b; }
LevelScalar& LevelScalar::operator*=(const LevelScalar& b) { return *this = *this * b; }
LevelScalar& LevelScalar::operator/=(const LevelScalar& b) { return *this = *this / b; }

BigRational LevelScalar::specialize(const BigRational& k0) const {
    if (!rep_) return c_;
    BigRational n = eval(rep_->num, k0);
    if (rep_->den.empty()) return n;
    BigRational d = eval(rep_->den, k0);
    if (d.is_zero())
        throw PoleAtSpecialization("denominator " + poly_string(rep_->den, false) + " vanishes at k = " + k0.to_string());
    return n / d;
}

std::string LevelScalar::to_string() const {
    Coeffs num = numerator();
    std::string n = poly_string(num, false);
    if (!has_denominator()) return n;
    std::string d = poly_string(rep_->den, false);
    if (!is_single_term(num)) n = "(" + n + ")";
    return n + "/(" + d + ")";
}

std::string LevelScalar::to_latex() const {
    Coeffs num = numerator();
    if (!has_denominator()) return poly_string(num, true);
    return "\\frac{" + poly_string(num, true) + "}{" + poly_string(rep_->den, true) + "}";
}

std::size_t LevelScalar::hash() const noexcept {
    if (!rep_) return c_.hash();
    std::size_t h = 0xcbf29ce484222325ULL;
    for (const auto& c : rep_->num) h = (h ^ c.hash()) * 0x100000001b3ULL;
    h ^= 0x9e37;
    for (const auto& c : rep_->den) h = (h ^ c.hash()) * 0x100000001b3ULL;
    return h;
}

}  // namespace wak
