#include "wak/big_rational.hpp"

#include <functional>
#include <limits>
#include <numeric>
#include <utility>

#include "wak/errors.hpp"

namespace wak {
namespace {

using u128 = unsigned __int128;

u128 uabs(__int128 v) { return v < 0 ? u128(-(v + 1)) + 1 : u128(v); }

u128 gcd128(u128 a, u128 b) {
    if ((a >> 64) == 0 && (b >> 64) == 0)
        return std::gcd(std::uint64_t(a), std::uint64_t(b));
    while (b != 0) {
        u128 r = a % b;
        a = b;
        b = r;
    }
    return a;
}

bool fits64(__int128 v) {
    return v >= std::numeric_limits<std::int64_t>::min() &&
           v <= std::numeric_limits<std::int64_t>::max();
}

void mpz_set_i128(mpz_ptr z, __int128 v) {
    u128 m = uabs(v);
    mpz_set_ui(z, static_cast<unsigned long>(m >> 64));
    mpz_mul_2exp(z, z, 64);
    mpz_add_ui(z, z, static_cast<unsigned long>(m & 0xffffffffffffffffULL));
    if (v < 0) mpz_neg(z, z);
}

struct MpqTemp {
    mpq_t q;
    MpqTemp() { mpq_init(q); }
    ~MpqTemp() { mpq_clear(q); }
    MpqTemp(const MpqTemp&) = delete;
    MpqTemp& operator=(const MpqTemp&) = delete;
};

}  // namespace

BigRational::BigRational(long long n, long long d) {
    if (d == 0) throw DivisionByZero();
    *this = from_i128(n, d);
}

void BigRational::copy_big(const BigRational& other) {
    big_ = new __mpq_struct;
    mpq_init(big_);
    mpq_set(big_, other.big_);
}

void BigRational::release_big() noexcept {
    mpq_clear(big_);
    delete big_;
    big_ = nullptr;
}

BigRational BigRational::from_i128(__int128 n, __int128 d) {
    if (d < 0) {
        n = -n;
        d = -d;
    }
    if (n == 0) return BigRational();
    u128 g = gcd128(uabs(n), u128(d));
    if (g != 1) {
        n /= static_cast<__int128>(g);
        d /= static_cast<__int128>(g);
    }
    if (fits64(n) && fits64(d)) {
        BigRational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }
    BigRational r;
    r.big_ = new __mpq_struct;
    mpq_init(r.big_);
    mpz_set_i128(mpq_numref(r.big_), n);
    mpz_set_i128(mpq_denref(r.big_), d);
    return r;
}

BigRational BigRational::from_mpq(mpq_srcptr q) {
    BigRational r;
    if (mpz_fits_slong_p(mpq_numref(q)) && mpz_fits_slong_p(mpq_denref(q))) {
        r.num_ = mpz_get_si(mpq_numref(q));
        r.den_ = mpz_get_si(mpq_denref(q));
        return r;
    }
    r.big_ = new __mpq_struct;
    mpq_init(r.big_);
    mpq_set(r.big_, q);
    return r;
}

void BigRational::load(mpq_ptr out) const {
    if (big_) {
        mpq_set(out, big_);
    } else {
        mpz_set_si(mpq_numref(out), num_);
        mpz_set_si(mpq_denref(out), den_);
    }
}

BigRational BigRational::parse(std::string_view text) {
    std::string s(text);
    while (!s.empty() && s.front() == ' ') s.erase(s.begin());
    while (!s.empty() && s.back() == ' ') s.pop_back();
    if (s.empty()) throw ConfigError("empty rational literal");
    auto slash = s.find('/');
    auto valid_int = [](const std::string& t) {
        std::size_t i = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (i >= t.size()) return false;
        for (; i < t.size(); ++i)
            if (t[i] < '0' || t[i] > '9') return false;
        return true;
    };
    std::string ns = slash == std::string::npos ? s : s.substr(0, slash);
    std::string ds = slash == std::string::npos ? "1" : s.substr(slash + 1);
    if (!ns.empty() && ns[0] == '+') ns.erase(ns.begin());
    if (!valid_int(ns) || !valid_int(ds)) throw ConfigError("malformed rational literal '" + s + "'");
    MpqTemp q;
    mpz_set_str(mpq_numref(q.q), ns.c_str(), 10);
    mpz_set_str(mpq_denref(q.q), ds.c_str(), 10);
    if (mpz_sgn(mpq_denref(q.q)) == 0) throw DivisionByZero();
    mpq_canonicalize(q.q);
    return from_mpq(q.q);
}

bool BigRational::is_integer() const noexcept {
    return big_ ? mpz_cmp_ui(mpq_denref(big_), 1) == 0 : den_ == 1;
}

int BigRational::sign() const noexcept {
    if (big_) return mpq_sgn(big_);
    return (num_ > 0) - (num_ < 0);
}

BigRational BigRational::operator-() const {
    if (!big_ && num_ != std::numeric_limits<std::int64_t>::min()) {
        BigRational r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    MpqTemp q;
    load(q.q);
    mpq_neg(q.q, q.q);
    return from_mpq(q.q);
}

BigRational BigRational::inverse() const {
    if (is_zero()) throw DivisionByZero();
    if (!big_) return from_i128(den_, num_);
    MpqTemp q;
    load(q.q);
    mpq_inv(q.q, q.q);
    return from_mpq(q.q);
}

BigRational operator+(const BigRational& a, const BigRational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == 1 && b.den_ == 1) {
            long long r;
            if (!__builtin_add_overflow(a.num_, b.num_, &r)) return BigRational(r);
        }
        if (a.den_ == b.den_)
            return BigRational::from_i128(static_cast<__int128>(a.num_) + b.num_, a.den_);
        return BigRational::from_i128(static_cast<__int128>(a.num_) * b.den_ +
                                          static_cast<__int128>(b.num_) * a.den_,
                                      static_cast<__int128>(a.den_) * b.den_);
    }
    MpqTemp x, y;
    a.load(x.q);
    b.load(y.q);
    mpq_add(x.q, x.q, y.q);
    return BigRational::from_mpq(x.q);
}

BigRational operator-(const BigRational& a, const BigRational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == 1 && b.den_ == 1) {
            long long r;
            if (!__builtin_sub_overflow(a.num_, b.num_, &r)) return BigRational(r);
        }
        if (a.den_ == b.den_)
            return BigRational::from_i128(static_cast<__int128>(a.num_) - b.num_, a.den_);
        return BigRational::from_i128(static_cast<__int128>(a.num_) * b.den_ -
                                          static_cast<__int128>(b.num_) * a.den_,
                                      static_cast<__int128>(a.den_) * b.den_);
    }
    MpqTemp x, y;
    a.load(x.q);
    b.load(y.q);
    mpq_sub(x.q, x.q, y.q);
    return BigRational::from_mpq(x.q);
}

BigRational operator*(const BigRational& a, const BigRational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == 1 && b.den_ == 1) {
            long long r;
            if (!__builtin_mul_overflow(a.num_, b.num_, &r)) return BigRational(r);
        }
        return BigRational::from_i128(static_cast<__int128>(a.num_) * b.num_,
                                      static_cast<__int128>(a.den_) * b.den_);
    }
    MpqTemp x, y;
    a.load(x.q);
    b.load(y.q);
    mpq_mul(x.q, x.q, y.q);
    return BigRational::from_mpq(x.q);
}

BigRational operator/(const BigRational& a, const BigRational& b) {
    if (b.is_zero()) throw DivisionByZero();
    if (!a.big_ && !b.big_)
        return BigRational::from_i128(static_cast<__int128>(a.num_) * b.den_,
                                      static_cast<__int128>(a.den_) * b.num_);
    MpqTemp x, y;
    a.load(x.q);
    b.load(y.q);
    mpq_div(x.q, x.q, y.q);
    return BigRational::from_mpq(x.q);
}

BigRational& BigRational::operator+=(const BigRational& b) { return *this = *this + b; }
BigRational& BigRational::operator-=(const BigRational& b) { return *this = *this - b; }
BigRational& BigRational::operator*=(const BigRational& b) { return *this = *this * b; }
BigRational& BigRational::operator/=(const BigRational& b) { return *this = *this / b; }

bool operator==(const BigRational& a, const BigRational& b) noexcept {
    if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
    if (a.big_ && b.big_) return mpq_equal(a.big_, b.big_) != 0;
    return false;  // canonical demotion makes mixed representations unequal
}

std::strong_ordering operator<=>(const BigRational& a, const BigRational& b) {
    if (!a.big_ && !b.big_) {
        __int128 l = static_cast<__int128>(a.num_) * b.den_;
        __int128 r = static_cast<__int128>(b.num_) * a.den_;
        return l <=> r;
    }
    MpqTemp x, y;
    a.load(x.q);
    b.load(y.q);
    int c = mpq_cmp(x.q, y.q);
    return c <=> 0;
}

namespace {

std::string take_gmp_string(char* raw) {
    std::string s(raw);
    void (*freefunc)(void*, size_t);
    mp_get_memory_functions(nullptr, nullptr, &freefunc);
    freefunc(raw, s.size() + 1);
    return s;
}

}  // namespace

std::string BigRational::to_string() const {
    if (!big_) return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    return take_gmp_string(mpq_get_str(nullptr, 10, big_));
}

std::string BigRational::numerator_string() const {
    if (!big_) return std::to_string(num_);
    return take_gmp_string(mpz_get_str(nullptr, 10, mpq_numref(big_)));
}

std::string BigRational::denominator_string() const {
    if (!big_) return std::to_string(den_);
    return take_gmp_string(mpz_get_str(nullptr, 10, mpq_denref(big_)));
}

std::size_t BigRational::hash() const noexcept {
    if (!big_) {
        std::size_t h = std::hash<std::int64_t>{}(num_);
        return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    std::size_t h = 0x51ed270b;
    for (mpz_srcptr z : {mpq_numref(big_), mpq_denref(big_)}) {
        std::size_t n = mpz_size(z);
        for (std::size_t i = 0; i < n; ++i)
            h ^= std::hash<mp_limb_t>{}(mpz_getlimbn(z, static_cast<mp_size_t>(i))) + (h << 6) + (h >> 2);
        h ^= static_cast<std::size_t>(mpz_sgn(z) + 2);
    }
    return h;
}

}  // namespace wak
