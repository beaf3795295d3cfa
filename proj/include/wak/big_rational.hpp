#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmp.h>

namespace wak {

/// Exact rational number in lowest terms with a positive denominator.
///
/// Values whose numerator and denominator fit in 64 bits are stored inline and
/// handled with 128-bit intermediates; anything larger is promoted to a GMP
/// rational and demoted again as soon as it fits.
class BigRational {
public:
    BigRational() noexcept = default;
    BigRational(long long n) noexcept : num_(n) {}  // NOLINT(implicit)
    BigRational(int n) noexcept : num_(n) {}        // NOLINT(implicit)
    BigRational(long long n, long long d);

    BigRational(const BigRational& other) : num_(other.num_), den_(other.den_) {
        if (other.big_) copy_big(other);
    }
    BigRational(BigRational&& other) noexcept : num_(other.num_), den_(other.den_), big_(other.big_) {
        other.big_ = nullptr;
    }
    BigRational& operator=(const BigRational& other) {
        if (this == &other) return *this;
        release();
        num_ = other.num_;
        den_ = other.den_;
        if (other.big_) copy_big(other);
        return *this;
    }
    BigRational& operator=(BigRational&& other) noexcept {
        if (this == &other) return *this;
        release();
        num_ = other.num_;
        den_ = other.den_;
        big_ = other.big_;
        other.big_ = nullptr;
        return *this;
    }
    ~BigRational() { release(); }

    /// Parses "a", "-a", "a/b" with arbitrary-size decimal integers.
    static BigRational parse(std::string_view text);

    bool is_zero() const noexcept { return big_ == nullptr && num_ == 0; }
    bool is_one() const noexcept { return big_ == nullptr && num_ == 1 && den_ == 1; }
    bool is_integer() const noexcept;
    int sign() const noexcept;
    bool is_small() const noexcept { return big_ == nullptr; }

    /// Valid only when is_small().
    std::int64_t small_num() const noexcept { return num_; }
    std::int64_t small_den() const noexcept { return den_; }

    BigRational operator-() const;
    BigRational inverse() const;
    BigRational abs() const { return sign() < 0 ? -*this : *this; }

    BigRational& operator+=(const BigRational& b);
    BigRational& operator-=(const BigRational& b);
    BigRational& operator*=(const BigRational& b);
    BigRational& operator/=(const BigRational& b);

    friend BigRational operator+(const BigRational& a, const BigRational& b);
    friend BigRational operator-(const BigRational& a, const BigRational& b);
    friend BigRational operator*(const BigRational& a, const BigRational& b);
    friend BigRational operator/(const BigRational& a, const BigRational& b);

    friend bool operator==(const BigRational& a, const BigRational& b) noexcept;
    friend std::strong_ordering operator<=>(const BigRational& a, const BigRational& b);

    std::string to_string() const;
    std::string numerator_string() const;
    std::string denominator_string() const;
    std::size_t hash() const noexcept;

private:
    static BigRational from_i128(__int128 n, __int128 d);
    static BigRational from_mpq(mpq_srcptr q);
    void load(mpq_ptr out) const;
    void copy_big(const BigRational& other);
    void release_big() noexcept;
    void release() noexcept {
        if (big_) release_big();
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    mpq_ptr big_ = nullptr;
};

}  // namespace wak
