#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace drw {

enum class errc {
    modulus_mismatch,
    roster_mismatch,
    dimension_mismatch,
    not_a_unit,
    not_closed,
    parse_error,
    invalid_map,
    unsupported_spec,
    resource_limit,
    precision,
    bad_cover,
    bad_argument,
    internal,
};

const char* errc_name(errc c);

/// All contract violations surface as Error; errc::internal marks bug traps
/// (e.g. an inexact p-adic division that the theory says cannot happen).
class Error : public std::runtime_error {
public:
    Error(errc c, const std::string& what)
        : std::runtime_error(std::string(errc_name(c)) + ": " + what), code_(c)
    {
    }
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc c, const std::string& msg)
{
    throw Error(c, msg);
}

inline void check(bool cond, errc c, const std::string& msg)
{
    if (!cond)
        fail(c, msg);
}

/// Modulus descriptor for Z/p^N. p is a small prime and p^N must fit
/// comfortably below 2^62 so products can be taken through __uint128_t.
struct Zmod {
    uint32_t p = 2;
    uint32_t prec = 1; // N
    uint64_t q = 2;    // p^N

    Zmod() = default;
    Zmod(uint32_t p_, uint32_t prec_);

    Zmod with_prec(uint32_t n) const { return Zmod(p, n); }

    friend bool operator==(const Zmod& a, const Zmod& b)
    {
        return a.p == b.p && a.prec == b.prec;
    }
    friend bool operator!=(const Zmod& a, const Zmod& b) { return !(a == b); }
};

inline void require_same_mod(const Zmod& a, const Zmod& b)
{
    if (a != b)
        fail(errc::modulus_mismatch,
             "operands live over Z/" + std::to_string(a.p) + "^" + std::to_string(a.prec) +
                 " and Z/" + std::to_string(b.p) + "^" + std::to_string(b.prec));
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t q);

/// Residue class in Z/p^N. A value is a unit iff p does not divide it and
/// nilpotent iff p does; every operation reduces mod p^N and refuses to mix
/// distinct (p, N).
class Scalar {
public:
    Scalar() = default;
    Scalar(uint64_t v, Zmod m) : v_(v % m.q), m_(m) {}

    static Scalar from_int(long long v, Zmod m)
    {
        long long r = v % static_cast<long long>(m.q);
        if (r < 0)
            r += static_cast<long long>(m.q);
        return Scalar(static_cast<uint64_t>(r), m);
    }

    uint64_t value() const { return v_; }
    const Zmod& mod() const { return m_; }

    bool is_zero() const { return v_ == 0; }
    bool is_unit() const { return v_ % m_.p != 0; }
    bool is_nilpotent() const { return v_ % m_.p == 0; }

    /// p-adic valuation; by convention the valuation of 0 is N.
    uint32_t valuation() const;

    Scalar inv() const;
    Scalar pow(uint64_t e) const { return Scalar(powmod(v_, e, m_.q), m_); }

    /// Exact division by p^k. Throws errc::internal if p^k does not divide
    /// the representative; the result is only meaningful mod p^(N-k).
    Scalar divexact_p(uint32_t k) const;

    friend Scalar operator+(const Scalar& a, const Scalar& b)
    {
        require_same_mod(a.m_, b.m_);
        uint64_t s = a.v_ + b.v_;
        if (s >= a.m_.q)
            s -= a.m_.q;
        return Scalar(s, a.m_);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b)
    {
        require_same_mod(a.m_, b.m_);
        uint64_t s = a.v_ >= b.v_ ? a.v_ - b.v_ : a.v_ + a.m_.q - b.v_;
        return Scalar(s, a.m_);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b)
    {
        require_same_mod(a.m_, b.m_);
        return Scalar(mulmod(a.v_, b.v_, a.m_.q), a.m_);
    }
    Scalar operator-() const { return Scalar(v_ == 0 ? 0 : m_.q - v_, m_); }

    friend bool operator==(const Scalar& a, const Scalar& b)
    {
        require_same_mod(a.m_, b.m_);
        return a.v_ == b.v_;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }

private:
    uint64_t v_ = 0;
    Zmod m_{};
};

/// Reduced rational used for modulus exponents r and divisor multiplicities.
struct RatExponent {
    long long num = 0;
    long long den = 1;

    RatExponent() = default;
    RatExponent(long long n, long long d = 1);

    bool operator==(const RatExponent&) const = default;
    bool is_negative() const { return num < 0; }
    bool is_zero() const { return num == 0; }

    friend bool operator<(const RatExponent& a, const RatExponent& b)
    {
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const RatExponent& a, const RatExponent& b) { return !(b < a); }

    std::string str() const;
};

/// Least integer >= num/den.
long long ceil_rat(const RatExponent& r);

/// r/e as a reduced rational; e must be positive.
RatExponent rat_div(const RatExponent& r, long long e);

long long ceil_div(long long a, long long b);

/// The identity ceil(ceil(r)/e) == ceil(r/e) for r >= 0, e >= 1.
bool ceil_identity(const RatExponent& r, long long e);

} // namespace drw
