#include "drwitt/zpn.hpp"

namespace drw {

const char* errc_name(errc c)
{
    switch (c) {
    case errc::modulus_mismatch: return "modulus mismatch";
    case errc::roster_mismatch: return "roster mismatch";
    case errc::dimension_mismatch: return "dimension mismatch";
    case errc::not_a_unit: return "not a unit";
    case errc::not_closed: return "not closed";
    case errc::parse_error: return "parse error";
    case errc::invalid_map: return "invalid map";
    case errc::unsupported_spec: return "unsupported spec";
    case errc::resource_limit: return "resource limit";
    case errc::precision: return "precision";
    case errc::bad_cover: return "bad cover";
    case errc::bad_argument: return "bad argument";
    case errc::internal: return "internal invariant violation";
    }
    return "unknown";
}

namespace {

bool is_prime(uint32_t p)
{
    if (p < 2)
        return false;
    for (uint32_t d = 2; static_cast<uint64_t>(d) * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

} // namespace

Zmod::Zmod(uint32_t p_, uint32_t prec_) : p(p_), prec(prec_)
{
    check(is_prime(p_), errc::bad_argument, "p = " + std::to_string(p_) + " is not prime");
    check(prec_ >= 1, errc::bad_argument, "precision must be >= 1");
    q = 1;
    for (uint32_t i = 0; i < prec_; ++i) {
        check(q <= (uint64_t(1) << 62) / p_, errc::bad_argument,
              "p^N does not fit in a double-word integer");
        q *= p_;
    }
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t q)
{
    return static_cast<uint64_t>((static_cast<__uint128_t>(a) * b) % q);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t q)
{
    uint64_t r = 1 % q;
    a %= q;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, q);
        a = mulmod(a, a, q);
        e >>= 1;
    }
    return r;
}

uint32_t Scalar::valuation() const
{
    if (v_ == 0)
        return m_.prec;
    uint32_t v = 0;
    uint64_t x = v_;
    while (x % m_.p == 0) {
        x /= m_.p;
        ++v;
    }
    return v;
}

Scalar Scalar::inv() const
{
    check(is_unit(), errc::not_a_unit,
          std::to_string(v_) + " is not invertible mod " + std::to_string(m_.q));
    // extended Euclid on (v, q)
    long long t0 = 0, t1 = 1;
    long long r0 = static_cast<long long>(m_.q), r1 = static_cast<long long>(v_);
    while (r1 != 0) {
        long long qq = r0 / r1;
        long long tmp = r0 - qq * r1;
        r0 = r1;
        r1 = tmp;
        tmp = t0 - qq * t1;
        t0 = t1;
        t1 = tmp;
    }
    if (t0 < 0)
        t0 += static_cast<long long>(m_.q);
    return Scalar(static_cast<uint64_t>(t0), m_);
}

Scalar Scalar::divexact_p(uint32_t k) const
{
    uint64_t d = 1;
    for (uint32_t i = 0; i < k; ++i)
        d *= m_.p;
    if (v_ % d != 0)
        fail(errc::internal, "inexact division by p^" + std::to_string(k));
    return Scalar(v_ / d, m_);
}

RatExponent::RatExponent(long long n, long long d) : num(n), den(d)
{
    check(d != 0, errc::bad_argument, "zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
}

std::string RatExponent::str() const
{
    if (den == 1)
        return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

long long ceil_div(long long a, long long b)
{
    // b > 0 assumed
    long long q = a / b;
    if (a % b != 0 && a > 0)
        ++q;
    return q;
}

long long ceil_rat(const RatExponent& r)
{
    return ceil_div(r.num, r.den);
}

RatExponent rat_div(const RatExponent& r, long long e)
{
    check(e >= 1, errc::bad_argument, "ramification degree must be >= 1");
    return RatExponent(r.num, r.den * e);
}

bool ceil_identity(const RatExponent& r, long long e)
{
    return ceil_div(ceil_rat(r), e) == ceil_rat(rat_div(r, e));
}

} // namespace drw
