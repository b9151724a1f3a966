#include "drwitt/witt.hpp"

#include "drwitt/logform.hpp"

namespace drw {

WittVector::WittVector(uint32_t p, uint32_t n, RosterPtr roster) : p_(p)
{
    check(n >= 1, errc::bad_argument, "Witt length must be >= 1");
    Zmod m(p, 1);
    for (uint32_t i = 0; i < n; ++i)
        comps_.emplace_back(roster, m);
}

WittVector::WittVector(uint32_t p, std::vector<LaurentPoly> comps)
    : p_(p), comps_(std::move(comps))
{
    check(!comps_.empty(), errc::bad_argument, "Witt length must be >= 1");
    for (const auto& c : comps_) {
        require_same_roster(c.roster(), comps_.front().roster());
        check(c.mod() == Zmod(p_, 1), errc::modulus_mismatch,
              "Witt components must live at precision 1");
    }
}

bool WittVector::is_zero() const
{
    for (const auto& c : comps_)
        if (!c.is_zero())
            return false;
    return true;
}

bool operator==(const WittVector& a, const WittVector& b)
{
    check(a.p_ == b.p_ && a.length() == b.length(), errc::modulus_mismatch,
          "Witt parameters differ");
    return a.comps_ == b.comps_;
}

std::string WittVector::str() const
{
    std::string s =
        "W(p=" + std::to_string(p_) + ",n=" + std::to_string(length()) + ")[";
    for (std::size_t i = 0; i < comps_.size(); ++i) {
        if (i)
            s += "; ";
        s += comps_[i].str();
    }
    return s + "]";
}

WittVector witt_zero(uint32_t p, uint32_t n, RosterPtr roster)
{
    return WittVector(p, n, std::move(roster));
}

namespace {

void require_compatible(const WittVector& a, const WittVector& b)
{
    check(a.p() == b.p() && a.length() == b.length(), errc::modulus_mismatch,
          "Witt parameters differ");
    require_same_roster(a.roster(), b.roster());
}

std::vector<LaurentPoly> lift_components(const WittVector& a, uint32_t prec)
{
    std::vector<LaurentPoly> out;
    for (const auto& c : a.components())
        out.push_back(c.lifted(prec));
    return out;
}

std::vector<LaurentPoly> ghost_of_lifts(const std::vector<LaurentPoly>& x, uint32_t p)
{
    // w_j = sum_{i<=j} p^i x_i^{p^(j-i)}
    std::vector<LaurentPoly> w;
    const Zmod& m = x.front().mod();
    for (std::size_t j = 0; j < x.size(); ++j) {
        LaurentPoly wj(x.front().roster(), m);
        uint64_t pi = 1;
        for (std::size_t i = 0; i <= j; ++i) {
            uint32_t e = 1;
            for (std::size_t k = 0; k < j - i; ++k)
                e *= p;
            wj = wj + x[i].pow(e).scaled(Scalar(pi % m.q, m));
            pi *= p;
        }
        w.push_back(std::move(wj));
    }
    return w;
}

LaurentPoly divexact_poly(const LaurentPoly& f, uint32_t p, uint32_t k, errc on_fail)
{
    LaurentPoly out(f.roster(), f.mod());
    uint64_t d = 1;
    for (uint32_t i = 0; i < k; ++i)
        d *= p;
    for (const auto& [e, c] : f.terms()) {
        if (c % d != 0)
            fail(on_fail, "inexact division by p^" + std::to_string(k));
        out.add_term(e, Scalar(c / d, f.mod()));
    }
    return out;
}

/// Recover Witt components z from ghost values w working at precision n:
/// z_j = (w_j - sum_{i<j} p^i z_i^{p^(j-i)}) / p^j; each division exact.
std::vector<LaurentPoly> ghost_recover(const std::vector<LaurentPoly>& w, uint32_t p)
{
    std::vector<LaurentPoly> z;
    const Zmod& m = w.front().mod();
    for (std::size_t j = 0; j < w.size(); ++j) {
        LaurentPoly acc = w[j];
        uint64_t pi = 1;
        for (std::size_t i = 0; i < j; ++i) {
            uint32_t e = 1;
            for (std::size_t k = 0; k < j - i; ++k)
                e *= p;
            acc = acc - z[i].pow(e).scaled(Scalar(pi % m.q, m));
            pi *= p;
        }
        z.push_back(divexact_poly(acc, p, static_cast<uint32_t>(j), errc::internal));
    }
    return z;
}

WittVector from_lifts(uint32_t p, const std::vector<LaurentPoly>& z)
{
    std::vector<LaurentPoly> comps;
    for (const auto& f : z)
        comps.push_back(f.reduced(1));
    return WittVector(p, std::move(comps));
}

} // namespace

std::vector<LaurentPoly> ghost_components(const WittVector& a)
{
    return ghost_of_lifts(lift_components(a, a.length()), a.p());
}

WittVector witt_add(const WittVector& a, const WittVector& b)
{
    require_compatible(a, b);
    auto wa = ghost_components(a);
    auto wb = ghost_components(b);
    std::vector<LaurentPoly> w;
    for (std::size_t j = 0; j < wa.size(); ++j)
        w.push_back(wa[j] + wb[j]);
    return from_lifts(a.p(), ghost_recover(w, a.p()));
}

WittVector witt_mul(const WittVector& a, const WittVector& b)
{
    require_compatible(a, b);
    auto wa = ghost_components(a);
    auto wb = ghost_components(b);
    std::vector<LaurentPoly> w;
    for (std::size_t j = 0; j < wa.size(); ++j)
        w.push_back(wa[j] * wb[j]);
    return from_lifts(a.p(), ghost_recover(w, a.p()));
}

WittVector witt_neg(const WittVector& a)
{
    auto wa = ghost_components(a);
    std::vector<LaurentPoly> w;
    for (auto& f : wa)
        w.push_back(-f);
    return from_lifts(a.p(), ghost_recover(w, a.p()));
}

WittVector teichmuller(const LaurentPoly& f, uint32_t n)
{
    check(f.mod().prec == 1, errc::modulus_mismatch, "Teichmuller input at precision 1");
    std::vector<LaurentPoly> comps;
    comps.push_back(f);
    for (uint32_t i = 1; i < n; ++i)
        comps.emplace_back(f.roster(), f.mod());
    return WittVector(f.mod().p, std::move(comps));
}

WittVector frobenius_W(const WittVector& a)
{
    std::vector<LaurentPoly> comps;
    for (const auto& c : a.components())
        comps.push_back(c.pow(a.p()));
    return WittVector(a.p(), std::move(comps));
}

WittVector verschiebung(const WittVector& a)
{
    std::vector<LaurentPoly> comps;
    comps.emplace_back(a.roster(), Zmod(a.p(), 1));
    for (std::size_t i = 0; i + 1 < a.length(); ++i)
        comps.push_back(a.component(i));
    return WittVector(a.p(), std::move(comps));
}

WittVector beta(const LaurentPoly& b, uint32_t n)
{
    uint32_t p = b.mod().p;
    check(b.mod().prec == 2 * n, errc::precision,
          "beta input must be given at working precision 2n");
    // closedness of b mod p^n: every exponent times its coefficient is 0
    {
        LaurentPoly bn = b.reduced(n);
        LogForm db = d(LogForm::from_poly(bn));
        if (!db.is_zero())
            fail(errc::not_closed, "d(b mod p^n) != 0");
    }

    // solve a_0^{p^j} + p a_1^{p^(j-1)} + ... + p^j a_j = F^j b successively
    std::vector<LaurentPoly> atil;
    LaurentPoly Fjb = b;
    for (uint32_t j = 0; j < n; ++j) {
        if (j > 0)
            Fjb = Fjb.frobenius_lift();
        LaurentPoly acc = Fjb;
        uint64_t pi = 1;
        for (uint32_t i = 0; i < j; ++i) {
            uint32_t e = 1;
            for (uint32_t k = 0; k < j - i; ++k)
                e *= p;
            acc = acc - atil[i].pow(e).scaled(Scalar(pi % b.mod().q, b.mod()));
            pi *= p;
        }
        atil.push_back(divexact_poly(acc, p, j, errc::precision));
    }

    std::vector<LaurentPoly> comps;
    for (const auto& f : atil)
        comps.push_back(f.reduced(1));
    return WittVector(p, std::move(comps));
}

bool koizumi_membership(const WittVector& a, const RatExponent& r, std::size_t t)
{
    check(!r.is_negative(), errc::bad_argument, "r must be >= 0");
    check(t < a.roster()->size() && a.roster()->is_log(t), errc::bad_argument,
          "valuation variable must be a log variable");
    uint32_t n = a.length();
    if (r.is_zero()) {
        for (const auto& c : a.components())
            if (c.min_exp(t) < 0)
                return false;
        return true;
    }
    long long N = ceil_rat(r) - 1;
    long long pj = 1;
    long long pn1 = 1;
    for (uint32_t k = 0; k + 1 < n; ++k)
        pn1 *= a.p();
    for (uint32_t j = 0; j < n; ++j) {
        // support of t^{p^j N} a_j^{p^(n-1)}: exponents p^j N + p^(n-1) m
        for (const auto& [e, c] : a.component(j).terms()) {
            (void)c;
            if (pj * N + pn1 * e[t] < 0)
                return false;
        }
        pj *= a.p();
    }
    return true;
}

} // namespace drw
