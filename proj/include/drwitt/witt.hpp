#pragma once

#include <vector>

#include "drwitt/laurent.hpp"
#include "drwitt/zpn.hpp"

namespace drw {

/// Length-n Witt vector over a characteristic-p Laurent ring: components
/// a_0, ..., a_{n-1} are LaurentPolys at precision 1. Ring operations go
/// through ghost components of lifts at precision n; every p-adic division
/// along the way must be exact (asserted), which pins the classical
/// universal polynomials mod p.
class WittVector {
public:
    WittVector(uint32_t p, uint32_t n, RosterPtr roster);
    WittVector(uint32_t p, std::vector<LaurentPoly> comps);

    uint32_t p() const { return p_; }
    uint32_t length() const { return static_cast<uint32_t>(comps_.size()); }
    const RosterPtr& roster() const { return comps_.front().roster(); }
    const LaurentPoly& component(std::size_t i) const { return comps_[i]; }
    const std::vector<LaurentPoly>& components() const { return comps_; }

    bool is_zero() const;

    friend bool operator==(const WittVector& a, const WittVector& b);
    friend bool operator!=(const WittVector& a, const WittVector& b) { return !(a == b); }

    std::string str() const; // W(p=..,n=..)[a0; a1; ...]

private:
    uint32_t p_;
    std::vector<LaurentPoly> comps_;
};

WittVector witt_zero(uint32_t p, uint32_t n, RosterPtr roster);
WittVector witt_add(const WittVector& a, const WittVector& b);
WittVector witt_mul(const WittVector& a, const WittVector& b);
WittVector witt_neg(const WittVector& a);

/// Teichmuller lift [f] = (f, 0, ..., 0).
WittVector teichmuller(const LaurentPoly& f, uint32_t n);
/// Componentwise p-th power (Frobenius on W_n of a char-p ring).
WittVector frobenius_W(const WittVector& a);
/// Shift (0, a_0, ..., a_{n-2}).
WittVector verschiebung(const WittVector& a);

/// Ghost components w_j = sum_{i<=j} p^i x_i^{p^(j-i)} of the canonical
/// precision-n lift; the ghost map is an additive/multiplicative
/// homomorphism to coordinatewise arithmetic.
std::vector<LaurentPoly> ghost_components(const WittVector& a);

/// The Illusie-Raynaud beta map at H^0: solve
///   a~_0^{p^j} + p a~_1^{p^(j-1)} + ... + p^j a~_j = F^j b~  (0 <= j < n)
/// for a precision-2n input b whose reduction mod p^n is closed, where F is
/// the Frobenius lift; components are a~_j mod p. Throws not_closed when
/// d(b mod p^n) != 0 and errc::precision on an inexact division (cannot
/// happen at working precision 2n).
WittVector beta(const LaurentPoly& b, uint32_t n);

/// Koizumi's W_nO filtration test: true iff for all j the support of
/// t^(p^j (ceil(r)-1)) a_j^(p^(n-1)) has no negative t-exponent; r = 0 asks
/// plain integrality of every component.
bool koizumi_membership(const WittVector& a, const RatExponent& r, std::size_t t);

} // namespace drw
