#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "drwitt/laurent.hpp"

namespace drw {

/// Subset of roster indices encoded as a bitmask (rosters are small).
using Mask = uint32_t;

inline int mask_popcount(Mask m) { return __builtin_popcount(m); }

/// Pole orders b_a >= 0 along the log divisors; zero at plain slots.
class PoleVector {
public:
    PoleVector(RosterPtr roster, std::vector<int32_t> b);
    static PoleVector zero(RosterPtr roster);

    const RosterPtr& roster() const { return roster_; }
    int32_t at(std::size_t var) const { return b_[var]; }
    PoleVector plus(std::size_t var, int32_t delta) const;

    friend bool operator==(const PoleVector& a, const PoleVector& b)
    {
        return *a.roster_ == *b.roster_ && a.b_ == b.b_;
    }
    bool leq(const PoleVector& other) const;

    std::string str() const;

private:
    RosterPtr roster_;
    std::vector<int32_t> b_;
};

/// Homogeneous degree-i differential form in the mixed basis
/// {dlog t_a : a log} u {ds_j : j plain}. Basis words are wedge products in
/// roster order; components keep LaurentPoly coefficients and never store
/// zero. Sign conventions come from permutation parity against roster order.
class LogForm {
public:
    LogForm(RosterPtr roster, Zmod mod, unsigned degree);

    static LogForm from_poly(const LaurentPoly& f); // degree 0
    static LogForm basis(RosterPtr roster, Zmod mod, Mask word); // coefficient 1
    static LogForm dlog(RosterPtr roster, Zmod mod, std::size_t log_var);

    const RosterPtr& roster() const { return roster_; }
    const Zmod& mod() const { return mod_; }
    unsigned degree() const { return degree_; }
    const std::map<Mask, LaurentPoly>& components() const { return comps_; }
    bool is_zero() const { return comps_.empty(); }

    LaurentPoly component(Mask m) const;
    void add_component(Mask m, const LaurentPoly& f);

    friend LogForm operator+(const LogForm& a, const LogForm& b);
    friend LogForm operator-(const LogForm& a, const LogForm& b);
    LogForm operator-() const;
    LogForm scaled(const Scalar& c) const;
    LogForm times(const LaurentPoly& f) const;

    friend bool operator==(const LogForm& a, const LogForm& b);
    friend bool operator!=(const LogForm& a, const LogForm& b) { return !(a == b); }

    LogForm reduced(uint32_t k) const;
    LogForm lifted(uint32_t k) const;

    std::string str() const;

private:
    RosterPtr roster_;
    Zmod mod_;
    unsigned degree_;
    std::map<Mask, LaurentPoly> comps_;
};

/// Wedge product; graded-commutative and associative.
LogForm wedge(const LogForm& a, const LogForm& b);

/// Exterior derivative in the dlog basis: on a monomial coefficient it adds
/// m_a * (same monomial) dlog t_a per log variable and m_j * (monomial/s_j)
/// ds_j per plain variable. Preserves multidegree (ds_j weighs 1 toward
/// s_j-degree, dlog t_a weighs 0).
LogForm d(const LogForm& w);

/// True iff t^b * w has no negative log-variable exponent in any component.
bool pole_membership(const LogForm& w, const PoleVector& b);

/// Lemma 4.2 pair for the distinguished log variable t. Requires w to be a
/// plain form with respect to t (no pole, dlog-t components divisible by t).
/// Returns (w in t*Omega^i(log t), w ^ dlog t regular in the dt basis).
std::pair<bool, bool> lemma42_criterion(const LogForm& w, std::size_t t);

/// Decomposition w = alpha + beta ^ dlog t with alpha, beta free of dlog t.
std::pair<LogForm, LogForm> split_top_variable(const LogForm& w, std::size_t t);

/// Multidegree of a form term: monomial exponents plus 1 for each plain
/// variable appearing in the basis word.
ExpVec term_multidegree(const RosterPtr& roster, Mask word, const ExpVec& mono);

/// Bucket a form into multidegree-homogeneous pieces.
std::map<ExpVec, LogForm> split_by_multidegree(const LogForm& w);

/// Form text grammar: form := form-term ('+' form-term)*,
/// form-term := [poly-term '*'] basis-word | poly-term,
/// basis-word := elem (('w'|'∧') elem)*, elem := 'dlog(' var ')' | 'd(' var ')'.
/// Repeated variables inside one basis word are rejected.
LogForm parse_form(const RosterPtr& roster, Zmod mod, std::string_view text);

} // namespace drw
