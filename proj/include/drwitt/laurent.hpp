#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "drwitt/zpn.hpp"

namespace drw {

enum class VarKind { Log, Plain };

struct Variable {
    std::string name;
    VarKind kind;
};

/// Ordered variable roster. Log variables admit negative exponents (poles
/// along the divisor {t_a = 0}); plain variables stay polynomial.
class VarRoster {
public:
    explicit VarRoster(std::vector<Variable> vars);

    std::size_t size() const { return vars_.size(); }
    const Variable& var(std::size_t i) const { return vars_[i]; }
    bool is_log(std::size_t i) const { return vars_[i].kind == VarKind::Log; }
    std::optional<std::size_t> index_of(std::string_view name) const;

    std::vector<std::size_t> log_indices() const;

    std::string header() const; // e.g. "vars: t:log, s:plain"

    friend bool operator==(const VarRoster& a, const VarRoster& b);
    friend bool operator!=(const VarRoster& a, const VarRoster& b) { return !(a == b); }

private:
    std::vector<Variable> vars_;
};

using RosterPtr = std::shared_ptr<const VarRoster>;

RosterPtr make_roster(std::vector<Variable> vars);
RosterPtr parse_roster(std::string_view header); // accepts "vars: t:log, s:plain" or "t:log,s:plain"

inline void require_same_roster(const RosterPtr& a, const RosterPtr& b)
{
    if (a.get() != b.get() && !(a && b && *a == *b))
        fail(errc::roster_mismatch, "operands live over different variable rosters");
}

using ExpVec = std::vector<int32_t>;

/// Exact sparse Laurent polynomial over Z/p^N: polynomial in the plain
/// variables, Laurent in the log variables. Terms are kept in lexicographic
/// order of exponent vectors (roster order), zero coefficients never stored.
class LaurentPoly {
public:
    LaurentPoly(RosterPtr roster, Zmod mod);

    static LaurentPoly constant(RosterPtr roster, const Scalar& c);
    static LaurentPoly monomial(RosterPtr roster, Zmod mod, ExpVec e, uint64_t coeff);
    static LaurentPoly variable(RosterPtr roster, Zmod mod, std::size_t var);

    const RosterPtr& roster() const { return roster_; }
    const Zmod& mod() const { return mod_; }
    const std::map<ExpVec, uint64_t>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t num_terms() const { return terms_.size(); }

    Scalar coeff(const ExpVec& e) const;
    void set_coeff(const ExpVec& e, const Scalar& c);
    void add_term(const ExpVec& e, const Scalar& c);

    bool is_constant() const;
    Scalar constant_term() const;

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b);
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    LaurentPoly operator-() const;
    LaurentPoly scaled(const Scalar& c) const;

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Nonnegative power by repeated multiplication.
    LaurentPoly pow(uint32_t k) const;

    /// Inverse of a unit c * t^a * (1 + w) with c a unit scalar, t^a a
    /// log-variable monomial and w topologically nilpotent (p | w). The
    /// series sum_{j<N} (-w)^j terminates; the product u * u^{-1} == 1 is
    /// verified before returning.
    LaurentPoly invert_unit() const;

    /// Frobenius lift: identity on coefficients, x -> x^p on every variable.
    LaurentPoly frobenius_lift() const;

    /// Reduce coefficients into Z/p^k (k <= N).
    LaurentPoly reduced(uint32_t k) const;
    /// Reinterpret coefficients in Z/p^k (k >= N) via the canonical lift.
    LaurentPoly lifted(uint32_t k) const;

    /// Exponent range of one variable across the support; nullopt when zero.
    std::optional<std::pair<int32_t, int32_t>> exp_range(std::size_t var) const;
    int32_t min_exp(std::size_t var) const; // 0 for the zero polynomial

    std::string str() const;

private:
    void normalize();

    RosterPtr roster_;
    Zmod mod_;
    std::map<ExpVec, uint64_t> terms_;
};

/// Substitution of one log variable by u * t'^e (a ring homomorphism).
/// The target roster must match the source except at the substituted slot:
/// src_var in the source corresponds to dst_var in the target, all other
/// positions carry identical variables. u lives over the target roster and
/// must be a unit per invert_unit; e >= 1.
LaurentPoly substitute(const LaurentPoly& f, std::size_t src_var, const LaurentPoly& u, int e,
                       const RosterPtr& target, std::size_t dst_var);

/// Text grammar, bit-exact: poly := term ('+' term)*,
/// term := coeff ['*' var '^' int]*, e.g. "3*t^-2*s^1 + 1".
LaurentPoly parse_poly(const RosterPtr& roster, Zmod mod, std::string_view text);

} // namespace drw
