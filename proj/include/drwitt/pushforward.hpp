#pragma once

#include <map>
#include <vector>

#include "drwitt/complexes.hpp"

namespace drw {

/// Finite cover of one log variable: f^* t = u * t'^e with e >= 1 and u a
/// unit free of t' (a unit of the carried-variable subring). The source is
/// finite free of rank e over the target with basis 1, t', ..., t'^(e-1);
/// this is validated at construction by an exact round trip through the
/// rewriting t'^e = u^{-1} t.
///
/// The pushforward factors through t = u t1, t1 = t'^e: the pure-power
/// stage traces componentwise (module trace on coefficients, residue trace
/// on the dlog t' components) and the unit stage is the inverse of the
/// substitution isomorphism t -> u t1. Both stages commute with d and
/// satisfy the projection formula, hence so does the composite.
class FiniteCover {
public:
    FiniteCover(RosterPtr source, std::size_t tprime, RosterPtr target, std::size_t t,
                LaurentPoly u, int e);

    const RosterPtr& source() const { return source_; }
    const RosterPtr& target() const { return target_; }
    std::size_t tprime() const { return tprime_; }
    std::size_t t() const { return t_; }
    const LaurentPoly& unit() const { return u_; }
    int e() const { return e_; }
    const Zmod& mod() const { return u_.mod(); }

    /// Express a source element in the module basis: a = sum_k c_k t'^k
    /// with c_k over the target ring.
    std::vector<LaurentPoly> reduce_to_basis(const LaurentPoly& a) const;

    /// Trace of multiplication by a on the rank-e free module. Additive,
    /// target-linear, trace0(1) = e.
    LaurentPoly trace0(const LaurentPoly& a) const;

    /// The dlog-component trace of 1-forms f dlog t', characterized by the
    /// residue pairing res_t(trace1 . t^m dlog t) = res_t'(f f^*(t^m) dlog t').
    LaurentPoly trace1_dlog(const LaurentPoly& f) const;

    /// Pushforward of an i-form (the absolute trace over W_n).
    LogForm pushforward(const LogForm& w) const;

    /// Pullback f^*: t -> u t'^e on coefficients, dlog t -> e dlog t' +
    /// dlog u on the basis.
    LaurentPoly pullback(const LaurentPoly& f) const;
    LogForm pullback(const LogForm& w) const;

private:
    LaurentPoly u_target_power(int k) const; // u^k transported to the target roster
    LogForm unit_twist(const LogForm& w) const;

    RosterPtr source_;
    RosterPtr target_;
    std::size_t tprime_;
    std::size_t t_;
    LaurentPoly u_;        // over the source roster
    LaurentPoly u_tgt_;    // same unit over the target roster
    LaurentPoly u_tgt_inv_;
    int e_;
    mutable std::map<int, LaurentPoly> upow_tgt_;
};

/// Cover t = u * t'^e between rosters differing only in the distinguished
/// variable's name (same slot).
FiniteCover make_cover(const RosterPtr& source, const std::string& tprime_name,
                       const RosterPtr& target, const std::string& t_name,
                       const LaurentPoly& u, int e);

struct LiftIndependenceReport {
    std::size_t cases = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

/// Appendix claim: two covers agreeing mod p induce the same map on H^i
/// over the window (class-level equality on generators); the pushforwards
/// are also checked to commute with d on every window basis element.
LiftIndependenceReport check_lift_independence(const FiniteCover& f, const FiniteCover& g,
                                               int i, const DegreeWindow& src_window,
                                               const DegreeWindow& dst_window);

} // namespace drw
