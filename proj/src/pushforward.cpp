#include "drwitt/pushforward.hpp"

namespace drw {

namespace {

int32_t floordiv(int32_t a, int32_t b)
{
    int32_t q = a / b;
    if (a % b != 0 && ((a < 0) != (b < 0)))
        --q;
    return q;
}

/// Transport a poly between rosters that agree away from one renamed slot.
LaurentPoly transport(const LaurentPoly& f, const RosterPtr& to)
{
    LaurentPoly out(to, f.mod());
    for (const auto& [e, c] : f.terms())
        out.add_term(e, Scalar(c, f.mod()));
    return out;
}

} // namespace

FiniteCover::FiniteCover(RosterPtr source, std::size_t tprime, RosterPtr target, std::size_t t,
                         LaurentPoly u, int e)
    : source_(std::move(source)), target_(std::move(target)), tprime_(tprime), t_(t),
      u_(std::move(u)), u_tgt_(target_, u_.mod()), u_tgt_inv_(target_, u_.mod()), e_(e)
{
    check(e_ >= 1, errc::bad_cover, "ramification degree must be >= 1");
    check(tprime_ == t_, errc::bad_cover, "t and t' must occupy the same roster slot");
    check(tprime_ < source_->size() && source_->is_log(tprime_), errc::bad_cover,
          "t' must be a log variable");
    check(t_ < target_->size() && target_->is_log(t_), errc::bad_cover,
          "t must be a log variable");
    check(source_->size() == target_->size(), errc::bad_cover, "roster sizes differ");
    for (std::size_t v = 0; v < source_->size(); ++v) {
        if (v == tprime_)
            continue;
        check(source_->var(v).name == target_->var(v).name &&
                  source_->var(v).kind == target_->var(v).kind,
              errc::bad_cover, "carried variables must agree");
    }
    require_same_roster(u_.roster(), source_);
    for (const auto& [ex, c] : u_.terms()) {
        (void)c;
        check(ex[tprime_] == 0, errc::bad_cover, "cover unit must be free of t'");
    }
    u_.invert_unit(); // validates unitness
    u_tgt_ = transport(u_, target_);
    u_tgt_inv_ = u_tgt_.invert_unit();

    // freeness round trip: reduce t'^e and t'^-1, expand back, compare
    for (int32_t m : {e_, -1}) {
        ExpVec ex(source_->size(), 0);
        ex[tprime_] = m;
        LaurentPoly a = LaurentPoly::monomial(source_, mod(), ex, 1);
        std::vector<LaurentPoly> c = reduce_to_basis(a);
        LaurentPoly back(source_, mod());
        for (int k = 0; k < e_; ++k) {
            ExpVec tk(source_->size(), 0);
            tk[tprime_] = k;
            back = back + pullback(c[static_cast<std::size_t>(k)]) *
                              LaurentPoly::monomial(source_, mod(), tk, 1);
        }
        check(back == a, errc::bad_cover, "module basis fails the round trip");
    }
}

LaurentPoly FiniteCover::u_target_power(int k) const
{
    auto it = upow_tgt_.find(k);
    if (it != upow_tgt_.end())
        return it->second;
    LaurentPoly r = k >= 0 ? u_tgt_.pow(static_cast<uint32_t>(k))
                           : u_tgt_inv_.pow(static_cast<uint32_t>(-k));
    upow_tgt_.emplace(k, r);
    return r;
}

std::vector<LaurentPoly> FiniteCover::reduce_to_basis(const LaurentPoly& a) const
{
    require_same_roster(a.roster(), source_);
    require_same_mod(a.mod(), mod());
    std::vector<LaurentPoly> out(static_cast<std::size_t>(e_), LaurentPoly(target_, mod()));
    for (const auto& [ex, c] : a.terms()) {
        int32_t m = ex[tprime_];
        int32_t q = floordiv(m, e_);
        int32_t k = m - q * e_; // in [0, e)
        // t'^m = u^{-q} t^q t'^k
        ExpVec te(target_->size(), 0);
        for (std::size_t v = 0; v < te.size(); ++v)
            te[v] = (v == t_) ? q : ex[v];
        LaurentPoly mono = LaurentPoly::monomial(target_, mod(), te, c);
        out[static_cast<std::size_t>(k)] =
            out[static_cast<std::size_t>(k)] + mono * u_target_power(-q);
    }
    return out;
}

LaurentPoly FiniteCover::trace0(const LaurentPoly& a) const
{
    // trace of the multiplication matrix in the basis 1, t', ..., t'^(e-1)
    LaurentPoly tr(target_, mod());
    for (int k = 0; k < e_; ++k) {
        ExpVec tk(source_->size(), 0);
        tk[tprime_] = k;
        LaurentPoly atk = a * LaurentPoly::monomial(source_, mod(), tk, 1);
        tr = tr + reduce_to_basis(atk)[static_cast<std::size_t>(k)];
    }
    return tr;
}

LaurentPoly FiniteCover::trace1_dlog(const LaurentPoly& f) const
{
    require_same_roster(f.roster(), source_);
    // h = sum_m coeff_{t'^{-em}}(f u^m) t^{-m}; u is free of t', so only
    // the terms of f with e | exponent contribute.
    LaurentPoly h(target_, mod());
    for (const auto& [ex, c] : f.terms()) {
        if (ex[tprime_] % e_ != 0)
            continue;
        int32_t m = -ex[tprime_] / e_;
        ExpVec te(target_->size(), 0);
        for (std::size_t v = 0; v < te.size(); ++v)
            te[v] = (v == t_) ? -m : ex[v];
        h = h + LaurentPoly::monomial(target_, mod(), te, c) * u_target_power(m);
    }
    return h;
}

LogForm FiniteCover::unit_twist(const LogForm& w) const
{
    // inverse of the substitution iso t -> u t1: coefficients pick up
    // u^{-k} on t^k, the basis sends dlog t to dlog t - dlog u
    LogForm dlog_u(target_, mod(), 1);
    {
        LogForm du = d(LogForm::from_poly(u_tgt_));
        dlog_u = du.times(u_tgt_inv_);
    }
    LogForm out(target_, mod(), w.degree());
    for (const auto& [m, f] : w.components()) {
        // coefficient twist
        LaurentPoly g(target_, mod());
        for (const auto& [ex, c] : f.terms())
            g = g + LaurentPoly::monomial(target_, mod(), ex, c) * u_target_power(-ex[t_]);
        // basis twist
        LogForm acc = LogForm::from_poly(g);
        for (std::size_t v = 0; v < target_->size(); ++v) {
            if (!(m & (Mask(1) << v)))
                continue;
            LogForm img = (v == t_)
                              ? LogForm::dlog(target_, mod(), t_) - dlog_u
                              : LogForm::basis(target_, mod(), Mask(1) << v);
            acc = wedge(acc, img);
        }
        out = out + acc;
    }
    return out;
}

LogForm FiniteCover::pushforward(const LogForm& w) const
{
    require_same_roster(w.roster(), source_);
    Mask tbit = Mask(1) << tprime_;
    // pure-power stage t1 = t'^e, componentwise
    LogForm mid(target_, mod(), w.degree());
    for (const auto& [m, f] : w.components()) {
        bool has_dlog = (m & tbit) != 0;
        LaurentPoly g(target_, mod());
        for (const auto& [ex, c] : f.terms()) {
            if (ex[tprime_] % e_ != 0)
                continue;
            ExpVec te(target_->size(), 0);
            for (std::size_t v = 0; v < te.size(); ++v)
                te[v] = (v == t_) ? ex[tprime_] / e_ : ex[v];
            uint64_t coeff = has_dlog ? c : (c * static_cast<uint64_t>(e_)) % mod().q;
            if (coeff != 0)
                g.add_term(te, Scalar(coeff, mod()));
        }
        if (!g.is_zero())
            mid.add_component(m, g);
    }
    // unit stage
    return unit_twist(mid);
}

LaurentPoly FiniteCover::pullback(const LaurentPoly& f) const
{
    return substitute(f, t_, u_, e_, source_, tprime_);
}

LogForm FiniteCover::pullback(const LogForm& w) const
{
    require_same_roster(w.roster(), target_);
    // dlog t -> e dlog t' + dlog u
    LogForm theta(source_, mod(), 1);
    theta = LogForm::dlog(source_, mod(), tprime_).scaled(Scalar::from_int(e_, mod()));
    {
        LogForm du = d(LogForm::from_poly(u_));
        theta = theta + du.times(u_.invert_unit());
    }
    LogForm out(source_, mod(), w.degree());
    for (const auto& [m, f] : w.components()) {
        LogForm acc = LogForm::from_poly(pullback(f));
        for (std::size_t v = 0; v < target_->size(); ++v) {
            if (!(m & (Mask(1) << v)))
                continue;
            LogForm img = (v == t_) ? theta : LogForm::basis(source_, mod(), Mask(1) << v);
            acc = wedge(acc, img);
        }
        out = out + acc;
    }
    return out;
}

FiniteCover make_cover(const RosterPtr& source, const std::string& tprime_name,
                       const RosterPtr& target, const std::string& t_name, const LaurentPoly& u,
                       int e)
{
    auto si = source->index_of(tprime_name);
    auto ti = target->index_of(t_name);
    check(si.has_value(), errc::bad_cover, "source variable not found: " + tprime_name);
    check(ti.has_value(), errc::bad_cover, "target variable not found: " + t_name);
    return FiniteCover(source, *si, target, *ti, u, e);
}

LiftIndependenceReport check_lift_independence(const FiniteCover& f, const FiniteCover& g,
                                               int i, const DegreeWindow& src_window,
                                               const DegreeWindow& dst_window)
{
    check(f.e() == g.e(), errc::bad_argument, "covers have different ramification degrees");
    require_same_roster(f.source(), g.source());
    require_same_roster(f.target(), g.target());
    require_same_mod(f.mod(), g.mod());
    check(f.unit().reduced(1) == g.unit().reduced(1), errc::bad_argument,
          "lifts do not agree mod p");

    ComplexSpec src_spec = ComplexSpec::laurent_full(f.source(), f.mod());
    ComplexSpec dst_spec = ComplexSpec::laurent_full(f.target(), f.mod());
    WindowCohomology Hsrc(src_spec, i, src_window);
    WindowCohomology Hdst(dst_spec, i, dst_window);

    LiftIndependenceReport rep;

    // both pushforwards commute with d on every window basis element
    for (const auto& [mu, md] : Hsrc.all_mu()) {
        (void)md;
        LocalComplex lc(src_spec, mu);
        for (int j : {i - 1, i}) {
            for (Mask m : lc.basis(j)) {
                LogForm e = lc.basis_form(m);
                for (const FiniteCover* c : {&f, &g}) {
                    ++rep.cases;
                    if (!(c->pushforward(d(e)) == d(c->pushforward(e))))
                        rep.failures.push_back("pushforward does not commute with d at " +
                                               e.str());
                }
            }
        }
    }

    // induced maps agree on cohomology generators
    for (std::size_t k = 0; k < Hsrc.gens().size(); ++k) {
        LogForm w = Hsrc.gen_form(k);
        ++rep.cases;
        if (!Hdst.same_class(f.pushforward(w), g.pushforward(w)))
            rep.failures.push_back("induced maps differ on generator " + w.str());
    }
    return rep;
}

} // namespace drw
