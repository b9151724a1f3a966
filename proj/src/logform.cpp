#include "drwitt/logform.hpp"

#include <algorithm>

#include "lexer.hpp"

namespace drw {

PoleVector::PoleVector(RosterPtr roster, std::vector<int32_t> b)
    : roster_(std::move(roster)), b_(std::move(b))
{
    check(b_.size() == roster_->size(), errc::dimension_mismatch,
          "pole vector length != roster size");
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (roster_->is_log(i))
            check(b_[i] >= 0, errc::bad_argument, "pole orders must be nonnegative");
        else
            check(b_[i] == 0, errc::bad_argument, "pole order at a plain variable");
    }
}

PoleVector PoleVector::zero(RosterPtr roster)
{
    std::vector<int32_t> b(roster->size(), 0);
    return PoleVector(std::move(roster), std::move(b));
}

PoleVector PoleVector::plus(std::size_t var, int32_t delta) const
{
    std::vector<int32_t> b = b_;
    b[var] += delta;
    return PoleVector(roster_, std::move(b));
}

bool PoleVector::leq(const PoleVector& other) const
{
    for (std::size_t i = 0; i < b_.size(); ++i)
        if (b_[i] > other.b_[i])
            return false;
    return true;
}

std::string PoleVector::str() const
{
    std::string s = "(";
    bool first = true;
    for (std::size_t i = 0; i < b_.size(); ++i) {
        if (!roster_->is_log(i))
            continue;
        if (!first)
            s += ",";
        first = false;
        s += std::to_string(b_[i]);
    }
    return s + ")";
}

LogForm::LogForm(RosterPtr roster, Zmod mod, unsigned degree)
    : roster_(std::move(roster)), mod_(mod), degree_(degree)
{
    check(degree_ <= roster_->size(), errc::bad_argument, "degree exceeds variable count");
}

LogForm LogForm::from_poly(const LaurentPoly& f)
{
    LogForm w(f.roster(), f.mod(), 0);
    if (!f.is_zero())
        w.comps_.emplace(0u, f);
    return w;
}

LogForm LogForm::basis(RosterPtr roster, Zmod mod, Mask word)
{
    LogForm w(roster, mod, static_cast<unsigned>(mask_popcount(word)));
    w.comps_.emplace(word, LaurentPoly::constant(roster, Scalar(1, mod)));
    return w;
}

LogForm LogForm::dlog(RosterPtr roster, Zmod mod, std::size_t log_var)
{
    check(roster->is_log(log_var), errc::bad_argument, "dlog of a plain variable");
    return basis(std::move(roster), mod, Mask(1) << log_var);
}

LaurentPoly LogForm::component(Mask m) const
{
    auto it = comps_.find(m);
    if (it != comps_.end())
        return it->second;
    return LaurentPoly(roster_, mod_);
}

void LogForm::add_component(Mask m, const LaurentPoly& f)
{
    check(static_cast<unsigned>(mask_popcount(m)) == degree_, errc::bad_argument,
          "basis word size != form degree");
    require_same_roster(roster_, f.roster());
    require_same_mod(mod_, f.mod());
    auto it = comps_.find(m);
    if (it == comps_.end()) {
        if (!f.is_zero())
            comps_.emplace(m, f);
        return;
    }
    it->second = it->second + f;
    if (it->second.is_zero())
        comps_.erase(it);
}

LogForm operator+(const LogForm& a, const LogForm& b)
{
    require_same_roster(a.roster_, b.roster_);
    require_same_mod(a.mod_, b.mod_);
    check(a.degree_ == b.degree_ || a.is_zero() || b.is_zero(), errc::bad_argument,
          "adding forms of different degrees");
    LogForm r = a.is_zero() && !b.is_zero() ? LogForm(a.roster_, a.mod_, b.degree_) : a;
    for (const auto& [m, f] : b.comps_)
        r.add_component(m, f);
    return r;
}

LogForm operator-(const LogForm& a, const LogForm& b)
{
    return a + (-b);
}

LogForm LogForm::operator-() const
{
    LogForm r(roster_, mod_, degree_);
    for (const auto& [m, f] : comps_)
        r.comps_.emplace(m, -f);
    return r;
}

LogForm LogForm::scaled(const Scalar& c) const
{
    LogForm r(roster_, mod_, degree_);
    for (const auto& [m, f] : comps_) {
        LaurentPoly g = f.scaled(c);
        if (!g.is_zero())
            r.comps_.emplace(m, std::move(g));
    }
    return r;
}

LogForm LogForm::times(const LaurentPoly& g) const
{
    LogForm r(roster_, mod_, degree_);
    for (const auto& [m, f] : comps_) {
        LaurentPoly h = f * g;
        if (!h.is_zero())
            r.comps_.emplace(m, std::move(h));
    }
    return r;
}

bool operator==(const LogForm& a, const LogForm& b)
{
    require_same_roster(a.roster_, b.roster_);
    require_same_mod(a.mod_, b.mod_);
    if (a.is_zero() || b.is_zero())
        return a.is_zero() && b.is_zero();
    return a.degree_ == b.degree_ && a.comps_ == b.comps_;
}

LogForm LogForm::reduced(uint32_t k) const
{
    LogForm r(roster_, mod_.with_prec(k), degree_);
    for (const auto& [m, f] : comps_) {
        LaurentPoly g = f.reduced(k);
        if (!g.is_zero())
            r.comps_.emplace(m, std::move(g));
    }
    return r;
}

LogForm LogForm::lifted(uint32_t k) const
{
    LogForm r(roster_, mod_.with_prec(k), degree_);
    for (const auto& [m, f] : comps_)
        r.comps_.emplace(m, f.lifted(k));
    return r;
}

namespace {

/// Parity sign for merging two disjoint sorted basis words a then b.
int merge_sign(Mask a, Mask b)
{
    int inv = 0;
    for (int j = 0; j < 32; ++j) {
        if (!(b & (Mask(1) << j)))
            continue;
        // count elements of a strictly greater than j
        Mask higher = a & ~((Mask(2) << j) - 1);
        inv += mask_popcount(higher);
    }
    return inv % 2 == 0 ? 1 : -1;
}

/// Sign for inserting single index v in front of sorted word m.
int insert_sign(std::size_t v, Mask m)
{
    Mask lower = m & ((Mask(1) << v) - 1);
    return mask_popcount(lower) % 2 == 0 ? 1 : -1;
}

} // namespace

LogForm wedge(const LogForm& a, const LogForm& b)
{
    require_same_roster(a.roster(), b.roster());
    require_same_mod(a.mod(), b.mod());
    LogForm r(a.roster(), a.mod(), std::min<unsigned>(a.degree() + b.degree(),
                                                      static_cast<unsigned>(a.roster()->size())));
    if (a.degree() + b.degree() > a.roster()->size())
        return LogForm(a.roster(), a.mod(), static_cast<unsigned>(a.roster()->size()));
    for (const auto& [ma, fa] : a.components()) {
        for (const auto& [mb, fb] : b.components()) {
            if (ma & mb)
                continue;
            LaurentPoly f = fa * fb;
            if (f.is_zero())
                continue;
            if (merge_sign(ma, mb) < 0)
                f = -f;
            r.add_component(ma | mb, f);
        }
    }
    return r;
}

LogForm d(const LogForm& w)
{
    const RosterPtr& roster = w.roster();
    LogForm r(roster, w.mod(), std::min<unsigned>(w.degree() + 1,
                                                  static_cast<unsigned>(roster->size())));
    if (w.degree() + 1 > roster->size())
        return r;
    for (const auto& [m, f] : w.components()) {
        for (std::size_t v = 0; v < roster->size(); ++v) {
            if (m & (Mask(1) << v))
                continue;
            LaurentPoly g(roster, w.mod());
            if (roster->is_log(v)) {
                for (const auto& [e, c] : f.terms()) {
                    Scalar s = Scalar::from_int(e[v], w.mod()) * Scalar(c, w.mod());
                    if (!s.is_zero())
                        g.add_term(e, s);
                }
            } else {
                for (const auto& [e, c] : f.terms()) {
                    Scalar s = Scalar::from_int(e[v], w.mod()) * Scalar(c, w.mod());
                    if (s.is_zero())
                        continue;
                    ExpVec e2 = e;
                    e2[v] -= 1;
                    g.add_term(e2, s);
                }
            }
            if (g.is_zero())
                continue;
            if (insert_sign(v, m) < 0)
                g = -g;
            r.add_component(m | (Mask(1) << v), g);
        }
    }
    return r;
}

bool pole_membership(const LogForm& w, const PoleVector& b)
{
    require_same_roster(w.roster(), b.roster());
    const RosterPtr& roster = w.roster();
    for (const auto& [m, f] : w.components()) {
        (void)m;
        for (const auto& [e, c] : f.terms()) {
            (void)c;
            for (std::size_t v = 0; v < roster->size(); ++v)
                if (roster->is_log(v) && e[v] < -b.at(v))
                    return false;
        }
    }
    return true;
}

std::pair<bool, bool> lemma42_criterion(const LogForm& w, std::size_t t)
{
    const RosterPtr& roster = w.roster();
    check(t < roster->size() && roster->is_log(t), errc::bad_argument,
          "criterion variable must be a log variable");
    Mask tbit = Mask(1) << t;
    // precondition: w is a plain form with respect to t
    for (const auto& [m, f] : w.components()) {
        int32_t need = (m & tbit) ? 1 : 0;
        for (const auto& [e, c] : f.terms()) {
            (void)c;
            check(e[t] >= need, errc::bad_argument,
                  "form is not t-regular: lies outside Omega^i");
        }
    }
    // lhs: w in t * Omega^i(log t), i.e. every dlog-basis coefficient
    // divisible by t
    bool lhs = true;
    for (const auto& [m, f] : w.components()) {
        (void)m;
        if (f.min_exp(t) < 1) {
            lhs = false;
            break;
        }
    }
    // rhs: w ^ dlog t convertible to the dt basis with no negative exponent
    LogForm eta = wedge(w, LogForm::dlog(roster, w.mod(), t));
    bool rhs = true;
    for (const auto& [m, f] : eta.components()) {
        int32_t need = (m & tbit) ? 1 : 0; // dividing by t for f dlog t = (f/t) dt
        if (f.min_exp(t) < need) {
            rhs = false;
            break;
        }
    }
    return {lhs, rhs};
}

std::pair<LogForm, LogForm> split_top_variable(const LogForm& w, std::size_t t)
{
    const RosterPtr& roster = w.roster();
    check(t < roster->size() && roster->is_log(t), errc::bad_argument,
          "split variable must be a log variable");
    Mask tbit = Mask(1) << t;
    LogForm alpha(roster, w.mod(), w.degree());
    LogForm beta(roster, w.mod(), w.degree() == 0 ? 0 : w.degree() - 1);
    for (const auto& [m, f] : w.components()) {
        if (!(m & tbit)) {
            alpha.add_component(m, f);
            continue;
        }
        // move the dlog t factor past the later elements of the word
        Mask rest = m & ~tbit;
        Mask higher = rest & ~((Mask(2) << t) - 1);
        int sgn = mask_popcount(higher) % 2 == 0 ? 1 : -1;
        beta.add_component(rest, sgn < 0 ? -f : f);
    }
    return {alpha, beta};
}

ExpVec term_multidegree(const RosterPtr& roster, Mask word, const ExpVec& mono)
{
    ExpVec mu = mono;
    for (std::size_t v = 0; v < roster->size(); ++v)
        if ((word & (Mask(1) << v)) && !roster->is_log(v))
            mu[v] += 1;
    return mu;
}

std::map<ExpVec, LogForm> split_by_multidegree(const LogForm& w)
{
    std::map<ExpVec, LogForm> out;
    for (const auto& [m, f] : w.components()) {
        for (const auto& [e, c] : f.terms()) {
            ExpVec mu = term_multidegree(w.roster(), m, e);
            auto it = out.find(mu);
            if (it == out.end())
                it = out.emplace(mu, LogForm(w.roster(), w.mod(), w.degree())).first;
            LaurentPoly t = LaurentPoly::monomial(w.roster(), w.mod(), e, c);
            it->second.add_component(m, t);
        }
    }
    return out;
}

std::string LogForm::str() const
{
    if (comps_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [m, f] : comps_) {
        std::string word;
        for (std::size_t v = 0; v < roster_->size(); ++v) {
            if (!(m & (Mask(1) << v)))
                continue;
            if (!word.empty())
                word += " w ";
            word += (roster_->is_log(v) ? "dlog(" : "d(") + roster_->var(v).name + ")";
        }
        // one printed term per coefficient monomial keeps the grammar flat
        for (const auto& [e, c] : f.terms()) {
            if (!first)
                s += " + ";
            first = false;
            LaurentPoly t = LaurentPoly::monomial(roster_, mod_, e, c);
            if (word.empty())
                s += t.str();
            else
                s += t.str() + " * " + word;
        }
    }
    return s;
}

namespace {

using detail::Lexer;
using detail::Tok;

bool at_basis_start(Lexer& lx)
{
    return lx.at(Tok::Ident) && (lx.peek().text == "dlog" || lx.peek().text == "d");
}

std::pair<Mask, int> parse_basis_word(Lexer& lx, const RosterPtr& roster)
{
    // returns (mask, sign) with sign the parity of sorting the written word
    std::vector<std::size_t> order;
    Mask m = 0;
    while (true) {
        std::string head = lx.expect(Tok::Ident, "basis element").text;
        bool want_log = head == "dlog";
        if (!want_log && head != "d")
            fail(errc::parse_error, "expected dlog(...) or d(...), got '" + head + "'");
        lx.expect(Tok::LParen, "(");
        std::string name = lx.expect(Tok::Ident, "variable").text;
        lx.expect(Tok::RParen, ")");
        auto idx = roster->index_of(name);
        if (!idx)
            fail(errc::parse_error, "unknown variable '" + name + "'");
        if (want_log != roster->is_log(*idx))
            fail(errc::parse_error, (want_log ? "dlog of plain variable '" : "d of log variable '") + name + "'");
        if (m & (Mask(1) << *idx))
            fail(errc::parse_error, "repeated variable '" + name + "' in basis word");
        order.push_back(*idx);
        m |= Mask(1) << *idx;
        if (lx.at(Tok::Wedge) || (lx.at(Tok::Ident) && lx.peek().text == "w")) {
            lx.next();
            continue;
        }
        break;
    }
    // parity of the permutation sorting `order`
    int inv = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (std::size_t j = i + 1; j < order.size(); ++j)
            if (order[i] > order[j])
                ++inv;
    return {m, inv % 2 == 0 ? 1 : -1};
}

// poly-term as in the laurent grammar, stopping before '* dlog(' / '* d('
LaurentPoly parse_poly_term(Lexer& lx, const RosterPtr& roster, Zmod mod, bool& saw_star_basis)
{
    saw_star_basis = false;
    bool neg = false;
    while (lx.at(Tok::Minus)) {
        lx.next();
        neg = !neg;
    }
    long long coeff = 1;
    bool saw_any = false;
    if (lx.at(Tok::Int)) {
        coeff = lx.next().value;
        saw_any = true;
    }
    ExpVec e(roster->size(), 0);
    while (true) {
        if (saw_any) {
            if (!lx.at(Tok::Star))
                break;
            lx.next();
            if (at_basis_start(lx)) {
                saw_star_basis = true;
                break;
            }
        } else if (at_basis_start(lx)) {
            break;
        }
        if (!lx.at(Tok::Ident))
            fail(errc::parse_error, "expected variable near '" + lx.peek().text + "'");
        std::string name = lx.next().text;
        auto idx = roster->index_of(name);
        if (!idx)
            fail(errc::parse_error, "unknown variable '" + name + "'");
        long long ex = 1;
        if (lx.at(Tok::Caret)) {
            lx.next();
            bool eneg = false;
            while (lx.at(Tok::Minus)) {
                lx.next();
                eneg = !eneg;
            }
            ex = lx.expect(Tok::Int, "exponent").value;
            if (eneg)
                ex = -ex;
        }
        e[*idx] += static_cast<int32_t>(ex);
        check(roster->is_log(*idx) || e[*idx] >= 0, errc::parse_error,
              "negative exponent of plain variable " + name);
        saw_any = true;
    }
    LaurentPoly f(roster, mod);
    f.add_term(e, Scalar::from_int(neg ? -coeff : coeff, mod));
    return f;
}

} // namespace

LogForm parse_form(const RosterPtr& roster, Zmod mod, std::string_view text)
{
    Lexer lx(text);
    if (lx.at(Tok::End))
        fail(errc::parse_error, "empty form");
    LogForm acc(roster, mod, 0);
    bool have_degree = false;
    auto add_piece = [&](Mask m, const LaurentPoly& f) {
        unsigned deg = static_cast<unsigned>(mask_popcount(m));
        if (!have_degree) {
            acc = LogForm(roster, mod, deg);
            have_degree = true;
        } else {
            check(deg == acc.degree() || f.is_zero(), errc::parse_error,
                  "mixed degrees in one form");
        }
        if (!f.is_zero())
            acc.add_component(m, f);
    };
    while (true) {
        LaurentPoly f(roster, mod);
        Mask m = 0;
        if (at_basis_start(lx)) {
            auto [mask, sign] = parse_basis_word(lx, roster);
            m = mask;
            f = LaurentPoly::constant(roster, Scalar::from_int(sign, mod));
        } else {
            bool star_basis = false;
            f = parse_poly_term(lx, roster, mod, star_basis);
            if (star_basis || at_basis_start(lx)) {
                auto [mask, sign] = parse_basis_word(lx, roster);
                m = mask;
                if (sign < 0)
                    f = -f;
            }
        }
        add_piece(m, f);
        if (lx.at(Tok::Plus)) {
            lx.next();
            continue;
        }
        break;
    }
    if (!lx.at(Tok::End))
        fail(errc::parse_error, "trailing input near '" + lx.peek().text + "'");
    return acc;
}

} // namespace drw
