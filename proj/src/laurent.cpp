#include "drwitt/laurent.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lexer.hpp"

namespace drw {

VarRoster::VarRoster(std::vector<Variable> vars) : vars_(std::move(vars))
{
    check(!vars_.empty(), errc::bad_argument, "roster needs at least one variable");
    std::set<std::string> seen;
    for (const auto& v : vars_) {
        check(!v.name.empty(), errc::bad_argument, "empty variable name");
        check(v.name != "w" && v.name != "d" && v.name != "dlog" && v.name != "vars",
              errc::bad_argument, "reserved word used as variable name: " + v.name);
        check(seen.insert(v.name).second, errc::bad_argument,
              "duplicate variable name: " + v.name);
    }
}

std::optional<std::size_t> VarRoster::index_of(std::string_view name) const
{
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name)
            return i;
    return std::nullopt;
}

std::vector<std::size_t> VarRoster::log_indices() const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (is_log(i))
            out.push_back(i);
    return out;
}

std::string VarRoster::header() const
{
    std::string s = "vars: ";
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        if (i)
            s += ", ";
        s += vars_[i].name;
        s += vars_[i].kind == VarKind::Log ? ":log" : ":plain";
    }
    return s;
}

bool operator==(const VarRoster& a, const VarRoster& b)
{
    if (a.vars_.size() != b.vars_.size())
        return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
        if (a.vars_[i].name != b.vars_[i].name || a.vars_[i].kind != b.vars_[i].kind)
            return false;
    return true;
}

RosterPtr make_roster(std::vector<Variable> vars)
{
    return std::make_shared<const VarRoster>(std::move(vars));
}

RosterPtr parse_roster(std::string_view header)
{
    std::string s(header);
    auto colon = s.find(':');
    if (s.rfind("vars", 0) == 0 && colon != std::string::npos)
        s = s.substr(colon + 1);
    std::vector<Variable> vars;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto c = item.find(':');
        check(c != std::string::npos, errc::parse_error, "expected name:kind in '" + item + "'");
        auto trim = [](std::string x) {
            std::size_t a = x.find_first_not_of(" \t");
            std::size_t b = x.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
        };
        std::string name = trim(item.substr(0, c));
        std::string kind = trim(item.substr(c + 1));
        if (kind == "log")
            vars.push_back({name, VarKind::Log});
        else if (kind == "plain")
            vars.push_back({name, VarKind::Plain});
        else
            fail(errc::parse_error, "unknown variable kind '" + kind + "'");
    }
    return make_roster(std::move(vars));
}

LaurentPoly::LaurentPoly(RosterPtr roster, Zmod mod) : roster_(std::move(roster)), mod_(mod)
{
    check(roster_ != nullptr, errc::bad_argument, "null roster");
}

LaurentPoly LaurentPoly::constant(RosterPtr roster, const Scalar& c)
{
    LaurentPoly f(std::move(roster), c.mod());
    if (!c.is_zero())
        f.terms_[ExpVec(f.roster_->size(), 0)] = c.value();
    return f;
}

LaurentPoly LaurentPoly::monomial(RosterPtr roster, Zmod mod, ExpVec e, uint64_t coeff)
{
    LaurentPoly f(std::move(roster), mod);
    check(e.size() == f.roster_->size(), errc::dimension_mismatch,
          "exponent vector length != roster size");
    for (std::size_t i = 0; i < e.size(); ++i)
        check(f.roster_->is_log(i) || e[i] >= 0, errc::bad_argument,
              "negative exponent of plain variable " + f.roster_->var(i).name);
    coeff %= mod.q;
    if (coeff != 0)
        f.terms_[std::move(e)] = coeff;
    return f;
}

LaurentPoly LaurentPoly::variable(RosterPtr roster, Zmod mod, std::size_t var)
{
    ExpVec e(roster->size(), 0);
    e[var] = 1;
    return monomial(std::move(roster), mod, std::move(e), 1);
}

Scalar LaurentPoly::coeff(const ExpVec& e) const
{
    auto it = terms_.find(e);
    return Scalar(it == terms_.end() ? 0 : it->second, mod_);
}

void LaurentPoly::set_coeff(const ExpVec& e, const Scalar& c)
{
    require_same_mod(mod_, c.mod());
    if (c.is_zero())
        terms_.erase(e);
    else
        terms_[e] = c.value();
}

void LaurentPoly::add_term(const ExpVec& e, const Scalar& c)
{
    require_same_mod(mod_, c.mod());
    for (std::size_t i = 0; i < e.size(); ++i)
        check(roster_->is_log(i) || e[i] >= 0, errc::bad_argument,
              "negative exponent of plain variable");
    auto it = terms_.find(e);
    uint64_t v = (it == terms_.end() ? 0 : it->second) + c.value();
    if (v >= mod_.q)
        v -= mod_.q;
    if (v == 0) {
        if (it != terms_.end())
            terms_.erase(it);
    } else if (it != terms_.end()) {
        it->second = v;
    } else {
        terms_[e] = v;
    }
}

bool LaurentPoly::is_constant() const
{
    if (terms_.empty())
        return true;
    return terms_.size() == 1 &&
           std::all_of(terms_.begin()->first.begin(), terms_.begin()->first.end(),
                       [](int32_t x) { return x == 0; });
}

Scalar LaurentPoly::constant_term() const
{
    return coeff(ExpVec(roster_->size(), 0));
}

void LaurentPoly::normalize()
{
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second %= mod_.q;
        if (it->second == 0)
            it = terms_.erase(it);
        else
            ++it;
    }
}

LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b)
{
    require_same_roster(a.roster_, b.roster_);
    require_same_mod(a.mod_, b.mod_);
    LaurentPoly r = a;
    for (const auto& [e, c] : b.terms_)
        r.add_term(e, Scalar(c, b.mod_));
    return r;
}

LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b)
{
    return a + (-b);
}

LaurentPoly LaurentPoly::operator-() const
{
    LaurentPoly r(roster_, mod_);
    for (const auto& [e, c] : terms_)
        r.terms_[e] = mod_.q - c;
    return r;
}

LaurentPoly LaurentPoly::scaled(const Scalar& c) const
{
    require_same_mod(mod_, c.mod());
    LaurentPoly r(roster_, mod_);
    if (c.is_zero())
        return r;
    for (const auto& [e, v] : terms_) {
        uint64_t w = mulmod(v, c.value(), mod_.q);
        if (w != 0)
            r.terms_[e] = w;
    }
    return r;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
{
    require_same_roster(a.roster_, b.roster_);
    require_same_mod(a.mod_, b.mod_);
    LaurentPoly r(a.roster_, a.mod_);
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            uint64_t c = mulmod(ca, cb, a.mod_.q);
            if (c == 0)
                continue;
            ExpVec e(ea.size());
            for (std::size_t i = 0; i < e.size(); ++i)
                e[i] = ea[i] + eb[i];
            r.add_term(e, Scalar(c, a.mod_));
        }
    }
    return r;
}

bool operator==(const LaurentPoly& a, const LaurentPoly& b)
{
    require_same_roster(a.roster_, b.roster_);
    require_same_mod(a.mod_, b.mod_);
    return a.terms_ == b.terms_;
}

LaurentPoly LaurentPoly::pow(uint32_t k) const
{
    LaurentPoly acc = constant(roster_, Scalar(1, mod_));
    LaurentPoly base = *this;
    while (k) {
        if (k & 1)
            acc = acc * base;
        base = base * base;
        k >>= 1;
    }
    return acc;
}

LaurentPoly LaurentPoly::invert_unit() const
{
    check(!is_zero(), errc::not_a_unit, "zero is not a unit");
    // locate the single term with unit coefficient
    const ExpVec* lead = nullptr;
    uint64_t lead_c = 0;
    for (const auto& [e, c] : terms_) {
        if (c % mod_.p != 0) {
            if (lead != nullptr)
                fail(errc::not_a_unit, "more than one term with unit coefficient");
            lead = &e;
            lead_c = c;
        }
    }
    if (lead == nullptr)
        fail(errc::not_a_unit, "all coefficients divisible by p");
    for (std::size_t i = 0; i < lead->size(); ++i)
        if (!roster_->is_log(i) && (*lead)[i] != 0)
            fail(errc::not_a_unit,
                 "unit monomial involves plain variable " + roster_->var(i).name);

    ExpVec neg = *lead;
    for (auto& x : neg)
        x = -x;
    LaurentPoly m = monomial(roster_, mod_, neg, Scalar(lead_c, mod_).inv().value());
    LaurentPoly w = m * (*this) - constant(roster_, Scalar(1, mod_));
    for (const auto& [e, c] : w.terms()) {
        (void)e;
        if (c % mod_.p != 0)
            fail(errc::not_a_unit, "non-monomial part with unit coefficient");
    }
    // sum_{j<N} (-w)^j by Horner
    LaurentPoly acc = constant(roster_, Scalar(1, mod_));
    for (uint32_t j = 1; j < mod_.prec; ++j)
        acc = constant(roster_, Scalar(1, mod_)) - w * acc;
    LaurentPoly inv = acc * m;
    if (inv * (*this) != constant(roster_, Scalar(1, mod_)))
        fail(errc::internal, "unit inversion failed to verify");
    return inv;
}

LaurentPoly LaurentPoly::frobenius_lift() const
{
    LaurentPoly r(roster_, mod_);
    for (const auto& [e, c] : terms_) {
        ExpVec pe(e.size());
        for (std::size_t i = 0; i < e.size(); ++i)
            pe[i] = e[i] * static_cast<int32_t>(mod_.p);
        r.terms_[pe] = c;
    }
    return r;
}

LaurentPoly LaurentPoly::reduced(uint32_t k) const
{
    check(k <= mod_.prec, errc::precision, "reduction target exceeds current precision");
    LaurentPoly r(roster_, mod_.with_prec(k));
    for (const auto& [e, c] : terms_) {
        uint64_t v = c % r.mod_.q;
        if (v != 0)
            r.terms_[e] = v;
    }
    return r;
}

LaurentPoly LaurentPoly::lifted(uint32_t k) const
{
    check(k >= mod_.prec, errc::precision, "lift target below current precision");
    LaurentPoly r(roster_, mod_.with_prec(k));
    for (const auto& [e, c] : terms_)
        r.terms_[e] = c;
    return r;
}

std::optional<std::pair<int32_t, int32_t>> LaurentPoly::exp_range(std::size_t var) const
{
    if (terms_.empty())
        return std::nullopt;
    int32_t lo = terms_.begin()->first[var], hi = lo;
    for (const auto& [e, c] : terms_) {
        (void)c;
        lo = std::min(lo, e[var]);
        hi = std::max(hi, e[var]);
    }
    return std::make_pair(lo, hi);
}

int32_t LaurentPoly::min_exp(std::size_t var) const
{
    auto r = exp_range(var);
    return r ? r->first : 0;
}

std::string LaurentPoly::str() const
{
    if (terms_.empty())
        return "0";
    std::string s;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first)
            s += " + ";
        first = false;
        s += std::to_string(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] != 0) {
                s += "*" + roster_->var(i).name + "^" + std::to_string(e[i]);
            }
        }
    }
    return s;
}

LaurentPoly substitute(const LaurentPoly& f, std::size_t src_var, const LaurentPoly& u, int e,
                       const RosterPtr& target, std::size_t dst_var)
{
    const RosterPtr& src = f.roster();
    check(src_var < src->size() && src->is_log(src_var), errc::bad_argument,
          "substitution variable must be a log variable");
    check(e >= 1, errc::bad_argument, "substitution exponent must be >= 1");
    check(src->size() == target->size(), errc::roster_mismatch,
          "source and target rosters differ in size");
    check(dst_var < target->size() && target->is_log(dst_var), errc::bad_argument,
          "target variable must be a log variable");
    for (std::size_t i = 0; i < src->size(); ++i) {
        if (i == src_var)
            continue;
        std::size_t j = i; // positional correspondence away from the swapped slot
        check(j != dst_var && src->var(i).name == target->var(j).name &&
                  src->var(i).kind == target->var(j).kind,
              errc::roster_mismatch, "carried variables must agree positionally");
    }
    require_same_roster(u.roster(), target);
    require_same_mod(u.mod(), f.mod());

    // group by the exponent of the substituted variable; powers of u cached
    std::map<int32_t, LaurentPoly> upow;
    LaurentPoly uinv = LaurentPoly::constant(target, Scalar(0, f.mod()));
    bool have_uinv = false;
    auto u_power = [&](int32_t k) -> const LaurentPoly& {
        auto it = upow.find(k);
        if (it != upow.end())
            return it->second;
        LaurentPoly r = LaurentPoly::constant(target, Scalar(1, f.mod()));
        if (k > 0) {
            r = u.pow(static_cast<uint32_t>(k));
        } else if (k < 0) {
            if (!have_uinv) {
                uinv = u.invert_unit();
                have_uinv = true;
            }
            r = uinv.pow(static_cast<uint32_t>(-k));
        }
        return upow.emplace(k, std::move(r)).first->second;
    };

    LaurentPoly out(target, f.mod());
    for (const auto& [ex, c] : f.terms()) {
        int32_t k = ex[src_var];
        ExpVec te(target->size(), 0);
        for (std::size_t i = 0; i < ex.size(); ++i) {
            if (i == src_var)
                continue;
            te[i] = ex[i];
        }
        te[dst_var] += k * e;
        LaurentPoly t = LaurentPoly::monomial(target, f.mod(), te, c);
        out = out + t * u_power(k);
    }
    return out;
}

namespace {

using detail::Lexer;
using detail::Tok;

// term := ['-'] coeff ('*' var '^' int)* | ['-'] var-product (leading coeff 1)
void parse_term(Lexer& lx, const RosterPtr& roster, Zmod mod, LaurentPoly& acc)
{
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
    bool expect_factor = !saw_any;
    while (true) {
        if (saw_any) {
            if (!lx.at(Tok::Star))
                break;
            lx.next();
        }
        if (!lx.at(Tok::Ident)) {
            if (expect_factor)
                fail(errc::parse_error, "expected variable near '" + lx.peek().text + "'");
            fail(errc::parse_error, "expected variable after '*'");
        }
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
        check(ex >= INT32_MIN && ex <= INT32_MAX, errc::parse_error, "exponent out of range");
        e[*idx] += static_cast<int32_t>(ex);
        check(roster->is_log(*idx) || e[*idx] >= 0, errc::parse_error,
              "negative exponent of plain variable " + name);
        saw_any = true;
        expect_factor = false;
    }
    Scalar c = Scalar::from_int(neg ? -coeff : coeff, mod);
    acc.add_term(e, c);
}

} // namespace

LaurentPoly parse_poly(const RosterPtr& roster, Zmod mod, std::string_view text)
{
    Lexer lx(text);
    LaurentPoly acc(roster, mod);
    if (lx.at(Tok::End))
        fail(errc::parse_error, "empty polynomial");
    parse_term(lx, roster, mod, acc);
    while (lx.at(Tok::Plus)) {
        lx.next();
        parse_term(lx, roster, mod, acc);
    }
    if (!lx.at(Tok::End))
        fail(errc::parse_error, "trailing input near '" + lx.peek().text + "'");
    return acc;
}

} // namespace drw
