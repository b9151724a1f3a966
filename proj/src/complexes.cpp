#include "drwitt/complexes.hpp"

#include <algorithm>

namespace drw {

namespace {

uint64_t logp_of_canonical(const ModMatrix& m)
{
    uint64_t s = 0;
    for (std::size_t i = 0; i < m.rows; ++i) {
        for (std::size_t j = 0; j < m.cols; ++j) {
            if (m.at(i, j) != 0) {
                s += m.mod.prec - Scalar(m.at(i, j), m.mod).valuation();
                break;
            }
        }
    }
    return s;
}

} // namespace

ComplexSpec ComplexSpec::twisted(RosterPtr roster, Zmod mod, const PoleVector& b)
{
    ComplexSpec s;
    s.roster = roster;
    s.mod = mod;
    s.cons.resize(roster->size());
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v))
            s.cons[v] = {VarConstraint::Kind::LogBounded, b.at(v)};
        else
            s.cons[v] = {VarConstraint::Kind::Plain, 0};
    }
    s.excluded.assign(roster->size(), false);
    return s;
}

ComplexSpec ComplexSpec::laurent_full(RosterPtr roster, Zmod mod)
{
    ComplexSpec s;
    s.roster = roster;
    s.mod = mod;
    s.cons.resize(roster->size());
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v))
            s.cons[v] = {VarConstraint::Kind::LogLaurent, 0};
        else
            s.cons[v] = {VarConstraint::Kind::Plain, 0};
    }
    s.excluded.assign(roster->size(), false);
    return s;
}

ComplexSpec ComplexSpec::plain_regular(RosterPtr roster, Zmod mod)
{
    ComplexSpec s;
    s.roster = roster;
    s.mod = mod;
    s.cons.resize(roster->size());
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v))
            s.cons[v] = {VarConstraint::Kind::LogDtRegular, 0};
        else
            s.cons[v] = {VarConstraint::Kind::Plain, 0};
    }
    s.excluded.assign(roster->size(), false);
    return s;
}

ComplexSpec ComplexSpec::quotient_by(const PoleVector& bsub) const
{
    ComplexSpec s = *this;
    std::vector<VarConstraint> q(roster->size());
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v)) {
            check(cons[v].kind == VarConstraint::Kind::LogBounded, errc::unsupported_spec,
                  "quotient of a non-twisted complex");
            check(bsub.at(v) <= cons[v].b, errc::bad_argument,
                  "quotient denominator exceeds numerator pole");
            q[v] = {VarConstraint::Kind::LogBounded, bsub.at(v)};
        } else {
            q[v] = {VarConstraint::Kind::Plain, 0};
        }
    }
    s.quotient_cons = std::move(q);
    return s;
}

ComplexSpec ComplexSpec::with_precision(uint32_t n) const
{
    ComplexSpec s = *this;
    s.mod = Zmod(mod.p, n);
    return s;
}

ComplexSpec ComplexSpec::excluding(std::size_t var) const
{
    ComplexSpec s = *this;
    s.excluded[var] = true;
    return s;
}

ComplexSpec ComplexSpec::shifted(int by) const
{
    ComplexSpec s = *this;
    s.degree_shift += by;
    return s;
}

namespace {

bool exp_ok(const RosterPtr& roster, const std::vector<VarConstraint>& cons,
            const std::vector<bool>& excluded, Mask word, const ExpVec& mono)
{
    for (std::size_t v = 0; v < roster->size(); ++v) {
        bool in_word = (word & (Mask(1) << v)) != 0;
        if (excluded[v] && (in_word || mono[v] != 0))
            return false;
        const VarConstraint& c = cons[v];
        switch (c.kind) {
        case VarConstraint::Kind::Plain:
            if (mono[v] < 0)
                return false;
            break;
        case VarConstraint::Kind::LogBounded:
            if (mono[v] < -c.b)
                return false;
            break;
        case VarConstraint::Kind::LogLaurent:
            break;
        case VarConstraint::Kind::LogDtRegular:
            if (mono[v] < (in_word ? 1 : 0))
                return false;
            break;
        }
    }
    return true;
}

} // namespace

bool ComplexSpec::in_main(Mask word, const ExpVec& mono) const
{
    return exp_ok(roster, cons, excluded, word, mono);
}

bool ComplexSpec::in_sub(Mask word, const ExpVec& mono) const
{
    if (!quotient_cons)
        return false;
    return exp_ok(roster, *quotient_cons, excluded, word, mono);
}

LogForm ComplexSpec::project(const LogForm& w) const
{
    require_same_roster(roster, w.roster());
    require_same_mod(mod, w.mod());
    LogForm out(roster, mod, w.degree());
    for (const auto& [m, f] : w.components()) {
        for (const auto& [e, c] : f.terms()) {
            check(in_main(m, e), errc::bad_argument,
                  "form term outside the complex: " +
                      LaurentPoly::monomial(roster, mod, e, c).str());
            if (in_sub(m, e))
                continue;
            out.add_component(m, LaurentPoly::monomial(roster, mod, e, c));
        }
    }
    return out;
}

LogForm ComplexSpec::d_in(const LogForm& w) const
{
    return project(d(w));
}

std::string ComplexSpec::str() const
{
    std::string s = "complex[";
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (v)
            s += ",";
        if (excluded[v]) {
            s += "x";
            continue;
        }
        switch (cons[v].kind) {
        case VarConstraint::Kind::Plain: s += "plain"; break;
        case VarConstraint::Kind::LogBounded: s += "b=" + std::to_string(cons[v].b); break;
        case VarConstraint::Kind::LogLaurent: s += "laurent"; break;
        case VarConstraint::Kind::LogDtRegular: s += "dt"; break;
        }
    }
    s += "]/p^" + std::to_string(mod.prec);
    if (quotient_cons)
        s += " quotient";
    return s;
}

DegreeWindow DegreeWindow::uniform(const RosterPtr& roster, int32_t lo, int32_t hi)
{
    check(lo <= hi, errc::bad_argument, "window lo > hi");
    DegreeWindow w;
    for (std::size_t v = 0; v < roster->size(); ++v) {
        int32_t l = roster->is_log(v) ? lo : std::max<int32_t>(lo, 0);
        w.bounds.emplace_back(l, hi);
    }
    return w;
}

DegreeWindow DegreeWindow::per_var(std::vector<std::pair<int32_t, int32_t>> b)
{
    for (auto& [lo, hi] : b)
        check(lo <= hi, errc::bad_argument, "window lo > hi");
    DegreeWindow w;
    w.bounds = std::move(b);
    return w;
}

bool DegreeWindow::contains(const ExpVec& mu) const
{
    check(mu.size() == bounds.size(), errc::dimension_mismatch, "multidegree length");
    for (std::size_t v = 0; v < bounds.size(); ++v)
        if (mu[v] < bounds[v].first || mu[v] > bounds[v].second)
            return false;
    return true;
}

uint64_t DegreeWindow::count() const
{
    uint64_t n = 1;
    for (const auto& [lo, hi] : bounds) {
        uint64_t span = static_cast<uint64_t>(hi - lo + 1);
        check(n <= UINT64_MAX / span, errc::resource_limit, "window too large");
        n *= span;
    }
    return n;
}

void DegreeWindow::for_each(const std::function<void(const ExpVec&)>& fn) const
{
    ExpVec mu(bounds.size());
    for (std::size_t v = 0; v < bounds.size(); ++v)
        mu[v] = bounds[v].first;
    while (true) {
        fn(mu);
        std::size_t v = bounds.size();
        while (v > 0) {
            --v;
            if (mu[v] < bounds[v].second) {
                ++mu[v];
                for (std::size_t u = v + 1; u < bounds.size(); ++u)
                    mu[u] = bounds[u].first;
                break;
            }
            if (v == 0)
                return;
        }
    }
}

DegreeWindow DegreeWindow::scaled(int32_t factor) const
{
    DegreeWindow w = *this;
    for (auto& [lo, hi] : w.bounds) {
        lo *= factor;
        hi *= factor;
        if (lo > hi)
            std::swap(lo, hi);
    }
    return w;
}

std::string DegreeWindow::str() const
{
    std::string s;
    for (std::size_t v = 0; v < bounds.size(); ++v) {
        if (v)
            s += ",";
        s += std::to_string(bounds[v].first) + ":" + std::to_string(bounds[v].second);
    }
    return s;
}

LocalComplex::LocalComplex(const ComplexSpec& spec, ExpVec mu) : spec_(spec), mu_(std::move(mu))
{
    check(mu_.size() == spec_.roster->size(), errc::dimension_mismatch, "multidegree length");
}

ExpVec LocalComplex::mono_of(Mask word) const
{
    ExpVec m = mu_;
    for (std::size_t v = 0; v < spec_.roster->size(); ++v)
        if ((word & (Mask(1) << v)) && !spec_.roster->is_log(v))
            m[v] -= 1;
    return m;
}

std::vector<Mask> LocalComplex::basis(int complex_degree) const
{
    int fdeg = spec_.form_degree(complex_degree);
    std::vector<Mask> out;
    if (fdeg < 0 || fdeg > static_cast<int>(spec_.roster->size()))
        return out;
    Mask all = (spec_.roster->size() >= 32) ? ~Mask(0)
                                            : ((Mask(1) << spec_.roster->size()) - 1);
    for (Mask m = 0; m <= all; ++m) {
        if (mask_popcount(m) != fdeg)
            continue;
        if (spec_.member(m, mono_of(m)))
            out.push_back(m);
        if (m == all)
            break;
    }
    return out;
}

ModMatrix LocalComplex::d_matrix(int complex_degree) const
{
    std::vector<Mask> src = basis(complex_degree);
    std::vector<Mask> dst = basis(complex_degree + 1);
    std::map<Mask, std::size_t> dst_index;
    for (std::size_t i = 0; i < dst.size(); ++i)
        dst_index[dst[i]] = i;

    ModMatrix D(spec_.mod, src.size(), dst.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        Mask S = src[i];
        ExpVec m = mono_of(S);
        for (std::size_t v = 0; v < spec_.roster->size(); ++v) {
            if (S & (Mask(1) << v))
                continue;
            Scalar c = Scalar::from_int(m[v], spec_.mod);
            if (c.is_zero())
                continue;
            Mask T = S | (Mask(1) << v);
            auto it = dst_index.find(T);
            if (it == dst_index.end())
                continue; // outside the complex (quotient or constraint)
            Mask lower = S & ((Mask(1) << v) - 1);
            if (mask_popcount(lower) % 2 != 0)
                c = -c;
            D.at(i, it->second) = c.value();
        }
    }
    return D;
}

LogForm LocalComplex::basis_form(Mask word) const
{
    LogForm w(spec_.roster, spec_.mod, static_cast<unsigned>(mask_popcount(word)));
    w.add_component(word, LaurentPoly::monomial(spec_.roster, spec_.mod, mono_of(word), 1));
    return w;
}

WindowCohomology::WindowCohomology(ComplexSpec spec, int complex_degree, DegreeWindow window,
                                   uint64_t cell_cap)
    : spec_(std::move(spec)), cdeg_(complex_degree), window_(std::move(window))
{
    check(window_.size() == spec_.roster->size(), errc::dimension_mismatch,
          "window arity != roster size");
    uint64_t cells = window_.count() * (uint64_t(1) << spec_.roster->size());
    check(cells <= cell_cap, errc::resource_limit,
          "window requires " + std::to_string(cells) + " cells (cap " +
              std::to_string(cell_cap) + ")");

    window_.for_each([&](const ExpVec& mu) {
        LocalComplex lc(spec_, mu);
        std::vector<Mask> basis = lc.basis(cdeg_);
        if (basis.empty())
            return;
        ModMatrix D = lc.d_matrix(cdeg_);
        ModMatrix Dm1 = lc.d_matrix(cdeg_ - 1);

        MuData md{std::move(basis),
                  HowellSystem(D).kernel(),
                  howell_form(Dm1),
                  HowellSystem(spec_.mod, 0),
                  {},
                  HowellSystem(spec_.mod, 0),
                  0,
                  0};
        md.ker_logp = logp_of_canonical(md.ker);
        md.im_logp = logp_of_canonical(md.im);
        md.im_sys = HowellSystem(md.im);

        // deterministic generating set of ker/im: Howell rows of the kernel
        // not already inside the growing span of [im, accepted gens]
        ModMatrix grow = md.im;
        for (std::size_t i = 0; i < md.ker.rows; ++i) {
            std::vector<uint64_t> r = md.ker.row(i);
            if (!HowellSystem(grow, false).contains(r)) {
                md.gen_rows.push_back(r);
                grow.push_row(r);
            }
        }
        ModMatrix stacked(spec_.mod, 0, md.basis.size());
        for (const auto& r : md.gen_rows)
            stacked.push_row(r);
        for (std::size_t i = 0; i < md.im.rows; ++i)
            stacked.push_row(md.im.row(i));
        md.rep_sys = HowellSystem(stacked);

        auto [it, ok] = data_.emplace(mu, std::move(md));
        (void)ok;
        for (std::size_t g = 0; g < it->second.gen_rows.size(); ++g)
            gens_.push_back({mu, g});
    });
}

LogForm WindowCohomology::gen_form(std::size_t k) const
{
    check(k < gens_.size(), errc::bad_argument, "generator index out of range");
    const GenRef& g = gens_[k];
    const MuData& md = data_.at(g.mu);
    LocalComplex lc(spec_, g.mu);
    LogForm w(spec_.roster, spec_.mod,
              static_cast<unsigned>(std::max(0, spec_.form_degree(cdeg_))));
    const auto& row = md.gen_rows[g.local_index];
    for (std::size_t i = 0; i < md.basis.size(); ++i) {
        if (row[i] == 0)
            continue;
        w.add_component(md.basis[i],
                        LaurentPoly::monomial(spec_.roster, spec_.mod, lc.mono_of(md.basis[i]),
                                              row[i]));
    }
    return w;
}

uint64_t WindowCohomology::order_logp() const
{
    uint64_t s = 0;
    for (const auto& [mu, md] : data_) {
        (void)mu;
        s += md.ker_logp - md.im_logp;
    }
    return s;
}

uint64_t WindowCohomology::h_logp(const ExpVec& mu) const
{
    auto it = data_.find(mu);
    if (it == data_.end())
        return 0;
    return it->second.ker_logp - it->second.im_logp;
}

const WindowCohomology::MuData* WindowCohomology::mu_data(const ExpVec& mu) const
{
    auto it = data_.find(mu);
    return it == data_.end() ? nullptr : &it->second;
}

bool WindowCohomology::is_in_complex(const LogForm& w) const
{
    for (const auto& [m, f] : w.components())
        for (const auto& [e, c] : f.terms()) {
            (void)c;
            if (!spec_.in_main(m, e))
                return false;
        }
    return true;
}

std::map<ExpVec, std::vector<uint64_t>> WindowCohomology::form_rows(const LogForm& w) const
{
    LogForm v = spec_.project(w);
    std::map<ExpVec, std::vector<uint64_t>> out;
    for (const auto& [m, f] : v.components()) {
        for (const auto& [e, c] : f.terms()) {
            ExpVec mu = term_multidegree(spec_.roster, m, e);
            check(window_.contains(mu), errc::resource_limit,
                  "form leaves the window at multidegree " +
                      LaurentPoly::monomial(spec_.roster, spec_.mod, mu, 1).str());
            const MuData* md = mu_data(mu);
            check(md != nullptr, errc::internal, "nonzero term at empty multidegree");
            auto itb = std::find(md->basis.begin(), md->basis.end(), m);
            check(itb != md->basis.end(), errc::internal, "term outside local basis");
            auto [it, fresh] = out.emplace(mu, std::vector<uint64_t>(md->basis.size(), 0));
            (void)fresh;
            std::size_t idx = static_cast<std::size_t>(itb - md->basis.begin());
            it->second[idx] = (it->second[idx] + c) % spec_.mod.q;
        }
    }
    return out;
}

bool WindowCohomology::is_closed(const LogForm& w) const
{
    return spec_.d_in(w).is_zero();
}

bool WindowCohomology::is_exact(const LogForm& w) const
{
    auto rows = form_rows(w);
    for (const auto& [mu, row] : rows) {
        const MuData* md = mu_data(mu);
        if (!md->im_sys.contains(row))
            return false;
    }
    return true;
}

bool WindowCohomology::same_class(const LogForm& a, const LogForm& b) const
{
    return is_exact(spec_.project(a) - spec_.project(b));
}

std::optional<std::vector<Scalar>> WindowCohomology::class_coords(const LogForm& w) const
{
    check(is_closed(w), errc::not_closed, "representative is not closed");
    auto rows = form_rows(w);
    std::vector<Scalar> out(gens_.size(), Scalar(0, spec_.mod));
    std::map<ExpVec, std::size_t> base_index; // first global index per mu
    for (std::size_t k = 0; k < gens_.size(); ++k)
        if (!base_index.count(gens_[k].mu))
            base_index[gens_[k].mu] = k;
    for (const auto& [mu, row] : rows) {
        const MuData* md = mu_data(mu);
        auto sol = md->rep_sys.solve(row);
        if (!sol)
            return std::nullopt;
        for (std::size_t g = 0; g < md->gen_rows.size(); ++g) {
            if ((*sol)[g] == 0)
                continue;
            out[base_index.at(mu) + g] = Scalar((*sol)[g], spec_.mod);
        }
    }
    return out;
}

CohClass::CohClass(ComplexSpec s, int deg, LogForm r)
    : spec(std::move(s)), degree(deg), rep(spec.project(r))
{
    check(spec.d_in(rep).is_zero(), errc::not_closed, "representative is not closed");
}

SubImage::SubImage(ComplexSpec sub, const WindowCohomology& ambient)
    : sub_(std::move(sub)), ambient_(&ambient)
{
    require_same_roster(sub_.roster, ambient.spec().roster);
    require_same_mod(sub_.mod, ambient.spec().mod);
    check(!sub_.is_quotient() && !ambient.spec().is_quotient(), errc::unsupported_spec,
          "sub-image needs plain complexes");
    int cdeg = ambient.complex_degree();
    for (const auto& [mu, md] : ambient.all_mu()) {
        LocalComplex lsub(sub_, mu);
        std::vector<Mask> bsub = lsub.basis(cdeg);
        ModMatrix Dsub = lsub.d_matrix(cdeg);
        ModMatrix ksub = HowellSystem(Dsub).kernel();
        // embed sub kernel rows into ambient coordinates
        ModMatrix stack(sub_.mod, 0, md.basis.size());
        std::vector<LogForm> kforms;
        for (std::size_t i = 0; i < ksub.rows; ++i) {
            std::vector<uint64_t> row(md.basis.size(), 0);
            LogForm kf(sub_.roster, sub_.mod,
                       static_cast<unsigned>(std::max(0, sub_.form_degree(cdeg))));
            for (std::size_t j = 0; j < bsub.size(); ++j) {
                auto it = std::find(md.basis.begin(), md.basis.end(), bsub[j]);
                check(it != md.basis.end(), errc::internal,
                      "subcomplex basis not inside ambient basis");
                row[static_cast<std::size_t>(it - md.basis.begin())] = ksub.at(i, j);
                if (ksub.at(i, j) != 0)
                    kf.add_component(bsub[j],
                                     LaurentPoly::monomial(sub_.roster, sub_.mod,
                                                           lsub.mono_of(bsub[j]),
                                                           ksub.at(i, j)));
            }
            stack.push_row(row);
            kforms.push_back(std::move(kf));
        }
        for (std::size_t i = 0; i < md.im.rows; ++i)
            stack.push_row(md.im.row(i));
        sys_.emplace(mu, HowellSystem(stack));
        ker_forms_.emplace(mu, std::move(kforms));
    }
}

std::optional<LogForm> SubImage::representative(const LogForm& rep) const
{
    auto rows = ambient_->form_rows(rep);
    LogForm out(sub_.roster, sub_.mod,
                static_cast<unsigned>(std::max(0, sub_.form_degree(ambient_->complex_degree()))));
    for (const auto& [mu, row] : rows) {
        auto it = sys_.find(mu);
        if (it == sys_.end())
            return std::nullopt;
        auto sol = it->second.solve(row);
        if (!sol)
            return std::nullopt;
        const auto& kf = ker_forms_.at(mu);
        for (std::size_t k = 0; k < kf.size(); ++k)
            if ((*sol)[k] != 0)
                out = out + kf[k].scaled(Scalar((*sol)[k], sub_.mod));
    }
    return out;
}

bool SubImage::contains_class(const LogForm& rep) const
{
    auto rows = ambient_->form_rows(rep);
    for (const auto& [mu, row] : rows) {
        auto it = sys_.find(mu);
        if (it == sys_.end())
            return false;
        if (!it->second.contains(row))
            return false;
    }
    return true;
}

bool SubImage::same_span(const SubImage& other) const
{
    auto ita = sys_.begin();
    auto itb = other.sys_.begin();
    while (ita != sys_.end() && itb != other.sys_.end()) {
        if (ita->first != itb->first)
            return false;
        if (!(ita->second.canonical() == itb->second.canonical()))
            return false;
        ++ita;
        ++itb;
    }
    return ita == sys_.end() && itb == other.sys_.end();
}

uint64_t SubImage::span_logp() const
{
    uint64_t s = 0;
    for (const auto& [mu, sys] : sys_) {
        (void)mu;
        s += sys.span_logp();
    }
    return s;
}

InducedMap induced_map(const WindowCohomology& src, const WindowCohomology& dst,
                       ChainMapKind kind, const std::function<LogForm(const LogForm&)>& phi,
                       bool check_chain)
{
    std::function<LogForm(const LogForm&)> f;
    switch (kind) {
    case ChainMapKind::Inclusion:
    case ChainMapKind::Quotient:
        f = [&dst](const LogForm& w) { return dst.spec().project(w); };
        break;
    case ChainMapKind::Custom:
        check(static_cast<bool>(phi), errc::bad_argument, "custom chain map missing");
        f = [&dst, &phi](const LogForm& w) { return dst.spec().project(phi(w)); };
        break;
    }

    InducedMap out;
    int cdeg = src.complex_degree();
    check(cdeg == dst.complex_degree(), errc::invalid_map, "degree mismatch");

    if (check_chain) {
        // verify d-commutation on every window basis element at degrees
        // cdeg-1 and cdeg
        for (const auto& [mu, md] : src.all_mu()) {
            (void)md;
            LocalComplex lc(src.spec(), mu);
            for (int j : {cdeg - 1, cdeg}) {
                for (Mask m : lc.basis(j)) {
                    LogForm e = lc.basis_form(m);
                    LogForm lhs = f(src.spec().d_in(e));
                    LogForm rhs = dst.spec().d_in(f(e));
                    if (!(lhs == rhs)) {
                        out.chain_ok = false;
                        out.detail = "chain map fails to commute with d at " + e.str();
                        return out;
                    }
                }
            }
        }
    }

    // induced matrix on generators
    for (std::size_t k = 0; k < src.gens().size(); ++k) {
        LogForm w = f(src.gen_form(k));
        auto coords = dst.class_coords(w);
        if (!coords)
            fail(errc::invalid_map, "image class escapes the target window span");
        out.matrix.push_back(std::move(*coords));
    }

    // injectivity and surjectivity per multidegree via span cardinalities
    out.injective = true;
    out.surjective = true;
    std::vector<ExpVec> mus;
    for (const auto& [mu, md] : src.all_mu()) {
        (void)md;
        mus.push_back(mu);
    }
    for (const auto& [mu, md] : dst.all_mu()) {
        (void)md;
        if (std::find(mus.begin(), mus.end(), mu) == mus.end())
            mus.push_back(mu);
    }
    for (const ExpVec& mu : mus) {
        const auto* smd = src.mu_data(mu);
        const auto* dmd = dst.mu_data(mu);
        uint64_t hsrc = smd ? smd->ker_logp - smd->im_logp : 0;
        uint64_t hdst = dmd ? dmd->ker_logp - dmd->im_logp : 0;
        uint64_t dst_im_logp = dmd ? dmd->im_logp : 0;
        std::size_t cols = dmd ? dmd->basis.size() : 0;
        ModMatrix stack(src.spec().mod, 0, cols);
        if (dmd)
            for (std::size_t i = 0; i < dmd->im.rows; ++i)
                stack.push_row(dmd->im.row(i));
        if (smd) {
            LocalComplex lc(src.spec(), mu);
            for (std::size_t i = 0; i < smd->ker.rows; ++i) {
                // kernel row -> form -> phi -> dst coordinates
                LogForm w(src.spec().roster, src.spec().mod,
                          static_cast<unsigned>(std::max(0, src.spec().form_degree(cdeg))));
                for (std::size_t j = 0; j < smd->basis.size(); ++j) {
                    if (smd->ker.at(i, j) == 0)
                        continue;
                    w.add_component(smd->basis[j],
                                    LaurentPoly::monomial(src.spec().roster, src.spec().mod,
                                                          lc.mono_of(smd->basis[j]),
                                                          smd->ker.at(i, j)));
                }
                LogForm fw = f(w);
                auto rows = dst.form_rows(fw);
                for (const auto& [m2, row] : rows) {
                    if (m2 != mu) {
                        out.injective = false;
                        out.surjective = false;
                        out.detail = "map does not preserve multidegree";
                        return out;
                    }
                }
                auto it = rows.find(mu);
                if (it != rows.end())
                    stack.push_row(it->second);
                else if (cols > 0)
                    stack.push_row(std::vector<uint64_t>(cols, 0));
            }
        }
        uint64_t span = cols > 0 ? HowellSystem(stack, false).span_logp() : 0;
        uint64_t image_logp = span - dst_im_logp;
        if (image_logp != hsrc)
            out.injective = false;
        uint64_t dst_ker_logp = dmd ? dmd->ker_logp : 0;
        if (span != dst_ker_logp || (cols == 0 && hdst != 0))
            out.surjective = false;
    }
    return out;
}

std::pair<std::size_t, int32_t> quotient_step(const ComplexSpec& spec)
{
    check(spec.is_quotient(), errc::unsupported_spec, "not a quotient complex");
    std::optional<std::size_t> var;
    for (std::size_t v = 0; v < spec.roster->size(); ++v) {
        const VarConstraint& a = spec.cons[v];
        const VarConstraint& b = (*spec.quotient_cons)[v];
        if (a.kind != b.kind) {
            fail(errc::unsupported_spec, "quotient changes constraint kinds");
        }
        if (a.kind == VarConstraint::Kind::LogBounded && a.b != b.b) {
            check(a.b == b.b + 1, errc::unsupported_spec, "quotient step exceeds one");
            check(!var.has_value(), errc::unsupported_spec,
                  "quotient along more than one variable");
            var = v;
        }
    }
    check(var.has_value(), errc::unsupported_spec, "quotient step is trivial");
    int32_t b1 = spec.cons[*var].b;
    check(b1 >= 1, errc::unsupported_spec, "quotient needs pole order >= 1");
    return {*var, b1};
}

LogForm homotopy_pi(const ComplexSpec& spec, const LogForm& w)
{
    auto [t1, b1] = quotient_step(spec);
    (void)b1;
    if (w.is_zero())
        return LogForm(spec.roster, spec.mod, w.degree() == 0 ? 0 : w.degree() - 1);
    auto [alpha, beta] = split_top_variable(spec.project(w), t1);
    (void)alpha;
    Scalar sign = Scalar::from_int(w.degree() % 2 == 0 ? 1 : -1, spec.mod);
    return spec.project(beta.scaled(sign));
}

SeqReport verify_homotopy_identity(const ComplexSpec& spec, const DegreeWindow& w)
{
    auto [t1, b1] = quotient_step(spec);
    (void)t1;
    Scalar b1s = Scalar::from_int(b1, spec.mod);
    SeqReport rep;
    w.for_each([&](const ExpVec& mu) {
        LocalComplex lc(spec, mu);
        for (int j = 0; j <= static_cast<int>(spec.roster->size()); ++j) {
            for (Mask m : lc.basis(j - spec.degree_shift)) {
                LogForm e = lc.basis_form(m);
                LogForm lhs = spec.d_in(homotopy_pi(spec, e)) + homotopy_pi(spec, spec.d_in(e));
                LogForm rhs = e.scaled(b1s);
                ++rep.cases;
                if (!(lhs == rhs))
                    rep.failures.push_back("homotopy identity fails on " + e.str());
            }
        }
    });
    return rep;
}

SeqReport verify_quotient_acyclic(const ComplexSpec& spec, const DegreeWindow& w)
{
    SeqReport rep;
    w.for_each([&](const ExpVec& mu) {
        LocalComplex lc(spec, mu);
        for (int j = 0; j <= static_cast<int>(spec.roster->size()); ++j) {
            ModMatrix D = lc.d_matrix(j);
            ModMatrix Dm1 = lc.d_matrix(j - 1);
            if (D.rows == 0)
                continue;
            uint64_t kl = logp_of_canonical(HowellSystem(D).kernel());
            uint64_t il = logp_of_canonical(howell_form(Dm1));
            ++rep.cases;
            if (kl != il)
                rep.failures.push_back("H^" + std::to_string(j) + " nonzero at multidegree " +
                                       LaurentPoly::monomial(spec.roster, spec.mod, mu, 1).str());
        }
    });
    return rep;
}

namespace {

std::vector<uint64_t> coords_at(const LocalComplex& lc, int cdeg, const LogForm& w,
                                const ExpVec& mu)
{
    std::vector<Mask> basis = lc.basis(cdeg);
    std::vector<uint64_t> row(basis.size(), 0);
    for (const auto& [m, f] : w.components()) {
        for (const auto& [e, c] : f.terms()) {
            ExpVec tmu = term_multidegree(lc.spec().roster, m, e);
            check(tmu == mu, errc::internal, "term at unexpected multidegree");
            auto it = std::find(basis.begin(), basis.end(), m);
            check(it != basis.end(), errc::internal, "term outside local basis");
            std::size_t idx = static_cast<std::size_t>(it - basis.begin());
            row[idx] = (row[idx] + c) % lc.spec().mod.q;
        }
    }
    return row;
}

} // namespace

SeqReport verify_exactseq_decomposition(const RosterPtr& roster, Zmod mod, const PoleVector& b,
                                        std::size_t t1, const DegreeWindow& w)
{
    int32_t b1 = b.at(t1);
    check(b1 >= 1, errc::bad_argument, "decomposition needs b1 >= 1");
    PoleVector bprime = b.plus(t1, -b1); // zero at t1; unchanged elsewhere

    ComplexSpec B = ComplexSpec::twisted(roster, mod, b).quotient_by(b.plus(t1, -1));
    ComplexSpec A = ComplexSpec::twisted(roster, mod, bprime).excluding(t1).shifted(-1);
    ComplexSpec C = ComplexSpec::twisted(roster, mod, bprime).excluding(t1);

    ExpVec shift(roster->size(), 0);
    shift[t1] = b1;
    LaurentPoly tb1 = LaurentPoly::monomial(roster, mod, shift, 1); // t1^{b1}
    ExpVec nshift(roster->size(), 0);
    nshift[t1] = -b1;
    LaurentPoly tminusb1 = LaurentPoly::monomial(roster, mod, nshift, 1);

    auto phi = [&](const LogForm& beta) {
        return B.project(wedge(beta.times(tminusb1), LogForm::dlog(roster, mod, t1)));
    };
    auto psi = [&](const LogForm& omega) {
        auto [alpha, betap] = split_top_variable(omega, t1);
        (void)betap;
        return C.project(alpha.times(tb1));
    };

    SeqReport rep;
    w.for_each([&](const ExpVec& muB) {
        if (muB[t1] != -b1)
            return; // the quotient complex is concentrated there
        ExpVec muA = muB;
        muA[t1] = 0;
        LocalComplex lcB(B, muB), lcA(A, muA), lcC(C, muA);
        int maxj = static_cast<int>(roster->size()) + 2;
        for (int j = 0; j <= maxj; ++j) {
            std::vector<Mask> bA = lcA.basis(j), bB = lcB.basis(j), bC = lcC.basis(j);
            if (bA.empty() && bB.empty() && bC.empty())
                continue;
            ++rep.cases;
            // chain-map commutation on basis elements
            for (Mask m : bA) {
                LogForm e = lcA.basis_form(m);
                if (!(phi(A.d_in(e)) == B.d_in(phi(e)))) {
                    rep.failures.push_back("phi does not commute with d at " + e.str());
                    return;
                }
            }
            for (Mask m : bB) {
                LogForm e = lcB.basis_form(m);
                if (!(psi(B.d_in(e)) == C.d_in(psi(e)))) {
                    rep.failures.push_back("psi does not commute with d at " + e.str());
                    return;
                }
            }
            // termwise exactness 0 -> A^j -> B^j -> C^j -> 0
            ModMatrix Mphi(mod, 0, bB.size());
            for (Mask m : bA)
                Mphi.push_row(coords_at(lcB, j, phi(lcA.basis_form(m)), muB));
            ModMatrix Mpsi(mod, 0, bC.size());
            for (Mask m : bB)
                Mpsi.push_row(coords_at(lcC, j, psi(lcB.basis_form(m)), muA));

            if (HowellSystem(Mphi).kernel().rows != 0)
                rep.failures.push_back("phi not injective at degree " + std::to_string(j));
            ModMatrix kerpsi = HowellSystem(Mpsi).kernel();
            if (!(howell_form(kerpsi) == howell_form(Mphi)))
                rep.failures.push_back("ker(psi) != im(phi) at degree " + std::to_string(j));
            uint64_t full = static_cast<uint64_t>(bC.size()) * mod.prec;
            if (HowellSystem(Mpsi, false).span_logp() != full)
                rep.failures.push_back("psi not surjective at degree " + std::to_string(j));
        }
    });
    return rep;
}

SeqReport verify_exactseq_devissage(const RosterPtr& roster, Zmod mod, const PoleVector& b,
                                    std::size_t t1, const DegreeWindow& w)
{
    uint32_t n = mod.prec;
    check(n >= 2, errc::bad_argument, "devissage needs n >= 2");
    ComplexSpec Fn = ComplexSpec::twisted(roster, mod, b).quotient_by(b.plus(t1, -1));
    ComplexSpec F1 = Fn.with_precision(1);
    ComplexSpec Fn1 = Fn.with_precision(n - 1);

    uint64_t pn1 = 1;
    for (uint32_t i = 0; i + 1 < n; ++i)
        pn1 *= mod.p;

    SeqReport rep;
    w.for_each([&](const ExpVec& mu) {
        LocalComplex l1(F1, mu), ln(Fn, mu), ln1(Fn1, mu);
        for (int j = 0; j <= static_cast<int>(roster->size()); ++j) {
            std::vector<Mask> bs = ln.basis(j);
            if (bs.empty())
                continue;
            check(l1.basis(j) == bs && ln1.basis(j) == bs, errc::internal,
                  "bases differ across coefficient reductions");
            ++rep.cases;
            ModMatrix D1 = l1.d_matrix(j), Dn = ln.d_matrix(j), Dn1 = ln1.d_matrix(j);
            // multiplication by p^(n-1) and reduction are chain maps
            for (std::size_t i = 0; i < Dn.a.size(); ++i) {
                if (D1.a[i] != Dn.a[i] % mod.p)
                    rep.failures.push_back("d mod p mismatch at degree " + std::to_string(j));
                if (Dn1.a[i] != Dn.a[i] % (mod.q / mod.p))
                    rep.failures.push_back("d mod p^(n-1) mismatch at degree " +
                                           std::to_string(j));
            }

            // H-level exactness of H(F1) -> H(Fn) -> H(Fn-1) at the middle
            ModMatrix kern = HowellSystem(Dn).kernel();
            ModMatrix imn = howell_form(ln.d_matrix(j - 1));
            ModMatrix ker1 = HowellSystem(D1).kernel();
            ModMatrix imn1 = howell_form(ln1.d_matrix(j - 1));
            uint64_t hn = logp_of_canonical(kern) - logp_of_canonical(imn);

            // image of alpha: p^(n-1) . lift(ker of F1) together with im(Fn)
            ModMatrix s1 = imn;
            for (std::size_t i = 0; i < ker1.rows; ++i) {
                std::vector<uint64_t> row(bs.size(), 0);
                for (std::size_t c = 0; c < bs.size(); ++c)
                    row[c] = (ker1.at(i, c) * pn1) % mod.q;
                s1.push_row(row);
            }
            uint64_t im_alpha =
                HowellSystem(s1, false).span_logp() - logp_of_canonical(imn);

            // image of beta: reductions of ker(Fn) together with im(Fn-1)
            ModMatrix s2 = imn1;
            for (std::size_t i = 0; i < kern.rows; ++i) {
                std::vector<uint64_t> row(bs.size(), 0);
                for (std::size_t c = 0; c < bs.size(); ++c)
                    row[c] = kern.at(i, c) % (mod.q / mod.p);
                s2.push_row(row);
            }
            uint64_t im_beta =
                HowellSystem(s2, false).span_logp() - logp_of_canonical(imn1);

            if (hn != im_alpha + im_beta)
                rep.failures.push_back("H-level exactness fails at degree " + std::to_string(j));
        }
    });
    return rep;
}

SeqReport verify_exactseq_identity(const ComplexSpec& spec, const DegreeWindow& w)
{
    SeqReport rep;
    w.for_each([&](const ExpVec& mu) {
        LocalComplex lc(spec, mu);
        for (int j = 0; j <= static_cast<int>(spec.roster->size()); ++j) {
            std::vector<Mask> bs = lc.basis(j);
            if (bs.empty())
                continue;
            ++rep.cases;
            // identity is a chain map with zero kernel and full image
            ModMatrix id(spec.mod, bs.size(), bs.size());
            for (std::size_t i = 0; i < bs.size(); ++i)
                id.at(i, i) = 1;
            if (HowellSystem(id).kernel().rows != 0)
                rep.failures.push_back("identity has kernel");
            if (HowellSystem(id, false).span_logp() !=
                static_cast<uint64_t>(bs.size()) * spec.mod.prec)
                rep.failures.push_back("identity not surjective");
        }
    });
    return rep;
}

} // namespace drw
