#include "drwitt/filtration.hpp"

namespace drw {

ModulusChart::ModulusChart(RosterPtr r, std::vector<RatExponent> b, Zmod m)
    : roster(std::move(r)), multiplicities(std::move(b)), mod(m)
{
    check(multiplicities.size() == roster->size(), errc::dimension_mismatch,
          "one multiplicity per variable");
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v))
            check(RatExponent(0) < multiplicities[v], errc::bad_argument,
                  "log multiplicities must be positive");
        else
            check(multiplicities[v].is_zero(), errc::bad_argument,
                  "plain variables carry no multiplicity");
    }
}

ComplexSpec fil_subcomplex(const RosterPtr& roster, Zmod mod, std::size_t t,
                           const RatExponent& r, FilVariant variant)
{
    check(!r.is_negative(), errc::bad_argument, "r must be >= 0");
    if (r.is_zero())
        return ComplexSpec::plain_regular(roster, mod);
    long long pole = ceil_rat(r) - 1;
    if (variant == FilVariant::Fil)
        pole = static_cast<long long>(mod.p) * ceil_rat(r) - 1;
    std::vector<int32_t> b(roster->size(), 0);
    b[t] = static_cast<int32_t>(pole);
    return ComplexSpec::twisted(roster, mod, PoleVector(roster, b));
}

namespace {

void require_single_log(const RosterPtr& roster, std::size_t t)
{
    check(t < roster->size() && roster->is_log(t), errc::bad_argument,
          "valuation variable must be a log variable");
    for (std::size_t v = 0; v < roster->size(); ++v)
        check(v == t || !roster->is_log(v), errc::bad_argument,
              "the valuation variable must be the only log variable of the chart");
}

} // namespace

FilContext::FilContext(RosterPtr roster, Zmod mod, std::size_t t, int i, DegreeWindow w)
    : roster_(std::move(roster)), mod_(mod), t_(t),
      ambient_(ComplexSpec::laurent_full(roster_, mod), i, std::move(w))
{
    require_single_log(roster_, t_);
}

const SubImage& FilContext::image_for(const RatExponent& r, FilVariant variant) const
{
    ComplexSpec sub = fil_subcomplex(roster_, mod_, t_, r, variant);
    int64_t key = r.is_zero() ? -1
                              : static_cast<int64_t>(sub.cons[t_].b);
    auto it = cache_.find(key);
    if (it == cache_.end())
        it = cache_.emplace(key, SubImage(sub, ambient_)).first;
    return it->second;
}

bool FilContext::member(const LogForm& rep, const RatExponent& r, FilVariant variant) const
{
    check(ambient_.is_closed(rep), errc::not_closed, "filtration query needs a closed class");
    return image_for(r, variant).contains_class(rep);
}

bool fil_membership(const LogForm& rep, std::size_t t, const RatExponent& r, FilVariant variant,
                    const DegreeWindow& w, int i)
{
    FilContext ctx(rep.roster(), rep.mod(), t, i, w);
    return ctx.member(rep, r, variant);
}

ModulusSections modulus_sections(const ModulusChart& chart, int i, const DegreeWindow& w)
{
    const RosterPtr& roster = chart.roster;
    std::vector<int32_t> b1(roster->size(), 0), b2(roster->size(), 0);
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (!roster->is_log(v))
            continue;
        long long cb = ceil_rat(chart.multiplicities[v]);
        b1[v] = static_cast<int32_t>(chart.mod.p * cb - 1);
        b2[v] = static_cast<int32_t>(chart.mod.p * (cb - 1));
    }
    ComplexSpec spec1 = ComplexSpec::twisted(roster, chart.mod, PoleVector(roster, b1));
    ComplexSpec spec2 = ComplexSpec::twisted(roster, chart.mod, PoleVector(roster, b2));

    WindowCohomology H1(spec1, i, w);
    ModulusSections out;
    for (std::size_t k = 0; k < H1.gens().size(); ++k)
        out.classes.emplace_back(spec1, i, H1.gen_form(k));

    WindowCohomology ambient(ComplexSpec::laurent_full(roster, chart.mod), i, w);
    SubImage s1(spec1, ambient), s2(spec2, ambient);
    out.collapse_ok = s1.same_span(s2);
    return out;
}

TraceInclusionReport verify_trace_inclusion(const FiniteCover& cover, const RatExponent& r,
                                            int i, const DegreeWindow& src_w,
                                            const DegreeWindow& dst_w)
{
    TraceInclusionReport rep;
    FilContext target(cover.target(), cover.mod(), cover.t(), i, dst_w);
    RatExponent re = rat_div(r, cover.e());
    for (FilVariant variant : {FilVariant::FilPrime, FilVariant::Fil}) {
        ComplexSpec sub = fil_subcomplex(cover.source(), cover.mod(), cover.tprime(), r, variant);
        WindowCohomology Hsub(sub, i, src_w);
        for (std::size_t k = 0; k < Hsub.gens().size(); ++k) {
            LogForm w = Hsub.gen_form(k);
            LogForm pushed = cover.pushforward(w);
            ++rep.cases;
            if (!target.member(pushed, re, variant))
                rep.failures.push_back(
                    std::string(variant == FilVariant::Fil ? "Fil" : "Fil'") +
                    " trace inclusion fails on " + w.str());
        }
    }
    return rep;
}

TwoSidedReport membership_two_sided(const ModulusChart& chart, const LogForm& rep, int i,
                                    const DegreeWindow& w)
{
    const RosterPtr& roster = chart.roster;
    std::optional<std::size_t> xvar;
    for (std::size_t v = 0; v < roster->size(); ++v) {
        if (roster->is_log(v)) {
            check(!xvar.has_value(), errc::unsupported_spec,
                  "two-sided membership needs a single-divisor chart");
            xvar = v;
        }
    }
    check(xvar.has_value(), errc::unsupported_spec, "chart has no divisor");
    std::size_t x = *xvar;
    uint32_t p = chart.mod.p;
    uint32_t n = chart.mod.prec;

    WindowCohomology ambient(ComplexSpec::laurent_full(roster, chart.mod), i, w);
    check(ambient.is_closed(rep), errc::not_closed, "two-sided query needs a closed class");

    auto twist = [&](int32_t pole) {
        std::vector<int32_t> b(roster->size(), 0);
        b[x] = pole;
        return ComplexSpec::twisted(roster, chart.mod, PoleVector(roster, b));
    };

    int32_t cb = static_cast<int32_t>(ceil_rat(chart.multiplicities[x]));
    int32_t cmax = cb;
    for (const auto& bounds : w.bounds)
        cmax = std::max(cmax, -bounds.first / static_cast<int32_t>(p) + 2);

    TwoSidedReport out;
    std::optional<LogForm> subrep;
    for (int32_t c = cb; c <= cmax; ++c) {
        SubImage img(twist(static_cast<int32_t>(p) * (c - 1)), ambient);
        if (img.contains_class(rep)) {
            out.c = c;
            if (c == cb) {
                out.member = true;
                return out;
            }
            subrep = img.representative(rep);
            break;
        }
    }
    check(subrep.has_value(), errc::resource_limit,
          "class has poles beyond the window budget");

    // quotient F_n = x^{-p(c-1)} / x^{-p(c-1)+1} and its reductions
    int32_t pole = static_cast<int32_t>(p) * (out.c - 1);
    ComplexSpec Fq = twist(pole).quotient_by(PoleVector::zero(roster).plus(x, pole - 1));
    LogForm omega1 = Fq.project(*subrep);

    // minimal level where the image stays nonzero in cohomology
    for (uint32_t n0 = 1; n0 <= n; ++n0) {
        ComplexSpec Fn0 = Fq.with_precision(n0);
        WindowCohomology Hq(Fn0, i, w);
        LogForm w2 = omega1.reduced(n0);
        if (w2.is_zero() || Hq.is_exact(w2))
            continue;
        out.n0 = n0;
        // lift along H(F_1) -> H(F_n0): solve w2 = p^(n0-1) lift(w3) mod im
        uint64_t pn0 = 1;
        for (uint32_t k = 0; k + 1 < n0; ++k)
            pn0 *= p;
        ComplexSpec F1 = Fq.with_precision(1);
        WindowCohomology H1(F1, i, w);
        LogForm cert(roster, Zmod(p, 1), w2.degree());
        for (const auto& [mu, row] : Hq.form_rows(w2)) {
            const auto* md = Hq.mu_data(mu);
            ModMatrix stack(Fn0.mod, 0, md->basis.size());
            for (std::size_t k = 0; k < md->basis.size(); ++k) {
                std::vector<uint64_t> r(md->basis.size(), 0);
                r[k] = pn0 % Fn0.mod.q;
                stack.push_row(r);
            }
            for (std::size_t k = 0; k < md->im.rows; ++k)
                stack.push_row(md->im.row(k));
            auto sol = HowellSystem(stack).solve(row);
            check(sol.has_value(), errc::internal,
                  "devissage lift is unsolvable despite exactness");
            LocalComplex lc(F1, mu);
            for (std::size_t k = 0; k < md->basis.size(); ++k) {
                uint64_t ck = (*sol)[k] % p;
                if (ck != 0)
                    cert.add_component(md->basis[k],
                                       LaurentPoly::monomial(roster, Zmod(p, 1),
                                                             lc.mono_of(md->basis[k]), ck));
            }
        }
        out.certificate = cert;
        out.certificate_nonzero = !cert.is_zero() && !H1.is_exact(cert);
        return out;
    }
    fail(errc::internal, "nonzero quotient class vanished at every level");
}

} // namespace drw
