#include "drwitt/cartier.hpp"

#include <algorithm>

namespace drw {

LogForm cartier_inverse(const LogForm& w)
{
    check(w.mod().prec == 1, errc::precision, "Cartier inverse needs precision 1");
    const RosterPtr& roster = w.roster();
    LogForm out(roster, w.mod(), w.degree());
    for (const auto& [m, f] : w.components()) {
        // plain factors of the basis word contribute s^(p-1)
        ExpVec extra(roster->size(), 0);
        for (std::size_t v = 0; v < roster->size(); ++v)
            if ((m & (Mask(1) << v)) && !roster->is_log(v))
                extra[v] = static_cast<int32_t>(w.mod().p) - 1;
        LaurentPoly mult = LaurentPoly::monomial(roster, w.mod(), extra, 1);
        out.add_component(m, f.frobenius_lift() * mult);
    }
    if (!d(out).is_zero())
        fail(errc::internal, "Cartier inverse image is not closed");
    return out;
}

CohClass cartier_inverse_class(const LogForm& w, const ComplexSpec& target, int degree)
{
    return CohClass(target, degree, cartier_inverse(w));
}

FilCorrespondenceReport verify_fil_correspondence(const RosterPtr& roster, uint32_t p,
                                                  std::size_t t, const RatExponent& r, int i,
                                                  const DegreeWindow& source_window)
{
    check(!r.is_negative(), errc::bad_argument, "r must be >= 0");
    Zmod mod(p, 1);
    int32_t src_pole = r.is_zero() ? 0 : static_cast<int32_t>(ceil_rat(r)) - 1;
    int32_t dst_pole = r.is_zero() ? 0 : static_cast<int32_t>(p) * static_cast<int32_t>(ceil_rat(r)) - 1;

    std::vector<int32_t> bsrc(roster->size(), 0), bdst(roster->size(), 0);
    bsrc[t] = src_pole;
    bdst[t] = dst_pole;
    ComplexSpec src = ComplexSpec::twisted(roster, mod, PoleVector(roster, bsrc));
    ComplexSpec dst = ComplexSpec::twisted(roster, mod, PoleVector(roster, bdst));

    DegreeWindow target_window = source_window.scaled(static_cast<int32_t>(p));
    WindowCohomology H(dst, i, target_window);

    FilCorrespondenceReport rep;
    target_window.for_each([&](const ExpVec& nu) {
        ++rep.cases;
        bool on_lattice = true;
        ExpVec mu(nu.size());
        for (std::size_t v = 0; v < nu.size(); ++v) {
            if (nu[v] % static_cast<int32_t>(p) != 0) {
                on_lattice = false;
                break;
            }
            mu[v] = nu[v] / static_cast<int32_t>(p);
        }
        if (on_lattice && !source_window.contains(mu))
            on_lattice = false;

        if (!on_lattice) {
            if (H.h_logp(nu) != 0)
                rep.failures.push_back("nonzero H off the p-lattice at multidegree " +
                                       LaurentPoly::monomial(roster, mod, nu, 1).str());
            return;
        }

        // source basis: monomial i-forms of pole <= src_pole at multidegree mu
        LocalComplex lsrc(src, mu);
        std::vector<Mask> bs = lsrc.basis(i);
        const auto* md = H.mu_data(nu);
        uint64_t hdst = md ? md->ker_logp - md->im_logp : 0;
        if (bs.empty()) {
            if (hdst != 0)
                rep.failures.push_back("target H nonzero with empty source at multidegree " +
                                       LaurentPoly::monomial(roster, mod, nu, 1).str());
            return;
        }
        check(md != nullptr, errc::internal, "empty target complex under Cartier image");

        ModMatrix stack(mod, 0, md->basis.size());
        for (std::size_t k = 0; k < md->im.rows; ++k)
            stack.push_row(md->im.row(k));
        for (Mask m : bs) {
            LogForm img = cartier_inverse(lsrc.basis_form(m));
            auto rows = H.form_rows(img);
            check(rows.size() <= 1, errc::internal, "Cartier image not mu-homogeneous");
            auto it = rows.find(nu);
            check(rows.empty() || it != rows.end(), errc::internal,
                  "Cartier image at unexpected multidegree");
            if (it != rows.end())
                stack.push_row(it->second);
            else
                stack.push_row(std::vector<uint64_t>(md->basis.size(), 0));
        }
        uint64_t span = HowellSystem(stack, false).span_logp();
        uint64_t image_logp = span - md->im_logp;
        if (image_logp != bs.size())
            rep.failures.push_back("C^{-1} not injective at multidegree " +
                                   LaurentPoly::monomial(roster, mod, nu, 1).str());
        if (span != md->ker_logp)
            rep.failures.push_back("C^{-1} not surjective at multidegree " +
                                   LaurentPoly::monomial(roster, mod, nu, 1).str());
    });
    return rep;
}

} // namespace drw
