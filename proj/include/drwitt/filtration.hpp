#pragma once

#include <optional>

#include "drwitt/complexes.hpp"
#include "drwitt/pushforward.hpp"

namespace drw {

/// Desk-scale chart of a log smooth modulus pair: affine space with log
/// divisors {x_a = 0} weighted by positive rational multiplicities.
struct ModulusChart {
    RosterPtr roster;
    std::vector<RatExponent> multiplicities; // positive at log slots, 0 at plain slots
    Zmod mod;

    ModulusChart(RosterPtr r, std::vector<RatExponent> b, Zmod m);
};

enum class FilVariant { FilPrime, Fil };

/// The subcomplex whose H^i cuts out Fil'_r (resp. Fil_r) inside the
/// Laurent cohomology of the chart: no-pole dt-regular forms at r = 0,
/// pole ceil(r)-1 (resp. p ceil(r)-1) for r > 0.
ComplexSpec fil_subcomplex(const RosterPtr& roster, Zmod mod, std::size_t t,
                           const RatExponent& r, FilVariant variant);

/// Membership of a closed Laurent class in Fil'_r / Fil_r on the window.
/// The distinguished valuation variable t must be the only log variable.
bool fil_membership(const LogForm& rep, std::size_t t, const RatExponent& r,
                    FilVariant variant, const DegreeWindow& w, int i);

/// Cached Fil membership against one ambient Laurent cohomology.
class FilContext {
public:
    FilContext(RosterPtr roster, Zmod mod, std::size_t t, int i, DegreeWindow w);

    const WindowCohomology& ambient() const { return ambient_; }
    bool member(const LogForm& rep, const RatExponent& r, FilVariant variant) const;

private:
    const SubImage& image_for(const RatExponent& r, FilVariant variant) const;

    RosterPtr roster_;
    Zmod mod_;
    std::size_t t_;
    WindowCohomology ambient_;
    mutable std::map<int64_t, SubImage> cache_; // keyed by pole order; -1 for r = 0
};

struct ModulusSections {
    std::vector<CohClass> classes;
    bool collapse_ok = false; // H^i(x^{-p ceil b + 1}) == H^i(x^{-p(ceil b - 1)})
};

/// Window generators of the modulus sections H^i(x^(-p ceil(b) + 1)
/// Omega^*(log D)) of a log smooth chart, together with the check that both
/// pole normalizations give one subgroup of the Laurent cohomology.
ModulusSections modulus_sections(const ModulusChart& chart, int i, const DegreeWindow& w);

struct TraceInclusionReport {
    std::size_t cases = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

/// Tr(Fil'_r) in Fil'_{r/e} and Tr(Fil_r) in Fil_{r/e}: every window
/// generator of the source filtration pushes into the target filtration.
TraceInclusionReport verify_trace_inclusion(const FiniteCover& cover, const RatExponent& r,
                                            int i, const DegreeWindow& src_w,
                                            const DegreeWindow& dst_w);

struct TwoSidedReport {
    bool member = false;
    int32_t c = 0;                      // minimal pole parameter reached
    uint32_t n0 = 0;                    // devissage level of the certificate
    std::optional<LogForm> certificate; // nonzero class in H^i(F_1)
    bool certificate_nonzero = false;
};

/// Membership in the modulus sections of a single-divisor chart, with a
/// nonzero graded certificate (the omega_3 of the devissage) for classes
/// outside the group.
TwoSidedReport membership_two_sided(const ModulusChart& chart, const LogForm& rep, int i,
                                    const DegreeWindow& w);

} // namespace drw
