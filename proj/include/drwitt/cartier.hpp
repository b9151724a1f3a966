#pragma once

#include "drwitt/complexes.hpp"

namespace drw {

/// Inverse Cartier operator at n = 1 on a precision-1 log form, defined
/// multiplicatively on basis words: f -> f^p, dlog t -> dlog t,
/// ds -> s^(p-1) ds. The result is closed (asserted) and scales every
/// multidegree by p.
LogForm cartier_inverse(const LogForm& w);

/// cartier_inverse packaged as a class of the given complex.
CohClass cartier_inverse_class(const LogForm& w, const ComplexSpec& target, int degree);

struct FilCorrespondenceReport {
    std::size_t cases = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

/// Prop on the n = 1 filtration correspondence: C^{-1} maps the monomial
/// basis of t^(-ceil(r)+1) Omega^i(log) bijectively onto
/// H^i(t^(-p ceil(r)+1) Omega^*(log)) multidegree-by-multidegree (source mu
/// against target p mu, zero cohomology off the p-divisible lattice).
/// r = 0 is the classical Cartier isomorphism with no pole twist.
FilCorrespondenceReport verify_fil_correspondence(const RosterPtr& roster, uint32_t p,
                                                  std::size_t t, const RatExponent& r, int i,
                                                  const DegreeWindow& source_window);

} // namespace drw
