#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "drwitt/howell.hpp"
#include "drwitt/logform.hpp"

namespace drw {

/// Per-variable membership constraint of a twisted complex.
struct VarConstraint {
    enum class Kind {
        Plain,        // exponent >= 0 (ring invariant)
        LogBounded,   // exponent >= -b
        LogLaurent,   // unconstrained (window only)
        LogDtRegular, // exponent >= 1 on dlog-t components, >= 0 otherwise
    };
    Kind kind = Kind::Plain;
    int32_t b = 0;
};

/// A degree-graded complex of log forms: t^-b Omega^*(log), its Laurent
/// envelope, the plain subcomplex Omega^*_A, or a quotient of two pole
/// twists, with an optional degree shift (complex degree j holds forms of
/// degree j + shift). Coefficients live over Z/p^prec.
struct ComplexSpec {
    RosterPtr roster;
    Zmod mod;
    std::vector<VarConstraint> cons;
    std::optional<std::vector<VarConstraint>> quotient_cons;
    std::vector<bool> excluded;
    int degree_shift = 0;

    static ComplexSpec twisted(RosterPtr roster, Zmod mod, const PoleVector& b);
    static ComplexSpec laurent_full(RosterPtr roster, Zmod mod);
    static ComplexSpec plain_regular(RosterPtr roster, Zmod mod);

    ComplexSpec quotient_by(const PoleVector& bsub) const;
    ComplexSpec with_precision(uint32_t n) const;
    ComplexSpec excluding(std::size_t var) const;
    ComplexSpec shifted(int by) const;

    bool is_quotient() const { return quotient_cons.has_value(); }
    int form_degree(int complex_degree) const { return complex_degree + degree_shift; }

    bool in_main(Mask word, const ExpVec& mono) const;
    bool in_sub(Mask word, const ExpVec& mono) const;
    bool member(Mask word, const ExpVec& mono) const
    {
        return in_main(word, mono) && !in_sub(word, mono);
    }

    /// Canonical representative: drops components of the quotiented
    /// subcomplex; errors when some term falls outside the main constraints.
    LogForm project(const LogForm& w) const;
    /// Differential of the complex (exterior d followed by project).
    LogForm d_in(const LogForm& w) const;

    std::string str() const;
};

/// Inclusive per-variable multidegree bounds. A completeness budget rather
/// than an approximation: d preserves multidegree, so any class whose
/// representative lives in the window is decided exactly inside it.
struct DegreeWindow {
    std::vector<std::pair<int32_t, int32_t>> bounds;

    static DegreeWindow uniform(const RosterPtr& roster, int32_t lo, int32_t hi);
    static DegreeWindow per_var(std::vector<std::pair<int32_t, int32_t>> b);

    std::size_t size() const { return bounds.size(); }
    bool contains(const ExpVec& mu) const;
    uint64_t count() const;
    void for_each(const std::function<void(const ExpVec&)>& fn) const;
    DegreeWindow scaled(int32_t factor) const;

    std::string str() const;
};

/// The finite complex of one multidegree: basis words and differentials.
class LocalComplex {
public:
    LocalComplex(const ComplexSpec& spec, ExpVec mu);

    const ComplexSpec& spec() const { return spec_; }
    const ExpVec& mu() const { return mu_; }

    ExpVec mono_of(Mask word) const;
    std::vector<Mask> basis(int complex_degree) const;
    ModMatrix d_matrix(int complex_degree) const; // basis(j) x basis(j+1)

    LogForm basis_form(Mask word) const;

private:
    ComplexSpec spec_;
    ExpVec mu_;
};

/// Window-restricted cohomology of a ComplexSpec in one complex degree:
/// per-multidegree kernels, images, and a deterministic generating set of
/// classes, with membership and coordinate queries.
class WindowCohomology {
public:
    WindowCohomology(ComplexSpec spec, int complex_degree, DegreeWindow window,
                     uint64_t cell_cap = 4'000'000);

    const ComplexSpec& spec() const { return spec_; }
    int complex_degree() const { return cdeg_; }
    const DegreeWindow& window() const { return window_; }

    struct GenRef {
        ExpVec mu;
        std::size_t local_index;
    };
    const std::vector<GenRef>& gens() const { return gens_; }
    LogForm gen_form(std::size_t k) const;

    /// log_p of |H| restricted to the window.
    uint64_t order_logp() const;
    uint64_t h_logp(const ExpVec& mu) const;

    bool is_in_complex(const LogForm& w) const;
    bool is_closed(const LogForm& w) const;
    bool is_exact(const LogForm& w) const;
    bool same_class(const LogForm& a, const LogForm& b) const;

    /// Coordinates of a closed form's class over gens(); nullopt if the
    /// class does not lie in the window span (e.g. not closed-in-window).
    std::optional<std::vector<Scalar>> class_coords(const LogForm& w) const;

    // per-multidegree internals used by induced-map and image computations
    struct MuData {
        std::vector<Mask> basis;            // at complex degree cdeg
        ModMatrix ker;                      // canonical kernel rows
        ModMatrix im;                       // canonical image rows
        HowellSystem im_sys;                // membership in im
        std::vector<std::vector<uint64_t>> gen_rows;
        HowellSystem rep_sys;               // [gen_rows; im rows]
        uint64_t ker_logp = 0, im_logp = 0;
    };
    const MuData* mu_data(const ExpVec& mu) const;
    const std::map<ExpVec, MuData>& all_mu() const { return data_; }

    /// Split a form into per-multidegree coordinate rows over the local
    /// bases; errors when a term leaves the window or the complex.
    std::map<ExpVec, std::vector<uint64_t>> form_rows(const LogForm& w) const;

private:
    ComplexSpec spec_;
    int cdeg_;
    DegreeWindow window_;
    std::map<ExpVec, MuData> data_;
    std::vector<GenRef> gens_;
};

/// A cohomology class: a closed representative tagged with its complex.
struct CohClass {
    ComplexSpec spec;
    int degree = 0;
    LogForm rep;

    CohClass(ComplexSpec s, int deg, LogForm r);
};

/// Image of H(sub) -> H(ambient) for a subcomplex inclusion, window-wise:
/// span of [kernel of d in sub, image of d in ambient] per multidegree.
class SubImage {
public:
    SubImage(ComplexSpec sub, const WindowCohomology& ambient);

    bool contains_class(const LogForm& rep) const;
    bool same_span(const SubImage& other) const;
    uint64_t span_logp() const;

    /// A cohomologous representative inside the subcomplex, when one exists.
    std::optional<LogForm> representative(const LogForm& rep) const;

private:
    ComplexSpec sub_;
    const WindowCohomology* ambient_;
    std::map<ExpVec, HowellSystem> sys_;
    std::map<ExpVec, std::vector<LogForm>> ker_forms_;
};

/// Induced map on window cohomology for a degree-preserving chain map given
/// at the form level. Injectivity/surjectivity are decided per multidegree
/// and therefore require a multidegree-preserving map.
struct InducedMap {
    bool chain_ok = true;
    bool injective = false;
    bool surjective = false;
    std::vector<std::vector<Scalar>> matrix; // row per src gen, coords over dst gens
    std::string detail;
};

enum class ChainMapKind { Inclusion, Quotient, Custom };

InducedMap induced_map(const WindowCohomology& src, const WindowCohomology& dst,
                       ChainMapKind kind,
                       const std::function<LogForm(const LogForm&)>& phi = {},
                       bool check_chain = true);

/// The homotopy operator pi of the quotient complex along one log variable:
/// project to the beta ^ dlog t1 part, send eta ^ dlog t1 to (-1)^j eta,
/// include back. Requires spec to be a single-variable unit-step quotient.
LogForm homotopy_pi(const ComplexSpec& spec, const LogForm& w);

/// The distinguished variable and pole order of a unit-step quotient.
std::pair<std::size_t, int32_t> quotient_step(const ComplexSpec& spec);

struct SeqReport {
    std::size_t cases = 0;
    std::vector<std::string> failures;
    bool pass() const { return failures.empty(); }
};

/// d o pi^j + pi^{j+1} o d == b1 . id on every basis element in the window.
SeqReport verify_homotopy_identity(const ComplexSpec& spec, const DegreeWindow& w);

/// Acyclicity of a quotient complex on the window (all degrees).
SeqReport verify_quotient_acyclic(const ComplexSpec& spec, const DegreeWindow& w);

/// 0 -> Omega'[-1] -> t^-b/t^(-b+e1) -> Omega' -> 0 termwise, with chain-map
/// checks, per multidegree of the middle complex.
SeqReport verify_exactseq_decomposition(const RosterPtr& roster, Zmod mod, const PoleVector& b,
                                        std::size_t t1, const DegreeWindow& w);

/// H-level exactness of F_1 -> F_n -> F_(n-1) at the middle spot, where
/// F_n is a unit-step quotient at precision n; includes the reduction and
/// multiplication-by-p^(n-1) compatibility congruences.
SeqReport verify_exactseq_devissage(const RosterPtr& roster, Zmod mod, const PoleVector& b,
                                    std::size_t t1, const DegreeWindow& w);

/// 0 -> C -> C -> 0 with the identity map.
SeqReport verify_exactseq_identity(const ComplexSpec& spec, const DegreeWindow& w);

} // namespace drw
