#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "drwitt/zpn.hpp"

namespace drw {

/// Dense row-major matrix over Z/p^N with raw uint64 entries.
struct ModMatrix {
    Zmod mod{};
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<uint64_t> a;

    ModMatrix() = default;
    ModMatrix(Zmod m, std::size_t r, std::size_t c) : mod(m), rows(r), cols(c), a(r * c, 0) {}

    uint64_t& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    uint64_t at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    std::vector<uint64_t> row(std::size_t i) const
    {
        return std::vector<uint64_t>(a.begin() + static_cast<long>(i * cols),
                                     a.begin() + static_cast<long>((i + 1) * cols));
    }
    void push_row(const std::vector<uint64_t>& r)
    {
        check(r.size() == cols, errc::dimension_mismatch, "row length != cols");
        a.insert(a.end(), r.begin(), r.end());
        ++rows;
    }

    friend bool operator==(const ModMatrix& x, const ModMatrix& y)
    {
        return x.mod == y.mod && x.rows == y.rows && x.cols == y.cols && x.a == y.a;
    }
};

/// Howell canonical form of a row span over Z/p^N, with enough transform
/// bookkeeping to answer membership queries with explicit coefficients and
/// to produce the left kernel of the generating rows.
///
/// Canonical form properties: pivots are exact powers p^v at strictly
/// increasing columns, entries above a pivot are reduced mod p^v, and for
/// every pivot row the row p^(N-v) * (pivot row) lies in the span of the
/// later rows (the Howell property). Two generating sets span the same
/// submodule iff they produce identical canonical forms.
class HowellSystem {
public:
    HowellSystem(Zmod m, std::size_t cols);
    explicit HowellSystem(const ModMatrix& gens);
    /// with_kernel = false skips kernel tracking (span queries only).
    HowellSystem(const ModMatrix& gens, bool with_kernel);

    const Zmod& mod() const { return mod_; }
    std::size_t cols() const { return cols_; }
    std::size_t num_generators() const { return ngen_; }

    /// Canonical Howell form (pivot rows only, zero rows dropped).
    const ModMatrix& canonical() const { return canon_; }

    /// log_p of the cardinality of the row span.
    uint64_t span_logp() const;

    bool contains(const std::vector<uint64_t>& v) const;

    /// Coefficients c over the original generator rows with c . gens = v,
    /// or nullopt when v is outside the span. Deterministic.
    std::optional<std::vector<uint64_t>> solve(const std::vector<uint64_t>& v) const;

    /// Generators of the left kernel {x : x . gens = 0} of the original
    /// generator matrix, as a canonical Howell form.
    const ModMatrix& kernel() const { return kernel_; }

private:
    struct PairRow {
        std::vector<uint64_t> h; // combination of generator rows
        std::vector<uint64_t> u; // its coefficients over the generators
    };

    void build(const ModMatrix& gens, bool with_kernel);
    void echelonize(bool track);

    Zmod mod_{};
    std::size_t cols_ = 0;
    std::size_t ngen_ = 0;
    std::vector<PairRow> pivots_;     // echelonized, sorted by pivot column
    std::vector<std::size_t> pivcol_; // pivot column per pivot row
    std::vector<uint32_t> pivval_;    // pivot valuation per pivot row
    ModMatrix canon_;
    ModMatrix kernel_;
};

/// Convenience: canonical Howell form of a matrix.
ModMatrix howell_form(const ModMatrix& m);

/// Convenience: left kernel {x : x M = 0} as a canonical Howell form.
ModMatrix left_kernel(const ModMatrix& m);

} // namespace drw
