#include "drwitt/howell.hpp"

#include <algorithm>

namespace drw {

namespace {

uint64_t p_pow(const Zmod& m, uint32_t k)
{
    uint64_t r = 1;
    for (uint32_t i = 0; i < k; ++i)
        r *= m.p;
    return r;
}

void axpy_sub(std::vector<uint64_t>& dst, uint64_t c, const std::vector<uint64_t>& src,
              const Zmod& m)
{
    for (std::size_t j = 0; j < dst.size(); ++j) {
        uint64_t t = dst[j] + m.q - mulmod(c, src[j], m.q);
        dst[j] = t >= m.q ? t - m.q : t;
    }
}

void axpy_add(std::vector<uint64_t>& dst, uint64_t c, const std::vector<uint64_t>& src,
              const Zmod& m)
{
    for (std::size_t j = 0; j < dst.size(); ++j) {
        uint64_t t = dst[j] + mulmod(c, src[j], m.q);
        dst[j] = t >= m.q ? t - m.q : t;
    }
}

void scale(std::vector<uint64_t>& v, uint64_t c, const Zmod& m)
{
    for (auto& x : v)
        x = mulmod(c, x, m.q);
}

bool all_zero(const std::vector<uint64_t>& v)
{
    return std::all_of(v.begin(), v.end(), [](uint64_t x) { return x == 0; });
}

} // namespace

HowellSystem::HowellSystem(Zmod m, std::size_t cols) : mod_(m), cols_(cols)
{
    canon_ = ModMatrix(m, 0, cols);
    kernel_ = ModMatrix(m, 0, 0);
}

HowellSystem::HowellSystem(const ModMatrix& gens) : HowellSystem(gens.mod, gens.cols)
{
    build(gens, true);
}

HowellSystem::HowellSystem(const ModMatrix& gens, bool with_kernel)
    : HowellSystem(gens.mod, gens.cols)
{
    build(gens, with_kernel);
}

void HowellSystem::echelonize(bool track)
{
    // Gaussian elimination with minimal-valuation pivot choice; pivots are
    // normalized to exact powers of p and the columns below them cleared.
    // Zero rows left over are kernel relations when tracking is on.
    std::vector<PairRow> work = std::move(pivots_);
    pivots_.clear();
    pivcol_.clear();
    pivval_.clear();

    std::size_t col = 0;
    while (col < cols_ && !work.empty()) {
        std::size_t best = work.size();
        uint32_t bestval = mod_.prec;
        for (std::size_t i = 0; i < work.size(); ++i) {
            if (work[i].h[col] == 0)
                continue;
            uint32_t v = Scalar(work[i].h[col], mod_).valuation();
            if (v < bestval) {
                bestval = v;
                best = i;
            }
        }
        if (best == work.size()) {
            ++col;
            continue;
        }
        PairRow piv = std::move(work[best]);
        work.erase(work.begin() + static_cast<long>(best));
        uint64_t pv = p_pow(mod_, bestval);
        uint64_t unit = piv.h[col] / pv; // exact: entry = unit * p^v
        if (unit != 1) {
            uint64_t ui = Scalar(unit, mod_).inv().value();
            scale(piv.h, ui, mod_);
            scale(piv.u, ui, mod_);
        }
        for (auto& r : work) {
            if (r.h[col] == 0)
                continue;
            uint64_t c = r.h[col] / pv; // valuation >= bestval by pivot choice
            axpy_sub(r.h, c, piv.h, mod_);
            axpy_sub(r.u, c, piv.u, mod_);
        }
        pivots_.push_back(std::move(piv));
        pivcol_.push_back(col);
        pivval_.push_back(bestval);
        ++col;
    }
    for (auto& r : work) {
        if (!all_zero(r.h))
            fail(errc::internal, "echelon leftover with nonzero row");
        if (track && !all_zero(r.u))
            kernel_.push_row(r.u);
    }
}

void HowellSystem::build(const ModMatrix& gens, bool with_kernel)
{
    ngen_ = gens.rows;
    kernel_ = ModMatrix(mod_, 0, ngen_);
    pivots_.clear();
    for (std::size_t i = 0; i < gens.rows; ++i) {
        PairRow pr;
        pr.h = gens.row(i);
        pr.u.assign(ngen_, 0);
        pr.u[i] = 1;
        pivots_.push_back(std::move(pr));
    }

    // Howell saturation: for every pivot of valuation v > 0, the multiple
    // p^(N-v) * row must reduce to zero against the other pivots; rows that
    // fail feed back into the elimination. Terminates because the multiset
    // of (pivot column, valuation) improves monotonically.
    std::size_t guard = (cols_ + 2) * (mod_.prec + 2);
    for (std::size_t pass = 0;; ++pass) {
        if (pass > guard)
            fail(errc::internal, "howell saturation did not stabilize");
        echelonize(with_kernel);
        std::vector<PairRow> extra;
        for (std::size_t i = 0; i < pivots_.size(); ++i) {
            if (pivval_[i] == 0)
                continue;
            uint64_t c = p_pow(mod_, mod_.prec - pivval_[i]);
            PairRow cand;
            cand.h = pivots_[i].h;
            cand.u = pivots_[i].u;
            scale(cand.h, c, mod_);
            scale(cand.u, c, mod_);
            bool stuck = false;
            for (std::size_t k = 0; k < pivots_.size(); ++k) {
                uint64_t e = cand.h[pivcol_[k]];
                if (e == 0)
                    continue;
                if (Scalar(e, mod_).valuation() < pivval_[k]) {
                    stuck = true;
                    break;
                }
                uint64_t cc = e / p_pow(mod_, pivval_[k]);
                axpy_sub(cand.h, cc, pivots_[k].h, mod_);
                axpy_sub(cand.u, cc, pivots_[k].u, mod_);
            }
            if (!stuck && all_zero(cand.h)) {
                if (with_kernel && !all_zero(cand.u))
                    kernel_.push_row(cand.u);
            } else {
                extra.push_back(std::move(cand));
            }
        }
        if (extra.empty())
            break;
        for (auto& e : extra)
            pivots_.push_back(std::move(e));
    }

    // canonicalize: reduce entries above each pivot mod p^v
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        uint64_t pv = p_pow(mod_, pivval_[k]);
        for (std::size_t i = 0; i < k; ++i) {
            uint64_t e = pivots_[i].h[pivcol_[k]];
            uint64_t c = e / pv; // floor; remainder in [0, p^v)
            if (c != 0) {
                axpy_sub(pivots_[i].h, c, pivots_[k].h, mod_);
                axpy_sub(pivots_[i].u, c, pivots_[k].u, mod_);
            }
        }
    }

    canon_ = ModMatrix(mod_, 0, cols_);
    for (auto& pr : pivots_)
        canon_.push_row(pr.h);
    if (with_kernel && kernel_.rows > 0)
        kernel_ = HowellSystem(kernel_, false).canonical();
}

uint64_t HowellSystem::span_logp() const
{
    uint64_t s = 0;
    for (uint32_t v : pivval_)
        s += mod_.prec - v;
    return s;
}

std::optional<std::vector<uint64_t>> HowellSystem::solve(const std::vector<uint64_t>& v) const
{
    check(v.size() == cols_, errc::dimension_mismatch, "vector length != cols");
    std::vector<uint64_t> cur = v;
    std::vector<uint64_t> coeff(ngen_, 0);
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        uint64_t e = cur[pivcol_[k]];
        if (e == 0)
            continue;
        if (Scalar(e, mod_).valuation() < pivval_[k])
            return std::nullopt;
        uint64_t c = e / p_pow(mod_, pivval_[k]);
        axpy_sub(cur, c, pivots_[k].h, mod_);
        axpy_add(coeff, c, pivots_[k].u, mod_);
    }
    if (!all_zero(cur))
        return std::nullopt;
    return coeff;
}

bool HowellSystem::contains(const std::vector<uint64_t>& v) const
{
    check(v.size() == cols_, errc::dimension_mismatch, "vector length != cols");
    std::vector<uint64_t> cur = v;
    for (std::size_t k = 0; k < pivots_.size(); ++k) {
        uint64_t e = cur[pivcol_[k]];
        if (e == 0)
            continue;
        if (Scalar(e, mod_).valuation() < pivval_[k])
            return false;
        uint64_t c = e / p_pow(mod_, pivval_[k]);
        axpy_sub(cur, c, pivots_[k].h, mod_);
    }
    return all_zero(cur);
}

ModMatrix howell_form(const ModMatrix& m)
{
    if (m.rows == 0)
        return ModMatrix(m.mod, 0, m.cols);
    return HowellSystem(m, false).canonical();
}

ModMatrix left_kernel(const ModMatrix& m)
{
    return HowellSystem(m).kernel();
}

} // namespace drw
