// (b,B)-bicomplex models of negative cyclic, periodic and cyclic homology,
// the CW (column) and HKR bifiltrations, the Beilinson pipeline comparing
// heart extractions with Hodge-truncated de Rham complexes, and the HP
// cofiber-sequence assembly.
//
// Conventions: the periodicity generator u has homological degree -2 and
// column index s counts u-powers, so column s contributes C_{n+2s} to total
// degree n. The total differential is b + uB: (dx)_s = b x_s + B x_{s-1}.
// Negative cyclic = columns s >= 0, periodic = all columns, cyclic = the
// quotient by columns >= 1 (equivalently columns s <= 0).
#pragma once

#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cychom/derham.hpp"
#include "cychom/filtered.hpp"
#include "cychom/hochschild.hpp"
#include "cychom/mixed.hpp"

namespace cychom {

enum class CyclicVariant { negative, periodic, cyclic };

inline std::string variant_name(CyclicVariant v) {
    switch (v) {
        case CyclicVariant::negative: return "negative";
        case CyclicVariant::periodic: return "periodic";
        case CyclicVariant::cyclic: return "cyclic";
    }
    return "?";
}

template <class K>
struct CyclicModel {
    CyclicVariant variant = CyclicVariant::negative;
    MixedComplex<K> source;
    int s_min = 0, s_max = 0;  // column range (inclusive)
    ChainComplex<K> total;     // build window extends the request by one on each side
    int exact_min = 0, exact_max = 0;  // degrees where homology is that of the true model
    bool window_limited = false;

    struct Block {
        int column;
        int offset;
        int dim;
    };
    std::map<Key, std::vector<Block>> layout;

    const std::vector<Block>& blocks(int n, int w) const {
        static const std::vector<Block> empty;
        auto it = layout.find({n, w});
        return it == layout.end() ? empty : it->second;
    }

    // chain in C_{n+2s}(w) placed in column s of total degree n
    Vec<K> embed(int n, int w, int s, const Vec<K>& chain) const {
        Vec<K> out(static_cast<std::size_t>(total.dim(n, w)), K(0));
        for (const Block& b : blocks(n, w))
            if (b.column == s) {
                if (static_cast<int>(chain.size()) != b.dim)
                    throw std::invalid_argument("CyclicModel::embed: size mismatch");
                for (int i = 0; i < b.dim; ++i)
                    out[static_cast<std::size_t>(b.offset + i)] = chain[static_cast<std::size_t>(i)];
                return out;
            }
        throw window_error("CyclicModel::embed: column " + std::to_string(s) +
                           " absent in degree " + std::to_string(n));
    }
};

struct TotalizeOptions {
    int s_floor = 0;                  // lowest column for the negative variant
    std::optional<int> max_columns;   // cap on column count; triggers window_limited
};

template <class K>
CyclicModel<K> totalize(const MixedComplex<K>& m, CyclicVariant variant, int d_min, int d_max,
                        TotalizeOptions opts = {}) {
    const ChainComplex<K>& c = m.complex;
    CyclicModel<K> out;
    out.variant = variant;
    out.source = m;
    out.exact_min = d_min;
    out.exact_max = d_max;
    int a = d_min - 1, b = d_max + 1;  // margin so homology is exact on [d_min, d_max]

    // columns with possible content in the build window
    auto floor_div = [](int num, int den) {
        int q = num / den;
        return (num % den != 0 && (num < 0) != (den < 0)) ? q - 1 : q;
    };
    int hi_by_content = floor_div(c.d_max() - a, 2);          // n + 2s <= c.d_max, some n >= a
    int lo_by_content = -floor_div(b - c.d_min(), 2);         // n + 2s >= c.d_min, some n <= b
    switch (variant) {
        case CyclicVariant::negative:
            out.s_min = opts.s_floor;
            out.s_max = std::max(hi_by_content, opts.s_floor);
            break;
        case CyclicVariant::periodic:
            out.s_min = std::min(lo_by_content, 0);
            out.s_max = std::max(hi_by_content, 0);
            break;
        case CyclicVariant::cyclic:
            out.s_min = std::min(lo_by_content, 0);
            out.s_max = 0;
            break;
    }
    if (opts.max_columns && out.s_max - out.s_min + 1 > *opts.max_columns) {
        out.s_max = out.s_min + *opts.max_columns - 1;
        out.window_limited = true;
    }

    out.total = ChainComplex<K>(a, b, c.weight_cap());
    for (int w = 0; w <= c.weight_cap(); ++w)
        for (int n = a; n <= b; ++n) {
            int dim = 0;
            std::vector<typename CyclicModel<K>::Block> blocks;
            for (int s = out.s_min; s <= out.s_max; ++s) {
                int d = c.dim(n + 2 * s, w);
                if (d == 0) continue;
                blocks.push_back({s, dim, d});
                dim += d;
            }
            if (dim == 0) continue;
            out.total.set_module(n, w, BasedModule{dim, {}});
            out.layout[{n, w}] = std::move(blocks);
        }

    // d(x)_s = b x_s + B x_{s-1}
    for (int w = 0; w <= c.weight_cap(); ++w)
        for (int n = a + 1; n <= b; ++n) {
            auto src = out.layout.find({n, w});
            auto tgt = out.layout.find({n - 1, w});
            if (src == out.layout.end() || tgt == out.layout.end()) continue;
            Matrix<K> d(out.total.dim(n - 1, w), out.total.dim(n, w));
            std::map<int, typename CyclicModel<K>::Block> tgt_by_col;
            for (const auto& blk : tgt->second) tgt_by_col[blk.column] = blk;
            for (const auto& blk : src->second) {
                auto t_same = tgt_by_col.find(blk.column);  // b keeps the column
                if (t_same != tgt_by_col.end()) {
                    c.diff(n + 2 * blk.column, w).for_each([&](int i, int j, const K& v) {
                        d.set(t_same->second.offset + i, blk.offset + j, v);
                    });
                }
                auto t_up = tgt_by_col.find(blk.column + 1);  // B raises the column
                if (t_up != tgt_by_col.end()) {
                    m.B(n + 2 * blk.column, w).for_each([&](int i, int j, const K& v) {
                        d.set(t_up->second.offset + i, blk.offset + j, v);
                    });
                }
            }
            out.total.set_diff(n, w, d);
        }
    out.total.validate();
    return out;
}

// subspace of a total slice assembled from per-column subspaces
template <class K>
Subspace<K> column_block_subspace(const CyclicModel<K>& model, int n, int w,
                                  const std::function<Subspace<K>(int)>& per_column) {
    int total_dim = model.total.dim(n, w);
    std::vector<Vec<K>> cols;
    for (const auto& blk : model.blocks(n, w)) {
        Subspace<K> sp = per_column(blk.column);
        if (sp.dim() == 0) continue;
        if (sp.ambient_dim() != blk.dim)
            throw std::invalid_argument("column_block_subspace: ambient mismatch");
        for (int j = 0; j < sp.dim(); ++j) {
            Vec<K> v(static_cast<std::size_t>(total_dim), K(0));
            Vec<K> col = sp.basis().column(j);
            for (int i = 0; i < blk.dim; ++i) v[static_cast<std::size_t>(blk.offset + i)] = col[static_cast<std::size_t>(i)];
            cols.push_back(std::move(v));
        }
    }
    return Subspace<K>::span(Matrix<K>::from_columns(total_dim, cols));
}

// CW filtration: step s = columns >= s (closed because B raises the column)
template <class K>
FilteredComplex<K> cw_filtration(const CyclicModel<K>& model) {
    if (model.variant != CyclicVariant::negative)
        throw unsupported_error("cw_filtration: negative variant required");
    const ChainComplex<K>& c = model.source.complex;
    std::vector<Subcomplex<K>> steps;
    for (int s0 = model.s_min; s0 <= model.s_max + 1; ++s0) {
        Subcomplex<K> step;
        for (int w = 0; w <= c.weight_cap(); ++w)
            for (int n = model.total.d_min(); n <= model.total.d_max(); ++n) {
                if (model.total.dim(n, w) == 0) continue;
                Subspace<K> sp = column_block_subspace<K>(model, n, w, [&](int s) {
                    int dim = c.dim(n + 2 * s, w);
                    return s >= s0 ? Subspace<K>::full(dim) : Subspace<K>::zero(dim);
                });
                if (sp.dim() > 0) step.set(n, w, sp);
            }
        steps.push_back(std::move(step));
    }
    return FilteredComplex<K>(model.total, std::move(steps));
}

// HKR filtration on a totalization: step t totalizes the tower step t
template <class K>
FilteredComplex<K> hkr_filtration(const CyclicModel<K>& model, const FilteredComplex<K>& tower) {
    const ChainComplex<K>& c = model.source.complex;
    std::vector<Subcomplex<K>> steps;
    for (int t = 0; t <= tower.top(); ++t) {
        Subcomplex<K> step;
        for (int w = 0; w <= c.weight_cap(); ++w)
            for (int n = model.total.d_min(); n <= model.total.d_max(); ++n) {
                if (model.total.dim(n, w) == 0) continue;
                Subspace<K> sp = column_block_subspace<K>(
                    model, n, w, [&](int s) { return tower.slice(t, n + 2 * s, w); });
                if (sp.dim() > 0) step.set(n, w, sp);
            }
        steps.push_back(std::move(step));
    }
    return FilteredComplex<K>(model.total, std::move(steps));
}

// ---------------------------------------------------------------------------
// bifiltration F^{s,t} = columns >= s of the HKR step t

template <class K>
BifilteredComplex<K> bifiltration(const AlgebraPresentation& r, int w_cap, int d_min, int d_max) {
    HochschildMixed<K> hm = connes_B<K>(r, w_cap);
    CyclicModel<K> model = totalize(hm.mixed, CyclicVariant::negative, d_min, d_max);
    HKRTower<K> tower = hkr_tower(hm.mixed);
    const ChainComplex<K>& c = hm.mixed.complex;
    int s_cap = model.s_max + 1;
    int t_cap = tower.filtration.top();
    std::map<std::pair<int, int>, Subcomplex<K>> lattice;
    for (int s0 = 0; s0 <= s_cap; ++s0)
        for (int t = 0; t <= t_cap; ++t) {
            Subcomplex<K> step;
            for (int w = 0; w <= c.weight_cap(); ++w)
                for (int n = model.total.d_min(); n <= model.total.d_max(); ++n) {
                    if (model.total.dim(n, w) == 0) continue;
                    Subspace<K> sp = column_block_subspace<K>(model, n, w, [&](int s) {
                        if (s < s0) return Subspace<K>::zero(c.dim(n + 2 * s, w));
                        return tower.filtration.slice(t, n + 2 * s, w);
                    });
                    if (sp.dim() > 0) step.set(n, w, sp);
                }
            lattice[{s0, t}] = std::move(step);
        }
    return BifilteredComplex<K>(model.total, s_cap, t_cap, std::move(lattice));
}

// ---------------------------------------------------------------------------
// heart ↔ cochain-complex comparison plumbing

// recorded comparison scalar between the heart differential (the Connes
// operator on homology under the HKR identification) and the de Rham
// differential; derived for k[x] in the unit tests
template <class K>
K heart_de_rham_scale() {
    return K(1);
}

template <class K>
struct HeartComparison {
    std::map<Key, int> heart_dims;  // (cochain degree, weight), nonzero entries only
    std::map<Key, int> target_dims;
    bool dims_match = true;
    bool differentials_match = true;
    bool identification_ok = true;
    K normalization = heart_de_rham_scale<K>();
    bool window_limited = false;
    std::vector<std::string> mismatches;

    bool ok() const { return dims_match && differentials_match && identification_ok; }

    void note(const std::string& what) {
        if (mismatches.size() < 8) mismatches.push_back(what);
    }
};

// Compares a heart extraction against a target cochain complex whose degree-t
// module carries the Ω^t(w) basis (a stupid truncation of the de Rham
// complex). `place` embeds a Hochschild chain in C_t(w) as a heart-ambient
// vector in the column pairing cochain degree t with homology degree
// level - t; it returns nothing when the column is outside the model.
template <class K>
HeartComparison<K> compare_heart_with_cochain(
    const AlgebraPresentation& r, const HochschildComplex<K>& hh, const HeartResult<K>& heart,
    const CochainComplex<K>& target, int t_hi,
    const std::function<std::optional<Vec<K>>(int t, int w, const Vec<K>& chain)>& place) {
    HeartComparison<K> cmp;
    int w_cap = hh.complex.weight_cap();

    std::map<Key, Matrix<K>> phi;
    for (int t = 0; t <= t_hi; ++t)
        for (int w = 0; w <= w_cap; ++w) {
            int hdim = heart.complex.dim(t, w);
            int tdim = target.dim(t, w);
            if (hdim) cmp.heart_dims[{t, w}] = hdim;
            if (tdim) cmp.target_dims[{t, w}] = tdim;
            if (hdim != tdim) {
                cmp.dims_match = false;
                cmp.note("dimension mismatch at cochain degree " + std::to_string(t) +
                         ", weight " + std::to_string(w) + ": heart " + std::to_string(hdim) +
                         " vs target " + std::to_string(tdim));
                continue;
            }
            if (hdim == 0) continue;
            Matrix<K> hkr = hkr_map<K>(r, hh, t, w);
            if (hkr.cols() != hdim) {
                cmp.identification_ok = false;
                cmp.note("basis count mismatch at (" + std::to_string(t) + "," +
                         std::to_string(w) + ")");
                continue;
            }
            Matrix<K> id(hdim, hdim);
            bool placed_ok = true;
            for (int j = 0; j < hkr.cols() && placed_ok; ++j) {
                std::optional<Vec<K>> ambient = place(t, w, hkr.column(j));
                if (!ambient) {
                    placed_ok = false;
                    break;
                }
                Vec<K> cls = heart.classify(t, w, *ambient);
                for (int i = 0; i < hdim; ++i)
                    if (!cls[i].is_zero()) id.set(i, j, cls[i]);
            }
            if (!placed_ok || rank(id) != hdim) {
                cmp.identification_ok = false;
                cmp.note("HKR identification not invertible at (" + std::to_string(t) + "," +
                         std::to_string(w) + ")");
                continue;
            }
            phi[{t, w}] = std::move(id);
        }

    if (!cmp.ok()) return cmp;

    // transported heart differentials against the target matrices
    std::optional<K> observed;
    for (int t = 0; t < t_hi; ++t)
        for (int w = 0; w <= w_cap; ++w) {
            auto p0 = phi.find({t, w});
            auto p1 = phi.find({t + 1, w});
            if (p0 == phi.end() || p1 == phi.end()) continue;
            Matrix<K> transported = inverse(p1->second) * heart.complex.diff(t, w) * p0->second;
            Matrix<K> expected = target.diff(t, w);
            if (!observed) {
                expected.for_each([&](int i, int j, const K& v) {
                    if (!observed && !transported.get(i, j).is_zero())
                        observed = transported.get(i, j) / v;
                });
            }
            K scale = observed ? *observed : heart_de_rham_scale<K>();
            if (!(transported == expected.scaled(scale))) {
                cmp.differentials_match = false;
                cmp.note("differential mismatch at cochain degree " + std::to_string(t) +
                         ", weight " + std::to_string(w));
            }
        }
    if (observed) {
        cmp.normalization = *observed;
        if (!(*observed == heart_de_rham_scale<K>())) {
            cmp.differentials_match = false;
            cmp.note("normalization scalar differs from the recorded constant");
        }
    }
    return cmp;
}

// ---------------------------------------------------------------------------
// the headline pipeline: heart at 2u of the HKR filtration on the CW-step-s
// negative cyclic model, compared with (Ω^{>= u+s}, d)

template <class K>
struct PipelineResult {
    HeartResult<K> heart;
    HeartComparison<K> comparison;
    bool compared = false;
    bool window_limited = false;
};

template <class K>
PipelineResult<K> beilinson_pipeline(const AlgebraPresentation& r, int w_cap, int u, int s_level = 0,
                                     std::optional<int> max_columns = std::nullopt) {
    HochschildMixed<K> hm = connes_B<K>(r, w_cap);
    HKRTower<K> tower = hkr_tower(hm.mixed);
    int top = tower.filtration.top();
    TotalizeOptions opts;
    opts.s_floor = s_level;
    opts.max_columns = max_columns;
    CyclicModel<K> model =
        totalize(hm.mixed, CyclicVariant::negative, 2 * u - top - 1, 2 * u + 1, opts);
    FilteredComplex<K> f = hkr_filtration(model, tower.filtration);

    PipelineResult<K> out;
    out.window_limited = model.window_limited;
    out.heart = beilinson_heart(f, 2 * u);
    if (!r.is_polynomial()) return out;

    DeRhamComplex<K> dr = de_rham_complex<K>(r, w_cap);
    CochainComplex<K> target = hodge_truncate(dr.complex, u + s_level);
    auto place = [&model, u, s_level](int t, int w, const Vec<K>& chain) -> std::optional<Vec<K>> {
        int s = t - u;
        if (s < s_level) return std::nullopt;
        return model.embed(2 * u - t, w, s, chain);
    };
    out.comparison = compare_heart_with_cochain<K>(
        r, hm.hochschild, out.heart, target, std::max(top - 1, r.num_generators()), place);
    out.comparison.window_limited = model.window_limited;
    out.compared = true;
    return out;
}

// Eq.(1) support pattern: the heart of the HKR filtration on the CW-step-s
// model at level r' has gr^t content exactly when r' is even and
// r' <= 2t - 2s, in which case it is Ω^t.
template <class K>
bool eq1_support_check(const AlgebraPresentation& r, int w_cap, int s_level, int r_lo, int r_hi,
                       std::string* first_failure = nullptr) {
    HochschildMixed<K> hm = connes_B<K>(r, w_cap);
    HKRTower<K> tower = hkr_tower(hm.mixed);
    int top = tower.filtration.top();
    TotalizeOptions opts;
    opts.s_floor = s_level;
    CyclicModel<K> model =
        totalize(hm.mixed, CyclicVariant::negative, r_lo - top - 1, r_hi + 1, opts);
    FilteredComplex<K> f = hkr_filtration(model, tower.filtration);
    DeRhamComplex<K> dr = de_rham_complex<K>(r, w_cap);

    for (int level = r_lo; level <= r_hi; ++level) {
        HeartResult<K> heart = beilinson_heart(f, level);
        for (int t = 0; t < top; ++t)
            for (int w = 0; w <= w_cap; ++w) {
                bool supported = (((level % 2) + 2) % 2 == 0) && (level <= 2 * t - 2 * s_level);
                int expect = supported ? dr.dim(t, w) : 0;
                if (heart.complex.dim(t, w) != expect) {
                    if (first_failure) {
                        std::ostringstream os;
                        os << "level " << level << " t " << t << " w " << w << ": dim "
                           << heart.complex.dim(t, w) << " expected " << expect;
                        *first_failure = os.str();
                    }
                    return false;
                }
            }
    }
    return true;
}

// ---------------------------------------------------------------------------
// circle heart: generic extraction for an arbitrary mixed complex

template <class K>
struct CircleHeartResult {
    CochainComplex<K> extracted;  // heart at 2n of the totalized Postnikov tower
    CochainComplex<K> direct;     // (H_{• >= n}(M), induced B)
    bool equal = false;
};

template <class K>
CircleHeartResult<K> circle_heart(const MixedComplex<K>& m, int n) {
    const ChainComplex<K>& c = m.complex;
    HKRTower<K> tower = hkr_tower(m);  // Postnikov tower; needs degrees >= 0
    int top = tower.filtration.top();
    CyclicModel<K> model = totalize(m, CyclicVariant::negative, 2 * n - top - 1, 2 * n + 1);
    FilteredComplex<K> f = hkr_filtration(model, tower.filtration);
    HeartResult<K> heart = beilinson_heart(f, 2 * n);

    CircleHeartResult<K> out;
    out.extracted = heart.complex;

    // direct side: homology of M with the induced Connes operator
    int c_lo = std::max(n, c.d_min());
    out.direct =
        CochainComplex<K>::from_cohomological_window(0, std::max(top - 1, 0), c.weight_cap());
    std::map<Key, HomologySlice<K>> h;
    for (int i = c_lo; i <= c.d_max(); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w) {
            HomologySlice<K> hs = homology(c, i, w);
            if (hs.dim) out.direct.set_module(i, w, BasedModule{hs.dim, {}});
            h[{i, w}] = std::move(hs);
        }
    for (int i = c_lo; i < c.d_max(); ++i)
        for (int w = 0; w <= c.weight_cap(); ++w) {
            const HomologySlice<K>& hs = h.at({i, w});
            const HomologySlice<K>& ht = h.at({i + 1, w});
            if (hs.dim == 0 || ht.dim == 0) continue;
            Matrix<K> induced(ht.dim, hs.dim);
            Matrix<K> mapped = m.B(i, w) * hs.reps();
            for (int j = 0; j < hs.dim; ++j) {
                Vec<K> cls = ht.class_of(mapped.column(j));
                for (int k = 0; k < ht.dim; ++k)
                    if (!cls[k].is_zero()) induced.set(k, j, cls[k]);
            }
            out.direct.set_diff(i, w, induced);
        }
    out.direct.validate();

    // compare through the column placement H_i(M) -> H_{2n-i}(gr^i)
    out.equal = true;
    std::map<Key, Matrix<K>> phi;
    for (int i = 0; i < top && out.equal; ++i)
        for (int w = 0; w <= c.weight_cap() && out.equal; ++w) {
            int hdim = out.extracted.dim(i, w);
            bool in_range = i >= c_lo && i <= c.d_max();
            int ddim = in_range ? out.direct.dim(i, w) : 0;
            if (ddim != hdim) {
                out.equal = false;
                continue;
            }
            if (ddim == 0) continue;
            const HomologySlice<K>& hs = h.at({i, w});
            Matrix<K> id(hdim, ddim);
            for (int j = 0; j < ddim; ++j) {
                Vec<K> ambient = model.embed(2 * n - i, w, i - n, hs.reps().column(j));
                Vec<K> cls = heart.classify(i, w, ambient);
                for (int k = 0; k < hdim; ++k)
                    if (!cls[k].is_zero()) id.set(k, j, cls[k]);
            }
            if (rank(id) != hdim) {
                out.equal = false;
                continue;
            }
            phi[{i, w}] = std::move(id);
        }
    // transported heart differentials equal the induced B on homology
    for (int i = 0; i + 1 < top && out.equal; ++i)
        for (int w = 0; w <= c.weight_cap() && out.equal; ++w) {
            auto p0 = phi.find({i, w});
            auto p1 = phi.find({i + 1, w});
            if (p0 == phi.end() || p1 == phi.end()) continue;
            Matrix<K> lhs = out.extracted.diff(i, w) * p0->second;
            Matrix<K> rhs = p1->second * out.direct.diff(i, w);
            if (!(lhs == rhs)) out.equal = false;
        }
    return out;
}

// ---------------------------------------------------------------------------
// HP pipeline: strict sequence (negative columns ⊆ periodic columns, cyclic
// quotient), Beilinson hearts on all sides, and the cone assembly of gr^u_B HP

template <class K>
struct HpResult {
    ChainComplex<K> assembled;         // cone of B_{u+1}(0) into B_u(0)
    HeartComparison<K> hp_vs_de_rham;  // heart of the periodic model vs (Ω^•, d)
    HeartComparison<K> hcneg_vs_de_rham;  // heart of the negative model vs (Ω^{>=u}, d)
    HeartComparison<K> quot_vs_de_rham;   // heart of the quotient vs (Ω^{<=u-1}, d)
    bool compared = false;             // de Rham comparisons ran (polynomial input)
    bool three_term_ok = false;        // 0 -> Ω^{>=u} -> Ω^• -> Ω^{<=u-1} -> 0 on hearts
    bool fiber_side_ok = false;        // fiber heart at 2u-1 has Ω^{<=u-1} dimensions
    bool cone_homology_ok = false;     // H_*(assembled) = de Rham cohomology, shifted by 2u
    bool fiber_is_shifted_cyclic = false;  // H_*(fiber) = H_{*-1}(cyclic model)
    bool les_ok = false;               // long exact sequence of the strict SES
    bool window_limited = false;
    std::vector<std::string> notes;
};

template <class K>
HpResult<K> hp_pipeline(const AlgebraPresentation& r, int w_cap, int u) {
    HochschildMixed<K> hm = connes_B<K>(r, w_cap);
    HKRTower<K> tower = hkr_tower(hm.mixed);
    int top = tower.filtration.top();
    int d_min = std::min(2 * u - top - 1, -1);
    int d_max = std::max(2 * u + 1, w_cap + 1);

    CyclicModel<K> P = totalize(hm.mixed, CyclicVariant::periodic, d_min, d_max);
    CyclicModel<K> N = totalize(hm.mixed, CyclicVariant::negative, d_min, d_max);
    CyclicModel<K> C = totalize(hm.mixed, CyclicVariant::cyclic, d_min, d_max);

    HpResult<K> out;
    out.window_limited = P.window_limited || N.window_limited || C.window_limited;

    // N -> P inclusion as a chain map (column-block placement)
    ChainMap<K> incl(N.total, P.total);
    for (int w = 0; w <= w_cap; ++w)
        for (int n = N.total.d_min(); n <= N.total.d_max(); ++n) {
            if (N.total.dim(n, w) == 0) continue;
            Matrix<K> blockm(P.total.dim(n, w), N.total.dim(n, w));
            std::map<int, typename CyclicModel<K>::Block> pcols;
            for (const auto& bk : P.blocks(n, w)) pcols[bk.column] = bk;
            for (const auto& bk : N.blocks(n, w)) {
                const auto& pb = pcols.at(bk.column);
                for (int i = 0; i < bk.dim; ++i) blockm.set(pb.offset + i, bk.offset + i, K(1));
            }
            incl.set_block(n, w, blockm);
        }
    incl.validate();

    // N as a subcomplex of P, and the strict quotient Q = P/N ≅ HC[2]
    Subcomplex<K> n_in_p;
    for (int w = 0; w <= w_cap; ++w)
        for (int n = P.total.d_min(); n <= P.total.d_max(); ++n) {
            if (P.total.dim(n, w) == 0) continue;
            Subspace<K> sp = column_block_subspace<K>(P, n, w, [&](int s) {
                int dim = hm.mixed.complex.dim(n + 2 * s, w);
                return s >= 0 ? Subspace<K>::full(dim) : Subspace<K>::zero(dim);
            });
            if (sp.dim() > 0) n_in_p.set(n, w, sp);
        }
    QuotientComplex<K> Q = quotient_complex(P.total, full_subcomplex(P.total), n_in_p);

    // HKR filtrations on the three models
    FilteredComplex<K> FP = hkr_filtration(P, tower.filtration);
    FilteredComplex<K> FN = hkr_filtration(N, tower.filtration);
    std::vector<Subcomplex<K>> q_steps;
    for (int t = 0; t <= tower.filtration.top(); ++t) {
        Subcomplex<K> step;
        for (int w = 0; w <= w_cap; ++w)
            for (int n = P.total.d_min(); n <= P.total.d_max(); ++n) {
                const QuotientData<K>* qd = Q.slice(n, w);
                if (!qd || qd->dim == 0) continue;
                Subspace<K> src = FP.slice(t, n, w);
                if (src.dim() == 0) continue;
                Matrix<K> img(qd->dim, src.dim());
                for (int j = 0; j < src.dim(); ++j) {
                    Vec<K> cls = qd->project(src.basis().column(j));
                    for (int i = 0; i < qd->dim; ++i)
                        if (!cls[i].is_zero()) img.set(i, j, cls[i]);
                }
                Subspace<K> sp = image_basis(img);
                if (sp.dim() > 0) step.set(n, w, sp);
            }
        q_steps.push_back(std::move(step));
    }
    FilteredComplex<K> FQ(Q.complex, std::move(q_steps));

    HeartResult<K> heart_p = beilinson_heart(FP, 2 * u);
    HeartResult<K> heart_n = beilinson_heart(FN, 2 * u);
    HeartResult<K> heart_q = beilinson_heart(FQ, 2 * u);

    // fiber of N -> P with its HKR filtration
    ConeFiber<K> nf = cone_and_fiber(incl);
    std::vector<Subcomplex<K>> fb_steps;
    for (int t = 0; t <= tower.filtration.top(); ++t) {
        Subcomplex<K> step;
        for (int w = 0; w <= w_cap; ++w)
            for (int n = nf.fiber.d_min(); n <= nf.fiber.d_max(); ++n) {
                int pd = P.total.dim(n + 1, w);
                int nd = N.total.dim(n, w);
                if (pd + nd == 0) continue;
                Subspace<K> sp_p = FP.slice(t, n + 1, w);
                Subspace<K> sp_n = FN.slice(t, n, w);
                if (sp_p.dim() + sp_n.dim() == 0) continue;
                Matrix<K> cols(pd + nd, sp_p.dim() + sp_n.dim());
                sp_p.basis().for_each([&](int i, int j, const K& v) { cols.set(i, j, v); });
                sp_n.basis().for_each(
                    [&](int i, int j, const K& v) { cols.set(pd + i, sp_p.dim() + j, v); });
                step.set(n, w, Subspace<K>::span(cols));
            }
        fb_steps.push_back(std::move(step));
    }
    FilteredComplex<K> FFb(nf.fiber, std::move(fb_steps));
    HeartResult<K> heart_fb = beilinson_heart(FFb, 2 * u - 1);

    // fiber homology matches the cyclic model shifted by one
    {
        bool ok = true;
        for (int w = 0; w <= w_cap && ok; ++w)
            for (int n = d_min + 1; n <= d_max - 2 && ok; ++n) {
                int lhs = homology(nf.fiber, n, w).dim;
                int rhs = homology(C.total, n - 1, w).dim;
                if (lhs != rhs) {
                    ok = false;
                    out.notes.push_back("fiber vs cyclic[1] failure at degree " +
                                        std::to_string(n) + ", weight " + std::to_string(w));
                }
            }
        out.fiber_is_shifted_cyclic = ok;
    }

    // long exact sequence of 0 -> N -> P -> Q -> 0
    {
        bool ok = true;
        StrictSES<K> ses{P.total, n_in_p, materialize(P.total, n_in_p), Q};
        ChainMap<K> ai(ses.a.complex, P.total);
        for (const auto& [key, sp] : n_in_p.slices) ai.set_block(key.first, key.second, sp.basis());
        for (int w = 0; w <= w_cap && ok; ++w)
            for (int n = d_min + 1; n <= d_max - 1 && ok; ++n) {
                HomologySlice<K> ha = homology(ses.a.complex, n, w);
                HomologySlice<K> hx = homology(P.total, n, w);
                HomologySlice<K> hc = homology(ses.c.complex, n, w);
                HomologySlice<K> ha1 = homology(ses.a.complex, n - 1, w);
                Matrix<K> i_star = homology_induced(ai, n, w, ha, hx);
                Matrix<K> p_star(hc.dim, hx.dim);
                for (int j = 0; j < hx.dim; ++j) {
                    Vec<K> cls = hc.class_of(ses.c.project(n, w, hx.reps().column(j)));
                    for (int i = 0; i < hc.dim; ++i)
                        if (!cls[i].is_zero()) p_star.set(i, j, cls[i]);
                }
                Matrix<K> delta = connecting_map(ses, n, w, hc, ha1);
                if (!(p_star * i_star).is_zero() ||
                    kernel_basis(p_star).dim() != image_basis(i_star).dim() ||
                    !(delta * p_star).is_zero() ||
                    kernel_basis(delta).dim() != image_basis(p_star).dim()) {
                    ok = false;
                    out.notes.push_back("long exact sequence failure at degree " +
                                        std::to_string(n) + ", weight " + std::to_string(w));
                }
            }
        out.les_ok = ok;
    }

    // cone assembly of gr^u_B HP from the double-speed Whitehead tower
    {
        FilteredComplex<K> bu = beilinson_truncate(FP, 2 * u, false);
        FilteredComplex<K> bu1 = beilinson_truncate(FP, 2 * u + 2, false);
        MaterializedSub<K> ku = materialize(P.total, bu.step(0));
        MaterializedSub<K> ku1 = materialize(P.total, bu1.step(0));
        ChainMap<K> step_incl(ku1.complex, ku.complex);
        for (const auto& [key, sp] : bu1.step(0).slices) {
            auto [n, w] = key;
            Subspace<K> outer = bu.step(0).slice(n, w, P.total.dim(n, w));
            step_incl.set_block(n, w, outer.coords(sp.basis()));
        }
        step_incl.validate();
        out.assembled = cone_and_fiber(step_incl).cone;
    }

    if (!r.is_polynomial()) return out;

    // de Rham comparisons (smooth branch)
    out.compared = true;
    DeRhamComplex<K> dr = de_rham_complex<K>(r, w_cap);
    int t_hi = std::max(top - 1, r.num_generators());

    auto place_p = [&P, u](int t, int w, const Vec<K>& chain) -> std::optional<Vec<K>> {
        return P.embed(2 * u - t, w, t - u, chain);
    };
    out.hp_vs_de_rham =
        compare_heart_with_cochain<K>(r, hm.hochschild, heart_p, dr.complex, t_hi, place_p);
    out.hp_vs_de_rham.window_limited = out.window_limited;

    auto place_n = [&N, u](int t, int w, const Vec<K>& chain) -> std::optional<Vec<K>> {
        if (t - u < 0) return std::nullopt;
        return N.embed(2 * u - t, w, t - u, chain);
    };
    out.hcneg_vs_de_rham = compare_heart_with_cochain<K>(
        r, hm.hochschild, heart_n, hodge_truncate(dr.complex, u), t_hi, place_n);

    auto place_q = [&P, &Q, u](int t, int w, const Vec<K>& chain) -> std::optional<Vec<K>> {
        if (t - u >= 0) return std::nullopt;
        return Q.project(2 * u - t, w, P.embed(2 * u - t, w, t - u, chain));
    };
    out.quot_vs_de_rham = compare_heart_with_cochain<K>(
        r, hm.hochschild, heart_q, hodge_cotruncate(dr.complex, u - 1), t_hi, place_q);

    // three-term heart sequence: exactness and commutation
    {
        bool ok = out.hcneg_vs_de_rham.ok() && out.quot_vs_de_rham.ok();
        auto alpha = heart_map(FN, heart_n, FP, heart_p, incl);
        std::map<Key, Matrix<K>> beta;
        for (int t = 0; t < top && ok; ++t)
            for (int w = 0; w <= w_cap && ok; ++w) {
                int hp_dim = heart_p.complex.dim(t, w);
                int hn_dim = heart_n.complex.dim(t, w);
                int hq_dim = heart_q.complex.dim(t, w);
                if (hn_dim + hq_dim != hp_dim) {
                    ok = false;
                    out.notes.push_back("three-term dimension failure at (" + std::to_string(t) +
                                        "," + std::to_string(w) + ")");
                    break;
                }
                Matrix<K> b(hq_dim, hp_dim);
                if (hp_dim && hq_dim >= 0) {
                    auto hit = heart_p.h.find({t, w});
                    for (int j = 0; j < hp_dim; ++j) {
                        Vec<K> lifted =
                            heart_p.gr.at(t).lift(2 * u - t, w, hit->second.reps().column(j));
                        Vec<K> q_vec = Q.project(2 * u - t, w, lifted);
                        Vec<K> cls = heart_q.classify(t, w, q_vec);
                        for (int i = 0; i < hq_dim; ++i)
                            if (!cls[i].is_zero()) b.set(i, j, cls[i]);
                    }
                }
                Matrix<K> a = alpha.count({t, w}) ? alpha.at({t, w}) : Matrix<K>(hp_dim, hn_dim);
                if (rank(a) != hn_dim || rank(b) != hq_dim || !(b * a).is_zero()) {
                    ok = false;
                    out.notes.push_back("three-term exactness failure at (" + std::to_string(t) +
                                        "," + std::to_string(w) + ")");
                }
                beta[{t, w}] = std::move(b);
            }
        // cochain-map squares
        for (int t = 0; t + 1 < top && ok; ++t)
            for (int w = 0; w <= w_cap && ok; ++w) {
                Matrix<K> a0 = alpha.count({t, w})
                                   ? alpha.at({t, w})
                                   : Matrix<K>(heart_p.complex.dim(t, w), heart_n.complex.dim(t, w));
                Matrix<K> a1 = alpha.count({t + 1, w})
                                   ? alpha.at({t + 1, w})
                                   : Matrix<K>(heart_p.complex.dim(t + 1, w),
                                               heart_n.complex.dim(t + 1, w));
                if (!(heart_p.complex.diff(t, w) * a0 == a1 * heart_n.complex.diff(t, w))) {
                    ok = false;
                    out.notes.push_back("inclusion does not commute with heart differentials");
                }
                Matrix<K> b0 = beta.count({t, w})
                                   ? beta.at({t, w})
                                   : Matrix<K>(heart_q.complex.dim(t, w), heart_p.complex.dim(t, w));
                Matrix<K> b1 = beta.count({t + 1, w})
                                   ? beta.at({t + 1, w})
                                   : Matrix<K>(heart_q.complex.dim(t + 1, w),
                                               heart_p.complex.dim(t + 1, w));
                if (!(heart_q.complex.diff(t, w) * b0 == b1 * heart_p.complex.diff(t, w))) {
                    ok = false;
                    out.notes.push_back("projection does not commute with heart differentials");
                }
            }
        out.three_term_ok = ok;
    }

    // fiber heart at 2u-1 realizes the stupid quotient Ω^{<= u-1}
    {
        bool ok = true;
        for (int t = 0; t < top && ok; ++t)
            for (int w = 0; w <= w_cap; ++w) {
                int expect = t <= u - 1 ? dr.dim(t, w) : 0;
                if (heart_fb.complex.dim(t, w) != expect) {
                    ok = false;
                    out.notes.push_back("fiber heart dimension failure at (" + std::to_string(t) +
                                        "," + std::to_string(w) + ")");
                    break;
                }
            }
        out.fiber_side_ok = ok;
    }

    // assembled cone computes shifted de Rham cohomology
    {
        bool ok = true;
        for (int w = 0; w <= w_cap && ok; ++w)
            for (int n = d_min + 2; n <= d_max - 1 && ok; ++n) {
                int got = homology(out.assembled, n, w).dim;
                int i = 2 * u - n;
                int expect =
                    (i >= 0 && i <= r.num_generators()) ? cohomology(dr.complex, i, w).dim : 0;
                if (got != expect) {
                    ok = false;
                    out.notes.push_back("cone homology failure at degree " + std::to_string(n) +
                                        ", weight " + std::to_string(w));
                }
            }
        out.cone_homology_ok = ok;
    }
    return out;
}

}  // namespace cychom
