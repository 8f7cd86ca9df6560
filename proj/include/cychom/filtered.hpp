// Strictly filtered complexes: graded pieces, the Beilinson t-structure
// (connective cover and heart), n-equivalence and completeness window
// checks, the spectral sequence of a filtration, and bifiltrations.
//
// A filtration is a decreasing tower of strict subcomplexes
//   F^0 ⊇ F^1 ⊇ ... ⊇ F^top
// of an ambient complex. Indices below 0 resolve to step 0 (ℕ-indexed
// towers) and indices above top resolve to step top; completeness within
// the window means step top vanishes there.
#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "cychom/complex.hpp"

namespace cychom {

template <class K>
class FilteredComplex {
public:
    FilteredComplex() = default;
    FilteredComplex(ChainComplex<K> ambient, std::vector<Subcomplex<K>> steps)
        : ambient_(std::move(ambient)), steps_(std::move(steps)) {
        if (steps_.empty()) throw std::invalid_argument("FilteredComplex: no steps");
        validate();
    }

    const ChainComplex<K>& ambient() const { return ambient_; }
    int top() const { return static_cast<int>(steps_.size()) - 1; }

    const Subcomplex<K>& step(int i) const {
        return steps_[static_cast<std::size_t>(std::clamp(i, 0, top()))];
    }

    Subspace<K> slice(int i, int n, int w) const {
        return step(i).slice(n, w, ambient_.dim(n, w));
    }

    void validate() const {
        for (std::size_t i = 0; i < steps_.size(); ++i)
            validate_subcomplex(ambient_, steps_[i], "filtration step " + std::to_string(i));
        for (std::size_t i = 0; i + 1 < steps_.size(); ++i)
            if (!subcomplex_contained(ambient_, steps_[i + 1], steps_[i]))
                throw invariant_error("FilteredComplex: step " + std::to_string(i + 1) +
                                      " not contained in step " + std::to_string(i));
    }

    // completeness at window scale: the top step vanishes in the window
    bool complete_in_window() const { return step(top()).is_zero(); }

private:
    ChainComplex<K> ambient_;
    std::vector<Subcomplex<K>> steps_;
};

// sum of two subcomplexes, slicewise
template <class K>
Subcomplex<K> subcomplex_sum(const ChainComplex<K>& c, const Subcomplex<K>& a,
                             const Subcomplex<K>& b) {
    Subcomplex<K> out;
    for (int w = 0; w <= c.weight_cap(); ++w)
        for (int n = c.d_min(); n <= c.d_max(); ++n) {
            int amb = c.dim(n, w);
            if (amb == 0) continue;
            Subspace<K> s = Subspace<K>::sum(a.slice(n, w, amb), b.slice(n, w, amb));
            if (s.dim() > 0) out.set(n, w, s);
        }
    return out;
}

// ---------------------------------------------------------------------------
// graded pieces

template <class K>
QuotientComplex<K> graded_piece(const FilteredComplex<K>& f, int i) {
    if (i < 0 || i >= f.top())
        throw window_error("graded_piece: index " + std::to_string(i) +
                           " outside [0," + std::to_string(f.top() - 1) + "]");
    return quotient_complex(f.ambient(), f.step(i), f.step(i + 1));
}

// ---------------------------------------------------------------------------
// Beilinson connective cover, strict décalage-style model:
//   (τ^B_{>=n} F)(i) in degree m = { x in F^{j(m)}_m : dx in F^{j(m-1)}_{m-1} },
//   j(m) = max(i, n-m).

template <class K>
class BeilinsonContext {
public:
    BeilinsonContext(const FilteredComplex<K>& f, int n) : f_(f), n_(n) {}

    // slice of the cover at tower index i, degree m, weight w
    Subspace<K> cover_slice(int i, int m, int w) {
        int j = std::clamp(std::max(i, n_ - m), 0, f_.top());
        int jp = std::clamp(std::max(i, n_ - m + 1), 0, f_.top());
        return tau_slice(j, jp, m, w);
    }

private:
    Subspace<K> tau_slice(int j, int jp, int m, int w) {
        if (jp <= j) return f_.slice(j, m, w);
        auto key = std::make_tuple(j, jp, m, w);
        auto it = memo_.find(key);
        if (it != memo_.end()) return it->second;
        Subspace<K> here = f_.slice(j, m, w);
        Subspace<K> target = f_.slice(jp, m - 1, w);
        Subspace<K> result;
        if (here.dim() == 0) {
            result = Subspace<K>::zero(here.ambient_dim());
        } else {
            Matrix<K> d_restricted = f_.ambient().diff(m, w) * here.basis();
            Subspace<K> pre = preimage_subspace(d_restricted, target);
            result = Subspace<K>::span(here.basis() * pre.basis());
        }
        memo_.emplace(key, result);
        return result;
    }

    const FilteredComplex<K>& f_;
    int n_;
    std::map<std::tuple<int, int, int, int>, Subspace<K>> memo_;
};

// Verifies gr^i τ^B_{>=n} = τ_{>=n-i} gr^i F slicewise (the defining
// graded-piece property of the Beilinson connective cover).
template <class K>
void assert_beilinson_graded_property(const FilteredComplex<K>& f,
                                      const FilteredComplex<K>& cover, int n) {
    const ChainComplex<K>& amb = f.ambient();
    for (int i = 0; i < f.top(); ++i) {
        QuotientComplex<K> gr = graded_piece(f, i);
        Subcomplex<K> trunc = good_truncation_slices(gr.complex, n - i);
        for (int w = 0; w <= amb.weight_cap(); ++w)
            for (int m = amb.d_min(); m <= amb.d_max(); ++m) {
                const QuotientData<K>* q = gr.slice(m, w);
                int qdim = q ? q->dim : 0;
                Subspace<K> g_i = cover.slice(i, m, w);
                Subspace<K> g_i1 = cover.slice(i + 1, m, w);
                Subspace<K> expected = trunc.slice(m, w, qdim);
                if (qdim == 0) {
                    if (g_i.dim() != g_i1.dim())
                        throw invariant_error("beilinson cover: rank drop without graded piece");
                    continue;
                }
                // image of the cover slice in gr^i coordinates
                Matrix<K> img(qdim, g_i.dim());
                for (int c = 0; c < g_i.dim(); ++c) {
                    Vec<K> cls = q->project(g_i.basis().column(c));
                    for (int r = 0; r < qdim; ++r)
                        if (!cls[r].is_zero()) img.set(r, c, cls[r]);
                }
                Subspace<K> image = image_basis(img);
                if (!(image == expected))
                    throw invariant_error("beilinson cover: graded piece differs from truncation at (" +
                                          std::to_string(m) + "," + std::to_string(w) + "), i=" +
                                          std::to_string(i));
                if (g_i.dim() - g_i1.dim() != image.dim())
                    throw invariant_error("beilinson cover: induced map on graded piece not injective");
            }
    }
}

template <class K>
FilteredComplex<K> beilinson_truncate(const FilteredComplex<K>& f, int n,
                                      bool assert_graded_property = true) {
    BeilinsonContext<K> ctx(f, n);
    const ChainComplex<K>& amb = f.ambient();
    std::vector<Subcomplex<K>> steps(static_cast<std::size_t>(f.top()) + 1);
    for (int i = 0; i <= f.top(); ++i) {
        for (int w = 0; w <= amb.weight_cap(); ++w)
            for (int m = amb.d_min(); m <= amb.d_max(); ++m) {
                if (amb.dim(m, w) == 0) continue;
                Subspace<K> s = ctx.cover_slice(i, m, w);
                if (s.dim() > 0) steps[static_cast<std::size_t>(i)].set(m, w, s);
            }
    }
    FilteredComplex<K> cover(amb, std::move(steps));
    if (assert_graded_property) assert_beilinson_graded_property(f, cover, n);
    return cover;
}

// ---------------------------------------------------------------------------
// Beilinson heart: the cochain complex
//   H_n(gr^0 F) -> H_{n-1}(gr^1 F) -> H_{n-2}(gr^2 F) -> ...
// with differentials given by the boundary maps of gr^{i+1} -> F^i/F^{i+2} -> gr^i.

template <class K>
struct HeartResult {
    CochainComplex<K> complex;                     // cochain degree i = H_{n-i}(gr^i)
    int level = 0;                                 // the n above
    std::map<int, QuotientComplex<K>> gr;          // materialized graded pieces
    std::map<Key, HomologySlice<K>> h;             // keyed by (cochain degree i, weight)

    // heart-class coordinates of an ambient cycle living in F^i
    Vec<K> classify(int i, int w, const Vec<K>& ambient_vec) const {
        auto git = gr.find(i);
        auto hit = h.find({i, w});
        if (git == gr.end() || hit == h.end() || hit->second.dim == 0) return {};
        Vec<K> qvec = git->second.project(level - i, w, ambient_vec);
        return hit->second.class_of(qvec);
    }
};

template <class K>
HeartResult<K> beilinson_heart(const FilteredComplex<K>& f, int n) {
    const ChainComplex<K>& amb = f.ambient();
    HeartResult<K> out;
    out.level = n;
    int c_top = std::max(f.top() - 1, 0);
    out.complex = CochainComplex<K>::from_cohomological_window(0, c_top, amb.weight_cap());

    for (int i = 0; i < f.top(); ++i) out.gr.emplace(i, graded_piece(f, i));

    for (int i = 0; i < f.top(); ++i) {
        int m = n - i;
        if (!amb.in_window(m)) continue;
        for (int w = 0; w <= amb.weight_cap(); ++w) {
            HomologySlice<K> hs = homology(out.gr.at(i).complex, m, w);
            if (hs.dim > 0) out.complex.set_module(i, w, BasedModule{hs.dim, {}});
            out.h[{i, w}] = std::move(hs);
        }
    }

    // differentials: lift a gr^i homology class to F^i, apply d, read in gr^{i+1}
    for (int i = 0; i + 1 < f.top(); ++i) {
        int m = n - i;
        if (!amb.in_window(m) || !amb.in_window(m - 1)) continue;
        for (int w = 0; w <= amb.weight_cap(); ++w) {
            const HomologySlice<K>& hs = out.h.at({i, w});
            const HomologySlice<K>& ht = out.h.at({i + 1, w});
            if (hs.dim == 0 || ht.dim == 0) continue;
            Matrix<K> delta(ht.dim, hs.dim);
            for (int j = 0; j < hs.dim; ++j) {
                Vec<K> lifted = out.gr.at(i).lift(m, w, hs.reps().column(j));
                Vec<K> dx = amb.diff(m, w).apply(lifted);
                Vec<K> cls = ht.class_of(out.gr.at(i + 1).project(m - 1, w, dx));
                for (int r = 0; r < ht.dim; ++r)
                    if (!cls[r].is_zero()) delta.set(r, j, cls[r]);
            }
            out.complex.set_diff(i, w, delta);
        }
    }
    out.complex.validate();  // d∘d = 0
    return out;
}

// induced map on hearts of a filtered chain map (f must respect the towers)
template <class K>
std::map<Key, Matrix<K>> heart_map(const FilteredComplex<K>& fx, const HeartResult<K>& hx,
                                   const FilteredComplex<K>& fy, const HeartResult<K>& hy,
                                   const ChainMap<K>& f) {
    if (hx.level != hy.level) throw std::invalid_argument("heart_map: level mismatch");
    std::map<Key, Matrix<K>> out;
    int n = hx.level;
    for (int i = 0; i < std::min(fx.top(), fy.top()); ++i) {
        int m = n - i;
        for (int w = 0; w <= fx.ambient().weight_cap(); ++w) {
            auto sit = hx.h.find({i, w});
            auto tit = hy.h.find({i, w});
            if (sit == hx.h.end() || tit == hy.h.end()) continue;
            const HomologySlice<K>& hs = sit->second;
            const HomologySlice<K>& ht = tit->second;
            if (hs.dim == 0 && ht.dim == 0) continue;
            Matrix<K> block(ht.dim, hs.dim);
            for (int j = 0; j < hs.dim; ++j) {
                Vec<K> lifted = hx.gr.at(i).lift(m, w, hs.reps().column(j));
                Vec<K> mapped = f.block(m, w).apply(lifted);
                Vec<K> cls = hy.classify(i, w, mapped);
                for (int r = 0; r < ht.dim; ++r)
                    if (!cls[r].is_zero()) block.set(r, j, cls[r]);
            }
            out[{i, w}] = std::move(block);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// n-equivalence: H_i((τ^B_{>=n} F)(0)) -> H_i(F(0)) is an isomorphism for i >= n

template <class K>
struct NEquivalenceReport {
    bool pass = true;
    std::optional<Key> first_failure;  // (degree, weight)
    bool window_limited = false;
};

template <class K>
NEquivalenceReport<K> n_equivalence_check(const FilteredComplex<K>& f, int n) {
    FilteredComplex<K> cover = beilinson_truncate(f, n, false);
    const ChainComplex<K>& amb = f.ambient();
    MaterializedSub<K> sub = materialize(amb, cover.step(0));
    MaterializedSub<K> base = materialize(amb, f.step(0));

    NEquivalenceReport<K> rep;
    rep.window_limited = !f.complete_in_window();
    ChainMap<K> incl(sub.complex, base.complex);
    for (const auto& [key, sp] : cover.step(0).slices) {
        auto [m, w] = key;
        Subspace<K> target = f.slice(0, m, w);
        incl.set_block(m, w, target.coords(sp.basis()));
    }
    incl.validate();
    for (int w = 0; w <= amb.weight_cap(); ++w)
        for (int m = std::max(n, amb.d_min()); m <= amb.d_max(); ++m) {
            HomologySlice<K> hs = homology(sub.complex, m, w);
            HomologySlice<K> hb = homology(base.complex, m, w);
            Matrix<K> induced = homology_induced(incl, m, w, hs, hb);
            bool iso = (hs.dim == hb.dim) && (rank(induced) == hb.dim);
            if (!iso) {
                rep.pass = false;
                if (!rep.first_failure) rep.first_failure = Key{m, w};
            }
        }
    return rep;
}

// ---------------------------------------------------------------------------
// spectral sequence of a filtration
//
// Entries are stored in chart coordinates (s, t) = (scale*p, n + scale*p)
// where p is the filtration index and n the total degree; the differential
// on the page labelled r = scale*ρ has chart bidegree (r, r-1).

struct PageKey {
    int s, t, w;
    friend bool operator<(const PageKey& a, const PageKey& b) {
        return std::tie(a.s, a.t, a.w) < std::tie(b.s, b.t, b.w);
    }
    friend bool operator==(const PageKey& a, const PageKey& b) {
        return std::tie(a.s, a.t, a.w) == std::tie(b.s, b.t, b.w);
    }
};

template <class K>
struct SpectralSequencePage {
    int r = 1;                             // chart label (scale * internal step)
    std::map<PageKey, int> entries;        // dimensions
    std::map<PageKey, Matrix<K>> diffs;    // d_r out of each entry
};

template <class K>
class SpectralSequence {
public:
    SpectralSequence(const FilteredComplex<K>& f, int r_max, int index_scale = 1)
        : f_(f), scale_(index_scale) {
        if (r_max < 1) throw std::invalid_argument("spectral_sequence: r_max must be >= 1");
        build(r_max);
    }

    const std::vector<SpectralSequencePage<K>>& pages() const { return pages_; }

    // total dimension of the last page along the diagonal of total degree n
    int last_page_diagonal(int n, int w) const {
        int sum = 0;
        for (const auto& [pk, dim] : pages_.back().entries)
            if (pk.t - pk.s == n && pk.w == w) sum += dim;
        return sum;
    }

private:
    using CellKey = std::pair<int, std::pair<int, int>>;  // (p, (n, w))

    // Z_r^{p} = { x in F^p : dx in F^{p+r} }, with F^{j} = F^0 for j < 0
    // (ℕ-indexed convention), so the target level comes from the raw index.
    Subspace<K> z_space(int p, int r, int n, int w) {
        int lo = std::clamp(p, 0, f_.top());
        int hi = std::clamp(p + r, 0, f_.top());
        auto key = std::make_tuple(lo, hi, n, w);
        auto it = zmemo_.find(key);
        if (it != zmemo_.end()) return it->second;
        Subspace<K> here = f_.slice(lo, n, w);
        Subspace<K> out;
        if (here.dim() == 0) {
            out = Subspace<K>::zero(here.ambient_dim());
        } else if (hi <= lo) {
            out = here;
        } else {
            Subspace<K> target = f_.slice(hi, n - 1, w);
            Matrix<K> d_restricted = f_.ambient().diff(n, w) * here.basis();
            Subspace<K> pre = preimage_subspace(d_restricted, target);
            out = Subspace<K>::span(here.basis() * pre.basis());
        }
        zmemo_.emplace(key, out);
        return out;
    }

    void build(int r_max) {
        const ChainComplex<K>& amb = f_.ambient();
        for (int r = 1; r <= r_max; ++r) {
            std::map<CellKey, QuotientData<K>> cells;
            SpectralSequencePage<K> page;
            page.r = scale_ * r;
            for (int w = 0; w <= amb.weight_cap(); ++w)
                for (int n = amb.d_min(); n <= amb.d_max(); ++n)
                    for (int p = 0; p <= f_.top(); ++p) {
                        if (amb.dim(n, w) == 0) continue;
                        Subspace<K> z = z_space(p, r, n, w);
                        Subspace<K> zin = z_space(p + 1, r - 1, n, w);
                        Subspace<K> boundary_src = z_space(p - r + 1, r - 1, n + 1, w);
                        Subspace<K> db = boundary_src.dim() == 0
                                             ? Subspace<K>::zero(amb.dim(n, w))
                                             : image_basis(amb.diff(n + 1, w) * boundary_src.basis());
                        Subspace<K> b = Subspace<K>::sum(zin, db);
                        QuotientData<K> q = quotient_basis(z, b);
                        if (q.dim > 0)
                            page.entries[{scale_ * p, n + scale_ * p, w}] = q.dim;
                        cells.emplace(CellKey{p, {n, w}}, std::move(q));
                    }
            // differentials d_r: (p, n) -> (p+r, n-1), class of dx
            for (const auto& [ck, q] : cells) {
                if (q.dim == 0) continue;
                auto [p, nw] = ck;
                auto [n, w] = nw;
                auto tgt = cells.find(CellKey{p + r, {n - 1, w}});
                if (tgt == cells.end() || tgt->second.dim == 0) continue;
                Matrix<K> d(tgt->second.dim, q.dim);
                for (int j = 0; j < q.dim; ++j) {
                    Vec<K> dx = amb.diff(n, w).apply(q.representatives.column(j));
                    Vec<K> cls = tgt->second.project(dx);
                    for (int i = 0; i < tgt->second.dim; ++i)
                        if (!cls[i].is_zero()) d.set(i, j, cls[i]);
                }
                if (!d.is_zero()) page.diffs[{scale_ * p, n + scale_ * p, w}] = std::move(d);
            }
            pages_.push_back(std::move(page));
            cells_.push_back(std::move(cells));
        }
        check_consistency();
    }

    // d_r ∘ d_r = 0 and E_{r+1} = homology of (E_r, d_r), slotwise by dimension
    void check_consistency() const {
        for (std::size_t pi = 0; pi < pages_.size(); ++pi) {
            const auto& page = pages_[pi];
            int r = page.r;
            for (const auto& [pk, d] : page.diffs) {
                PageKey next{pk.s + r, pk.t + r - 1, pk.w};
                auto it = page.diffs.find(next);
                if (it != page.diffs.end() && !(it->second * d).is_zero())
                    throw invariant_error("spectral sequence: d_r ∘ d_r != 0");
            }
            if (pi + 1 >= pages_.size()) continue;
            const auto& nextp = pages_[pi + 1];
            for (const auto& [pk, dim] : page.entries) {
                Matrix<K> out = page.diffs.count(pk)
                                    ? page.diffs.at(pk)
                                    : Matrix<K>(0, dim);
                int ker = dim - (out.rows() ? rank(out) : 0);
                PageKey src{pk.s - r, pk.t - r + 1, pk.w};
                int img = 0;
                auto sit = page.diffs.find(src);
                if (sit != page.diffs.end() && sit->second.rows() == dim) img = rank(sit->second);
                int expected = ker - img;
                int actual = nextp.entries.count(pk) ? nextp.entries.at(pk) : 0;
                if (expected != actual)
                    throw invariant_error("spectral sequence: page " + std::to_string(nextp.r) +
                                          " is not the homology of page " + std::to_string(r));
            }
        }
    }

    const FilteredComplex<K>& f_;
    int scale_;
    std::map<std::tuple<int, int, int, int>, Subspace<K>> zmemo_;
    std::vector<SpectralSequencePage<K>> pages_;
    std::vector<std::map<CellKey, QuotientData<K>>> cells_;
};

template <class K>
std::vector<SpectralSequencePage<K>> spectral_sequence(const FilteredComplex<K>& f, int r_max,
                                                       int index_scale = 1) {
    return SpectralSequence<K>(f, r_max, index_scale).pages();
}

// abutment check: total E_last dimension on each diagonal equals H_*(F(0))
template <class K>
bool spectral_abutment_matches(const FilteredComplex<K>& f,
                               const std::vector<SpectralSequencePage<K>>& pages) {
    const ChainComplex<K>& amb = f.ambient();
    MaterializedSub<K> base = materialize(amb, f.step(0));
    for (int w = 0; w <= amb.weight_cap(); ++w)
        for (int n = amb.d_min(); n <= amb.d_max(); ++n) {
            int sum = 0;
            for (const auto& [pk, dim] : pages.back().entries)
                if (pk.t - pk.s == n && pk.w == w) sum += dim;
            if (sum != homology(base.complex, n, w).dim) return false;
        }
    return true;
}

// ---------------------------------------------------------------------------
// bifiltrations

template <class K>
class BifilteredComplex {
public:
    BifilteredComplex() = default;
    BifilteredComplex(ChainComplex<K> ambient, int s_cap, int t_cap,
                      std::map<std::pair<int, int>, Subcomplex<K>> lattice)
        : ambient_(std::move(ambient)), s_cap_(s_cap), t_cap_(t_cap), lattice_(std::move(lattice)) {
        validate();
    }

    const ChainComplex<K>& ambient() const { return ambient_; }
    int s_cap() const { return s_cap_; }
    int t_cap() const { return t_cap_; }

    const Subcomplex<K>& step(int s, int t) const {
        s = std::clamp(s, 0, s_cap_);
        t = std::clamp(t, 0, t_cap_);
        return lattice_.at({s, t});
    }

    void validate() const {
        for (const auto& [key, sub] : lattice_)
            validate_subcomplex(ambient_, sub, "bifiltration step");
        for (int s = 0; s <= s_cap_; ++s)
            for (int t = 0; t <= t_cap_; ++t) {
                if (s + 1 <= s_cap_ &&
                    !subcomplex_contained(ambient_, step(s + 1, t), step(s, t)))
                    throw invariant_error("BifilteredComplex: CW direction not decreasing");
                if (t + 1 <= t_cap_ &&
                    !subcomplex_contained(ambient_, step(s, t + 1), step(s, t)))
                    throw invariant_error("BifilteredComplex: HKR direction not decreasing");
            }
    }

    // F^{s,t} / (F^{s+1,t} + F^{s,t+1})
    QuotientComplex<K> bigraded_piece(int s, int t) const {
        Subcomplex<K> denom =
            subcomplex_sum(ambient_, step(s + 1, t), step(s, t + 1));
        return quotient_complex(ambient_, step(s, t), denom);
    }

private:
    ChainComplex<K> ambient_;
    int s_cap_ = 0, t_cap_ = 0;
    std::map<std::pair<int, int>, Subcomplex<K>> lattice_;
};

}  // namespace cychom
