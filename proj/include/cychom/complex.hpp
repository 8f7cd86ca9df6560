// Weight-graded chain complexes over an exact field, with homology,
// good truncation, shifts, mapping cones and connecting homomorphisms.
// Degrees live in a finite window; modules outside the window are zero.
// Cohomological complexes are stored homologically via degree negation.
#pragma once

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cychom/linalg.hpp"

namespace cychom {

// (degree, weight)
using Key = std::pair<int, int>;

struct BasedModule {
    int dim = 0;
    std::vector<std::string> labels;  // optional, cosmetic

    friend bool operator==(const BasedModule& a, const BasedModule& b) {
        return a.dim == b.dim && a.labels == b.labels;
    }
};

template <class K>
class ChainComplex {
public:
    ChainComplex() : d_min_(0), d_max_(-1), weight_cap_(0) {}
    ChainComplex(int d_min, int d_max, int weight_cap)
        : d_min_(d_min), d_max_(d_max), weight_cap_(weight_cap) {
        if (weight_cap < 0) throw std::invalid_argument("ChainComplex: negative weight cap");
    }

    int d_min() const { return d_min_; }
    int d_max() const { return d_max_; }
    int weight_cap() const { return weight_cap_; }
    bool in_window(int n) const { return n >= d_min_ && n <= d_max_; }

    int dim(int n, int w) const {
        auto it = modules_.find({n, w});
        return it == modules_.end() ? 0 : it->second.dim;
    }

    const BasedModule* module(int n, int w) const {
        auto it = modules_.find({n, w});
        return it == modules_.end() ? nullptr : &it->second;
    }

    void set_module(int n, int w, BasedModule m) {
        if (!in_window(n)) throw window_error("ChainComplex::set_module: degree " + std::to_string(n) + " outside window");
        if (w < 0 || w > weight_cap_) throw window_error("ChainComplex::set_module: weight out of range");
        if (m.dim > 0) modules_[{n, w}] = std::move(m);
    }

    // d_n : (n,w) -> (n-1,w); synthesized as a zero matrix when absent
    Matrix<K> diff(int n, int w) const {
        auto it = diffs_.find({n, w});
        if (it != diffs_.end()) return it->second;
        return Matrix<K>(dim(n - 1, w), dim(n, w));
    }

    void set_diff(int n, int w, Matrix<K> d) {
        if (d.rows() != dim(n - 1, w) || d.cols() != dim(n, w))
            throw std::invalid_argument("ChainComplex::set_diff: shape mismatch at (" +
                                        std::to_string(n) + "," + std::to_string(w) + ")");
        if (!d.is_zero()) diffs_[{n, w}] = std::move(d);
        else diffs_.erase({n, w});
    }

    // d∘d = 0, checked blockwise; reports the offending (degree, weight)
    void validate() const {
        for (int w = 0; w <= weight_cap_; ++w) {
            for (int n = d_min_ + 1; n <= d_max_; ++n) {
                if (dim(n, w) == 0) continue;
                Matrix<K> sq = diff(n - 1, w) * diff(n, w);
                if (!sq.is_zero()) {
                    std::ostringstream os;
                    os << "ChainComplex: d∘d != 0 at degree " << n << ", weight " << w;
                    throw invariant_error(os.str());
                }
            }
        }
    }

    std::vector<int> euler_per_weight() const {
        std::vector<int> chi(weight_cap_ + 1, 0);
        for (const auto& [key, m] : modules_) {
            int n = key.first, w = key.second;
            chi[w] += (n % 2 == 0 ? m.dim : -m.dim);
        }
        return chi;
    }

    bool is_zero() const { return modules_.empty(); }

    const std::map<Key, BasedModule>& modules() const { return modules_; }
    const std::map<Key, Matrix<K>>& stored_diffs() const { return diffs_; }

private:
    int d_min_, d_max_, weight_cap_;
    std::map<Key, BasedModule> modules_;
    std::map<Key, Matrix<K>> diffs_;
};

// Cochain complex stored homologically: C^i lives at homological degree -i.
template <class K>
class CochainComplex {
public:
    CochainComplex() = default;
    explicit CochainComplex(ChainComplex<K> homological) : hom_(std::move(homological)) {}

    static CochainComplex from_cohomological_window(int c_min, int c_max, int weight_cap) {
        return CochainComplex(ChainComplex<K>(-c_max, -c_min, weight_cap));
    }

    const ChainComplex<K>& homological_model() const { return hom_; }
    ChainComplex<K>& homological_model() { return hom_; }

    int c_min() const { return -hom_.d_max(); }
    int c_max() const { return -hom_.d_min(); }
    int weight_cap() const { return hom_.weight_cap(); }

    int dim(int i, int w) const { return hom_.dim(-i, w); }
    // d^i : C^i -> C^{i+1}
    Matrix<K> diff(int i, int w) const { return hom_.diff(-i, w); }

    void set_module(int i, int w, BasedModule m) { hom_.set_module(-i, w, std::move(m)); }
    void set_diff(int i, int w, Matrix<K> d) { hom_.set_diff(-i, w, std::move(d)); }
    void validate() const { hom_.validate(); }
    bool is_zero() const { return hom_.is_zero(); }

private:
    ChainComplex<K> hom_;
};

// A strict subcomplex: one subspace per (degree, weight), closed under d.
template <class K>
struct Subcomplex {
    std::map<Key, Subspace<K>> slices;

    Subspace<K> slice(int n, int w, int ambient_dim) const {
        auto it = slices.find({n, w});
        if (it != slices.end()) return it->second;
        return Subspace<K>::zero(ambient_dim);
    }

    void set(int n, int w, Subspace<K> s) {
        if (s.dim() > 0) slices[{n, w}] = std::move(s);
        else slices.erase({n, w});
    }

    bool is_zero() const {
        for (const auto& [k, s] : slices)
            if (s.dim() > 0) return false;
        return true;
    }
};

template <class K>
Subcomplex<K> full_subcomplex(const ChainComplex<K>& c) {
    Subcomplex<K> s;
    for (const auto& [key, m] : c.modules()) s.set(key.first, key.second, Subspace<K>::full(m.dim));
    return s;
}

template <class K>
void validate_subcomplex(const ChainComplex<K>& c, const Subcomplex<K>& s,
                         const std::string& what = "subcomplex") {
    for (const auto& [key, sp] : s.slices) {
        auto [n, w] = key;
        if (sp.ambient_dim() != c.dim(n, w))
            throw invariant_error(what + ": ambient mismatch at (" + std::to_string(n) + "," +
                                  std::to_string(w) + ")");
        if (sp.dim() == 0) continue;
        Matrix<K> img = c.diff(n, w) * sp.basis();
        Subspace<K> lower = s.slice(n - 1, w, c.dim(n - 1, w));
        for (int j = 0; j < img.cols(); ++j) {
            if (!lower.contains(img.column(j)))
                throw invariant_error(what + ": not closed under d at (" + std::to_string(n) +
                                      "," + std::to_string(w) + ")");
        }
    }
}

template <class K>
bool subcomplex_contained(const ChainComplex<K>& c, const Subcomplex<K>& inner,
                          const Subcomplex<K>& outer) {
    for (const auto& [key, sp] : inner.slices) {
        auto [n, w] = key;
        if (!outer.slice(n, w, c.dim(n, w)).contains(sp)) return false;
    }
    return true;
}

// d of the ambient complex restricted to a subcomplex, in slice coordinates
template <class K>
Matrix<K> restricted_diff(const ChainComplex<K>& c, const Subcomplex<K>& s, int n, int w) {
    Subspace<K> here = s.slice(n, w, c.dim(n, w));
    Subspace<K> lower = s.slice(n - 1, w, c.dim(n - 1, w));
    Matrix<K> img = c.diff(n, w) * here.basis();
    return lower.coords(img);
}

template <class K>
class ChainMap;

template <class K>
struct MaterializedSub {
    ChainComplex<K> complex;  // coordinates = subspace bases
    Subcomplex<K> basis;      // the original slices, for ambient conversions
};

template <class K>
MaterializedSub<K> materialize(const ChainComplex<K>& c, const Subcomplex<K>& s) {
    MaterializedSub<K> out;
    out.basis = s;
    out.complex = ChainComplex<K>(c.d_min(), c.d_max(), c.weight_cap());
    for (const auto& [key, sp] : s.slices)
        out.complex.set_module(key.first, key.second, BasedModule{sp.dim(), {}});
    for (const auto& [key, sp] : s.slices) {
        auto [n, w] = key;
        Matrix<K> d = restricted_diff(c, s, n, w);
        out.complex.set_diff(n, w, d);
    }
    return out;
}

// Chain map as per-(degree, weight) blocks between two complexes.
template <class K>
class ChainMap {
public:
    ChainMap() = default;
    ChainMap(ChainComplex<K> source, ChainComplex<K> target)
        : source_(std::move(source)), target_(std::move(target)) {}

    const ChainComplex<K>& source() const { return source_; }
    const ChainComplex<K>& target() const { return target_; }

    Matrix<K> block(int n, int w) const {
        auto it = blocks_.find({n, w});
        if (it != blocks_.end()) return it->second;
        return Matrix<K>(target_.dim(n, w), source_.dim(n, w));
    }

    void set_block(int n, int w, Matrix<K> b) {
        if (b.rows() != target_.dim(n, w) || b.cols() != source_.dim(n, w))
            throw std::invalid_argument("ChainMap::set_block: shape mismatch");
        if (!b.is_zero()) blocks_[{n, w}] = std::move(b);
    }

    // d∘f = f∘d blockwise
    void validate() const {
        int lo = std::min(source_.d_min(), target_.d_min());
        int hi = std::max(source_.d_max(), target_.d_max());
        for (int w = 0; w <= source_.weight_cap(); ++w)
            for (int n = lo; n <= hi; ++n) {
                Matrix<K> lhs = target_.diff(n, w) * block(n, w);
                Matrix<K> rhs = block(n - 1, w) * source_.diff(n, w);
                if (!(lhs == rhs))
                    throw invariant_error("ChainMap: does not commute with d at (" +
                                          std::to_string(n) + "," + std::to_string(w) + ")");
            }
    }

private:
    ChainComplex<K> source_, target_;
    std::map<Key, Matrix<K>> blocks_;
};

// ---------------------------------------------------------------------------
// homology

template <class K>
struct HomologySlice {
    int dim = 0;
    Subspace<K> cycles;       // Z_n in complex coordinates
    QuotientData<K> classes;  // Z_n / B_n

    // representative cycles, complex coordinates, one column per class
    const Matrix<K>& reps() const { return classes.representatives; }

    // homology class of a cycle given in complex coordinates
    Vec<K> class_of(const Vec<K>& cycle) const { return classes.project(cycle); }
};

template <class K>
HomologySlice<K> homology(const ChainComplex<K>& c, int n, int w) {
    if (!c.in_window(n))
        throw window_error("homology: degree " + std::to_string(n) + " outside window [" +
                           std::to_string(c.d_min()) + "," + std::to_string(c.d_max()) + "]");
    HomologySlice<K> h;
    h.cycles = kernel_basis(c.diff(n, w));
    Subspace<K> boundaries = image_basis(c.diff(n + 1, w));
    h.classes = quotient_basis(h.cycles, boundaries);
    h.dim = h.classes.dim;
    return h;
}

template <class K>
std::map<Key, int> homology_dims(const ChainComplex<K>& c) {
    std::map<Key, int> out;
    for (int w = 0; w <= c.weight_cap(); ++w)
        for (int n = c.d_min(); n <= c.d_max(); ++n) {
            int d = homology(c, n, w).dim;
            if (d) out[{n, w}] = d;
        }
    return out;
}

// induced map on homology of a chain map
template <class K>
Matrix<K> homology_induced(const ChainMap<K>& f, int n, int w, const HomologySlice<K>& h_src,
                           const HomologySlice<K>& h_tgt) {
    Matrix<K> out(h_tgt.dim, h_src.dim);
    Matrix<K> mapped = f.block(n, w) * h_src.reps();
    for (int j = 0; j < h_src.dim; ++j) {
        Vec<K> cls = h_tgt.class_of(mapped.column(j));
        for (int i = 0; i < h_tgt.dim; ++i)
            if (!cls[i].is_zero()) out.set(i, j, cls[i]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// good truncation

template <class K>
Subcomplex<K> good_truncation_slices(const ChainComplex<K>& c, int n) {
    Subcomplex<K> s;
    for (const auto& [key, m] : c.modules()) {
        auto [deg, w] = key;
        if (deg > n) s.set(deg, w, Subspace<K>::full(m.dim));
        else if (deg == n) s.set(deg, w, kernel_basis(c.diff(deg, w)));
    }
    return s;
}

template <class K>
struct Truncation {
    Subcomplex<K> slices;
    ChainComplex<K> complex;
    ChainMap<K> inclusion;  // complex -> ambient
};

// subcomplex with full modules above n, cycles at n, zero below
template <class K>
Truncation<K> good_truncate(const ChainComplex<K>& c, int n) {
    Truncation<K> t;
    t.slices = good_truncation_slices(c, n);
    MaterializedSub<K> m = materialize(c, t.slices);
    t.complex = m.complex;
    t.inclusion = ChainMap<K>(t.complex, c);
    for (const auto& [key, sp] : t.slices.slices)
        t.inclusion.set_block(key.first, key.second, sp.basis());
    return t;
}

// ---------------------------------------------------------------------------
// shift: degree n of the result is degree n-k of the input, d picks up (-1)^k

template <class K>
ChainComplex<K> shift(const ChainComplex<K>& c, int k) {
    ChainComplex<K> out(c.d_min() + k, c.d_max() + k, c.weight_cap());
    for (const auto& [key, m] : c.modules()) out.set_module(key.first + k, key.second, m);
    K sign = (k % 2 == 0) ? K(1) : K(-1);
    for (const auto& [key, d] : c.stored_diffs())
        out.set_diff(key.first + k, key.second, d.scaled(sign));
    return out;
}

// ---------------------------------------------------------------------------
// mapping cone and fiber

template <class K>
struct ConeFiber {
    ChainComplex<K> cone;   // cone(f)_n = T_n ⊕ S_{n-1}, d = [[d_T, f],[0, -d_S]]
    ChainComplex<K> fiber;  // cone(f)[-1]
    ChainMap<K> target_to_cone;
    ChainMap<K> fiber_to_source;  // projection onto the S-summand
};

template <class K>
ConeFiber<K> cone_and_fiber(const ChainMap<K>& f) {
    const ChainComplex<K>& S = f.source();
    const ChainComplex<K>& T = f.target();
    if (S.weight_cap() != T.weight_cap())
        throw window_error("cone_and_fiber: incompatible windows (weight caps differ)");

    int lo = std::min(T.d_min(), S.d_min() + 1);
    int hi = std::max(T.d_max(), S.d_max() + 1);
    ConeFiber<K> out;
    out.cone = ChainComplex<K>(lo, hi, T.weight_cap());
    for (int w = 0; w <= T.weight_cap(); ++w) {
        for (int n = lo; n <= hi; ++n) {
            int dt = T.dim(n, w), ds = S.dim(n - 1, w);
            if (dt + ds > 0) out.cone.set_module(n, w, BasedModule{dt + ds, {}});
        }
        for (int n = lo; n <= hi; ++n) {
            int dt = T.dim(n, w), ds = S.dim(n - 1, w);
            if (dt + ds == 0) continue;
            int dt1 = T.dim(n - 1, w), ds1 = S.dim(n - 2, w);
            Matrix<K> d(dt1 + ds1, dt + ds);
            T.diff(n, w).for_each([&](int i, int j, const K& v) { d.set(i, j, v); });
            f.block(n - 1, w).for_each([&](int i, int j, const K& v) { d.set(i, j + dt, v); });
            S.diff(n - 1, w).for_each([&](int i, int j, const K& v) { d.set(i + dt1, j + dt, -v); });
            out.cone.set_diff(n, w, d);
        }
    }
    out.cone.validate();
    out.fiber = shift(out.cone, -1);

    out.target_to_cone = ChainMap<K>(T, out.cone);
    for (int w = 0; w <= T.weight_cap(); ++w)
        for (int n = T.d_min(); n <= T.d_max(); ++n) {
            int dt = T.dim(n, w);
            if (dt == 0) continue;
            Matrix<K> b(out.cone.dim(n, w), dt);
            for (int i = 0; i < dt; ++i) b.set(i, i, K(1));
            out.target_to_cone.set_block(n, w, b);
        }
    out.target_to_cone.validate();

    out.fiber_to_source = ChainMap<K>(out.fiber, S);
    for (int w = 0; w <= T.weight_cap(); ++w)
        for (int n = S.d_min(); n <= S.d_max(); ++n) {
            int ds = S.dim(n, w);
            int dfib = out.fiber.dim(n, w);  // = T.dim(n+1) + S.dim(n)
            if (ds == 0 || dfib == 0) continue;
            int dt = T.dim(n + 1, w);
            Matrix<K> b(ds, dfib);
            for (int i = 0; i < ds; ++i) b.set(i, dt + i, K(1));
            out.fiber_to_source.set_block(n, w, b);
        }
    out.fiber_to_source.validate();
    return out;
}

// ---------------------------------------------------------------------------
// quotient complexes

template <class K>
struct QuotientComplex {
    ChainComplex<K> complex;            // coordinates = quotient classes
    std::map<Key, QuotientData<K>> data;

    const QuotientData<K>* slice(int n, int w) const {
        auto it = data.find({n, w});
        return it == data.end() ? nullptr : &it->second;
    }

    // class of an ambient vector lying in the numerator subspace
    Vec<K> project(int n, int w, const Vec<K>& ambient_vec) const {
        auto it = data.find({n, w});
        if (it == data.end()) return {};
        return it->second.project(ambient_vec);
    }

    // ambient representative of a quotient vector
    Vec<K> lift(int n, int w, const Vec<K>& qvec) const {
        auto it = data.find({n, w});
        if (it == data.end()) {
            if (!qvec.empty()) throw std::invalid_argument("QuotientComplex::lift: empty slice");
            return {};
        }
        return it->second.representatives.apply(qvec);
    }
};

// quotient V/W of nested subcomplexes of c, with induced differential
template <class K>
QuotientComplex<K> quotient_complex(const ChainComplex<K>& c, const Subcomplex<K>& v,
                                    const Subcomplex<K>& w) {
    QuotientComplex<K> out;
    out.complex = ChainComplex<K>(c.d_min(), c.d_max(), c.weight_cap());
    for (int wt = 0; wt <= c.weight_cap(); ++wt) {
        for (int n = c.d_min(); n <= c.d_max(); ++n) {
            int amb = c.dim(n, wt);
            Subspace<K> vs = v.slice(n, wt, amb);
            Subspace<K> ws = w.slice(n, wt, amb);
            if (vs.dim() == 0 && ws.dim() == 0) continue;
            QuotientData<K> q = quotient_basis(vs, ws);
            if (q.dim > 0) out.complex.set_module(n, wt, BasedModule{q.dim, {}});
            out.data[{n, wt}] = std::move(q);
        }
    }
    for (auto& [key, q] : out.data) {
        auto [n, wt] = key;
        if (q.dim == 0 || out.complex.dim(n - 1, wt) == 0) continue;
        auto lower = out.data.find({n - 1, wt});
        if (lower == out.data.end()) continue;
        Matrix<K> d(lower->second.dim, q.dim);
        for (int j = 0; j < q.dim; ++j) {
            Vec<K> img = c.diff(n, wt).apply(q.representatives.column(j));
            Vec<K> cls = lower->second.project(img);
            for (int i = 0; i < lower->second.dim; ++i)
                if (!cls[i].is_zero()) d.set(i, j, cls[i]);
        }
        out.complex.set_diff(n, wt, d);
    }
    out.complex.validate();
    return out;
}

// ---------------------------------------------------------------------------
// connecting homomorphism of 0 -> A -> X -> X/A -> 0

template <class K>
struct StrictSES {
    ChainComplex<K> ambient;
    Subcomplex<K> sub;
    MaterializedSub<K> a;      // A with its own coordinates
    QuotientComplex<K> c;      // X/A
};

template <class K>
StrictSES<K> strict_ses(const ChainComplex<K>& x, const Subcomplex<K>& a) {
    StrictSES<K> s;
    s.ambient = x;
    s.sub = a;
    s.a = materialize(x, a);
    s.c = quotient_complex(x, full_subcomplex(x), a);
    return s;
}

// boundary H_n(X/A) -> H_{n-1}(A): lift, apply d, express in A
template <class K>
Matrix<K> connecting_map(const StrictSES<K>& s, int n, int w, const HomologySlice<K>& h_c,
                         const HomologySlice<K>& h_a) {
    Matrix<K> delta(h_a.dim, h_c.dim);
    for (int j = 0; j < h_c.dim; ++j) {
        Vec<K> lifted = s.c.lift(n, w, h_c.reps().column(j));
        Vec<K> dx = s.ambient.diff(n, w).apply(lifted);
        Subspace<K> a_slice = s.sub.slice(n - 1, w, s.ambient.dim(n - 1, w));
        Vec<K> a_coords = a_slice.coords(dx);
        Vec<K> cls = h_a.class_of(a_coords);
        for (int i = 0; i < h_a.dim; ++i)
            if (!cls[i].is_zero()) delta.set(i, j, cls[i]);
    }
    return delta;
}

template <class K>
Matrix<K> connecting_map(const StrictSES<K>& s, int n, int w) {
    HomologySlice<K> h_c = homology(s.c.complex, n, w);
    HomologySlice<K> h_a = homology(s.a.complex, n - 1, w);
    return connecting_map(s, n, w, h_c, h_a);
}

}  // namespace cychom
