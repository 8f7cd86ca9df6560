// Mixed complexes: a chain complex (C, b) with a degree +1 operator B
// satisfying B² = 0 and bB + Bb = 0. The algebraic model of an S¹-action.
#pragma once

#include <map>

#include "cychom/complex.hpp"

namespace cychom {

template <class K>
struct MixedComplex {
    ChainComplex<K> complex;              // underlying (C, b)
    std::map<Key, Matrix<K>> B_blocks;    // B : (n,w) -> (n+1,w)

    Matrix<K> B(int n, int w) const {
        auto it = B_blocks.find({n, w});
        if (it != B_blocks.end()) return it->second;
        return Matrix<K>(complex.dim(n + 1, w), complex.dim(n, w));
    }

    void set_B(int n, int w, Matrix<K> m) {
        if (m.rows() != complex.dim(n + 1, w) || m.cols() != complex.dim(n, w))
            throw std::invalid_argument("MixedComplex::set_B: shape mismatch");
        if (!m.is_zero()) B_blocks[{n, w}] = std::move(m);
    }

    // b² = 0 (from the complex), B² = 0, bB + Bb = 0, blockwise
    void validate() const {
        complex.validate();
        for (int w = 0; w <= complex.weight_cap(); ++w)
            for (int n = complex.d_min(); n <= complex.d_max(); ++n) {
                if (complex.dim(n, w) == 0) continue;
                if (n + 2 <= complex.d_max()) {
                    Matrix<K> bb = B(n + 1, w) * B(n, w);
                    if (!bb.is_zero())
                        throw invariant_error("MixedComplex: B² != 0 at (" + std::to_string(n) +
                                              "," + std::to_string(w) + ")");
                }
                Matrix<K> anti = complex.diff(n + 1, w) * B(n, w) + B(n - 1, w) * complex.diff(n, w);
                if (!anti.is_zero())
                    throw invariant_error("MixedComplex: bB + Bb != 0 at (" + std::to_string(n) +
                                          "," + std::to_string(w) + ")");
            }
    }
};

// trivial-B mixed structure on a complex
template <class K>
MixedComplex<K> mixed_with_zero_B(ChainComplex<K> c) {
    MixedComplex<K> m;
    m.complex = std::move(c);
    return m;
}

}  // namespace cychom
