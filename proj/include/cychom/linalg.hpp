// Exact sparse linear algebra over a field: matrices, reduced echelon form,
// kernels, images, preimages and quotients of subspaces. Every routine is
// deterministic (pivoting scans columns in ascending order, rows by lowest
// index), so canonical bases are reproducible across runs.
#pragma once

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cychom/scalar.hpp"

namespace cychom {

struct invariant_error : std::logic_error {
    using std::logic_error::logic_error;
};
struct window_error : std::out_of_range {
    using std::out_of_range::out_of_range;
};
struct unsupported_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class K>
using Vec = std::vector<K>;

template <class K>
class Matrix {
public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.set(i, i, K(1));
        return m;
    }

    static Matrix from_columns(int rows, const std::vector<Vec<K>>& cols) {
        Matrix m(rows, static_cast<int>(cols.size()));
        for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
            if (static_cast<int>(cols[j].size()) != rows)
                throw std::invalid_argument("Matrix::from_columns: bad column length");
            for (int i = 0; i < rows; ++i)
                if (!cols[j][i].is_zero()) m.set(i, j, cols[j][i]);
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    K get(int i, int j) const {
        check(i, j);
        auto it = data_[i].find(j);
        return it == data_[i].end() ? K(0) : it->second;
    }

    void set(int i, int j, const K& v) {
        check(i, j);
        if (v.is_zero())
            data_[i].erase(j);
        else
            data_[i][j] = v;
    }

    void add_to(int i, int j, const K& v) {
        if (v.is_zero()) return;
        check(i, j);
        auto it = data_[i].find(j);
        if (it == data_[i].end()) {
            data_[i][j] = v;
        } else {
            it->second += v;
            if (it->second.is_zero()) data_[i].erase(it);
        }
    }

    const std::map<int, K>& row(int i) const { return data_[i]; }

    bool is_zero() const {
        for (const auto& r : data_)
            if (!r.empty()) return false;
        return true;
    }

    std::size_t nnz() const {
        std::size_t n = 0;
        for (const auto& r : data_) n += r.size();
        return n;
    }

    template <class Fn>
    void for_each(Fn&& fn) const {
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) fn(i, j, v);
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for_each([&](int i, int j, const K& v) { t.set(j, i, v); });
        return t;
    }

    Vec<K> column(int j) const {
        Vec<K> c(rows_, K(0));
        for (int i = 0; i < rows_; ++i) c[i] = get(i, j);
        return c;
    }

    Vec<K> apply(const Vec<K>& x) const {
        if (static_cast<int>(x.size()) != cols_)
            throw std::invalid_argument("Matrix::apply: size mismatch");
        Vec<K> y(rows_, K(0));
        for (int i = 0; i < rows_; ++i)
            for (const auto& [j, v] : data_[i]) y[i] += v * x[j];
        return y;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix::operator*: shape mismatch");
        Matrix r(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (const auto& [k, a] : data_[i])
                for (const auto& [j, b] : o.data_[k]) r.add_to(i, j, a * b);
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("Matrix::operator+: shape mismatch");
        Matrix r(*this);
        o.for_each([&](int i, int j, const K& v) { r.add_to(i, j, v); });
        return r;
    }

    Matrix operator-() const {
        Matrix r(rows_, cols_);
        for_each([&](int i, int j, const K& v) { r.set(i, j, -v); });
        return r;
    }

    Matrix operator-(const Matrix& o) const { return *this + (-o); }

    Matrix scaled(const K& c) const {
        Matrix r(rows_, cols_);
        if (c.is_zero()) return r;
        for_each([&](int i, int j, const K& v) { r.set(i, j, c * v); });
        return r;
    }

    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("Matrix::hstack: row mismatch");
        Matrix r(a.rows_, a.cols_ + b.cols_);
        a.for_each([&](int i, int j, const K& v) { r.set(i, j, v); });
        b.for_each([&](int i, int j, const K& v) { r.set(i, j + a.cols_, v); });
        return r;
    }

    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("Matrix::vstack: column mismatch");
        Matrix r(a.rows_ + b.rows_, a.cols_);
        a.for_each([&](int i, int j, const K& v) { r.set(i, j, v); });
        b.for_each([&](int i, int j, const K& v) { r.set(i + a.rows_, j, v); });
        return r;
    }

    Matrix columns(int begin, int end) const {
        if (begin < 0 || end > cols_ || begin > end)
            throw std::invalid_argument("Matrix::columns: bad range");
        Matrix r(rows_, end - begin);
        for_each([&](int i, int j, const K& v) {
            if (j >= begin && j < end) r.set(i, j - begin, v);
        });
        return r;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
        return a.data_ == b.data_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    std::string str() const {
        std::ostringstream os;
        for (int i = 0; i < rows_; ++i) {
            os << '[';
            for (int j = 0; j < cols_; ++j) os << (j ? " " : "") << to_string(get(i, j));
            os << "]\n";
        }
        return os.str();
    }

private:
    void check(int i, int j) const {
        if (i < 0 || i >= rows_ || j < 0 || j >= cols_)
            throw std::out_of_range("Matrix: index out of bounds");
    }

    int rows_, cols_;
    std::vector<std::map<int, K>> data_;
};

template <class K>
struct RrefResult {
    Matrix<K> reduced;
    std::vector<int> pivot_cols;
    int rank = 0;
};

namespace detail {

// Row container for elimination; dense below the threshold from the design
// rules, sparse above it.
template <class K>
struct EchelonRows {
    explicit EchelonRows(const Matrix<K>& m)
        : rows(m.rows()), cols(m.cols()), dense(m.cols() < 64) {
        if (dense) {
            d.assign(rows, Vec<K>(cols, K(0)));
            m.for_each([&](int i, int j, const K& v) { d[i][j] = v; });
        } else {
            s.resize(rows);
            m.for_each([&](int i, int j, const K& v) { s[i][j] = v; });
        }
    }

    K get(int i, int j) const {
        if (dense) return d[i][j];
        auto it = s[i].find(j);
        return it == s[i].end() ? K(0) : it->second;
    }
    void set(int i, int j, const K& v) {
        if (dense) {
            d[i][j] = v;
        } else if (v.is_zero()) {
            s[i].erase(j);
        } else {
            s[i][j] = v;
        }
    }
    bool row_empty(int i) const {
        if (!dense) return s[i].empty();
        for (const auto& v : d[i])
            if (!v.is_zero()) return false;
        return true;
    }
    // row_i <- a*row_i + b*row_j
    void combine(int i, const K& a, const K& b, int j) {
        if (dense) {
            for (int c = 0; c < cols; ++c) {
                K v = a * d[i][c] + b * d[j][c];
                d[i][c] = v;
            }
        } else {
            std::map<int, K> out;
            auto ai = s[i].begin();
            auto bj = s[j].begin();
            while (ai != s[i].end() || bj != s[j].end()) {
                if (bj == s[j].end() || (ai != s[i].end() && ai->first < bj->first)) {
                    K v = a * ai->second;
                    if (!v.is_zero()) out[ai->first] = v;
                    ++ai;
                } else if (ai == s[i].end() || bj->first < ai->first) {
                    K v = b * bj->second;
                    if (!v.is_zero()) out[bj->first] = v;
                    ++bj;
                } else {
                    K v = a * ai->second + b * bj->second;
                    if (!v.is_zero()) out[ai->first] = v;
                    ++ai;
                    ++bj;
                }
            }
            s[i] = std::move(out);
        }
    }
    void scale_row(int i, const K& c) {
        if (dense) {
            for (int cidx = 0; cidx < cols; ++cidx) d[i][cidx] = d[i][cidx] * c;
        } else {
            for (auto& [j, v] : s[i]) v *= c;
        }
    }
    template <class Fn>
    void for_each_in_row(int i, Fn&& fn) const {
        if (dense) {
            for (int j = 0; j < cols; ++j)
                if (!d[i][j].is_zero()) fn(j, d[i][j]);
        } else {
            for (const auto& [j, v] : s[i]) fn(j, v);
        }
    }

    int rows, cols;
    bool dense;
    std::vector<Vec<K>> d;
    std::vector<std::map<int, K>> s;
};

}  // namespace detail

// Reduced row echelon form. The forward phase uses fraction-free (Bareiss)
// two-term updates on denominator-cleared rows to control coefficient growth;
// the Jordan phase normalizes pivots to 1.
template <class K>
RrefResult<K> rref(const Matrix<K>& m) {
    detail::EchelonRows<K> w(m);

    if constexpr (scalar_traits<K>::integral_scaling) {
        for (int i = 0; i < w.rows; ++i) {
            K mult(1);
            w.for_each_in_row(i, [&](int, const K& v) {
                mult *= scalar_traits<K>::row_scale(v * mult);
            });
            if (!(mult == K(1))) w.scale_row(i, mult);
        }
    }

    std::vector<int> pivot_cols;
    std::vector<int> pivot_rows;
    K prev_pivot(1);
    int next_row = 0;
    for (int col = 0; col < w.cols && next_row < w.rows; ++col) {
        int pr = -1;
        for (int r = next_row; r < w.rows; ++r) {
            if (!w.get(r, col).is_zero()) {
                pr = r;
                break;
            }
        }
        if (pr < 0) continue;
        if (pr != next_row) {
            if (w.dense) std::swap(w.d[pr], w.d[next_row]);
            else std::swap(w.s[pr], w.s[next_row]);
        }
        K p = w.get(next_row, col);
        for (int r = next_row + 1; r < w.rows; ++r) {
            K x = w.get(r, col);
            if (x.is_zero()) {
                if constexpr (scalar_traits<K>::integral_scaling) {
                    // keep the Bareiss invariant: divide the already-integral row
                    w.combine(r, p / prev_pivot, K(0), next_row);
                }
                continue;
            }
            w.combine(r, p / prev_pivot, -(x / prev_pivot), next_row);
        }
        prev_pivot = p;
        pivot_cols.push_back(col);
        pivot_rows.push_back(next_row);
        ++next_row;
    }

    // Jordan phase: normalize pivots, clear above.
    for (int k = static_cast<int>(pivot_cols.size()) - 1; k >= 0; --k) {
        int r = pivot_rows[k], c = pivot_cols[k];
        K p = w.get(r, c);
        w.scale_row(r, K(1) / p);
        for (int i = 0; i < r; ++i) {
            K x = w.get(i, c);
            if (!x.is_zero()) w.combine(i, K(1), -x, r);
        }
    }

    RrefResult<K> out;
    out.pivot_cols = pivot_cols;
    out.rank = static_cast<int>(pivot_cols.size());
    out.reduced = Matrix<K>(m.rows(), m.cols());
    for (int i = 0; i < w.rows; ++i)
        w.for_each_in_row(i, [&](int j, const K& v) { out.reduced.set(i, j, v); });
    return out;
}

template <class K>
int rank(const Matrix<K>& m) {
    return rref(m).rank;
}

template <class K>
Matrix<K> inverse(const Matrix<K>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse: matrix not square");
    RrefResult<K> r = rref(Matrix<K>::hstack(m, Matrix<K>::identity(m.rows())));
    int left_pivots = 0;
    for (int c : r.pivot_cols)
        if (c < m.cols()) ++left_pivots;
    if (left_pivots != m.rows()) throw invariant_error("inverse: matrix is singular");
    return r.reduced.columns(m.cols(), 2 * m.cols());
}

// A linear subspace of K^ambient given by a canonical basis: the columns,
// read as rows of the transpose, form a reduced row echelon matrix. Two
// subspaces are equal iff their basis matrices are equal.
template <class K>
class Subspace {
public:
    Subspace() : ambient_(0), basis_(0, 0) {}

    static Subspace zero(int ambient) { return Subspace(ambient, Matrix<K>(ambient, 0), {}); }

    static Subspace full(int ambient) {
        Subspace s(ambient, Matrix<K>::identity(ambient), {});
        for (int i = 0; i < ambient; ++i) s.pivot_rows_.push_back(i);
        return s;
    }

    // span of the given columns, canonicalized
    static Subspace span(const Matrix<K>& columns) {
        RrefResult<K> r = rref(columns.transpose());
        Matrix<K> basis(columns.rows(), r.rank);
        std::vector<int> pivots;
        for (int i = 0; i < r.rank; ++i) {
            for (const auto& [j, v] : r.reduced.row(i)) basis.set(j, i, v);
            pivots.push_back(r.pivot_cols[i]);
        }
        return Subspace(columns.rows(), std::move(basis), std::move(pivots));
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.cols(); }
    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }
    const Matrix<K>& basis() const { return basis_; }
    const std::vector<int>& pivot_rows() const { return pivot_rows_; }

    bool contains(const Vec<K>& v) const {
        Vec<K> c = raw_coords(v);
        return basis_.apply(c) == v;
    }

    bool contains(const Subspace& o) const {
        if (o.ambient_ != ambient_) return false;
        for (int j = 0; j < o.dim(); ++j)
            if (!contains(o.basis_.column(j))) return false;
        return true;
    }

    // coordinates w.r.t. the canonical basis; throws if v is outside the span
    Vec<K> coords(const Vec<K>& v) const {
        Vec<K> c = raw_coords(v);
        if (!(basis_.apply(c) == v))
            throw invariant_error("Subspace::coords: vector not in span");
        return c;
    }

    // matrix of coordinates for a batch of ambient columns
    Matrix<K> coords(const Matrix<K>& columns) const {
        Matrix<K> out(dim(), columns.cols());
        for (int j = 0; j < columns.cols(); ++j) {
            Vec<K> c = coords(columns.column(j));
            for (int i = 0; i < dim(); ++i)
                if (!c[i].is_zero()) out.set(i, j, c[i]);
        }
        return out;
    }

    static Subspace sum(const Subspace& a, const Subspace& b) {
        if (a.ambient_ != b.ambient_) throw std::invalid_argument("Subspace::sum: ambient mismatch");
        return span(Matrix<K>::hstack(a.basis_, b.basis_));
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

private:
    Subspace(int ambient, Matrix<K> basis, std::vector<int> pivots)
        : ambient_(ambient), basis_(std::move(basis)), pivot_rows_(std::move(pivots)) {}

    Vec<K> raw_coords(const Vec<K>& v) const {
        if (static_cast<int>(v.size()) != ambient_)
            throw std::invalid_argument("Subspace::coords: size mismatch");
        Vec<K> c(dim(), K(0));
        for (int i = 0; i < dim(); ++i) c[i] = v[pivot_rows_[i]];
        return c;
    }

    int ambient_;
    Matrix<K> basis_;
    std::vector<int> pivot_rows_;
};

// basis of {v : m v = 0}
template <class K>
Subspace<K> kernel_basis(const Matrix<K>& m) {
    RrefResult<K> r = rref(m);
    std::vector<bool> is_pivot(m.cols(), false);
    for (int c : r.pivot_cols) is_pivot[c] = true;
    std::vector<Vec<K>> gens;
    for (int f = 0; f < m.cols(); ++f) {
        if (is_pivot[f]) continue;
        Vec<K> v(m.cols(), K(0));
        v[f] = K(1);
        for (int k = 0; k < r.rank; ++k) v[r.pivot_cols[k]] = -r.reduced.get(k, f);
        gens.push_back(std::move(v));
    }
    return Subspace<K>::span(Matrix<K>::from_columns(m.cols(), gens));
}

// basis of the column space
template <class K>
Subspace<K> image_basis(const Matrix<K>& m) {
    return Subspace<K>::span(m);
}

// {x : m x in span(w)}
template <class K>
Subspace<K> preimage_subspace(const Matrix<K>& m, const Subspace<K>& w) {
    if (w.ambient_dim() != m.rows())
        throw std::invalid_argument("preimage_subspace: ambient mismatch");
    Matrix<K> aug = Matrix<K>::hstack(m, w.basis());
    Subspace<K> ker = kernel_basis(aug);
    // kernel vectors of [m | W], projected onto the domain block
    Matrix<K> proj(m.cols(), ker.dim());
    ker.basis().for_each([&](int i, int j, const K& v) {
        if (i < m.cols()) proj.set(i, j, v);
    });
    return Subspace<K>::span(proj);
}

template <class K>
struct QuotientData {
    Subspace<K> numerator;      // V
    Subspace<K> denominator;    // W
    Matrix<K> representatives;  // ambient x q, columns map to quotient basis classes
    Matrix<K> projection;       // q x dim V, in V-coordinates
    int dim = 0;

    // class of an ambient vector lying in V
    Vec<K> project(const Vec<K>& ambient_vec) const {
        return projection.apply(numerator.coords(ambient_vec));
    }
};

// basis representatives of V/W and the projection V -> V/W.
// Rejects W not contained in V, reporting a witness vector.
template <class K>
QuotientData<K> quotient_basis(const Subspace<K>& v, const Subspace<K>& w) {
    if (v.ambient_dim() != w.ambient_dim())
        throw std::invalid_argument("quotient_basis: ambient mismatch");
    for (int j = 0; j < w.dim(); ++j) {
        if (!v.contains(w.basis().column(j))) {
            std::ostringstream os;
            os << "quotient_basis: subspace not contained; witness column " << j << " = (";
            Vec<K> col = w.basis().column(j);
            for (std::size_t i = 0; i < col.size(); ++i)
                os << (i ? "," : "") << to_string(col[i]);
            os << ")";
            throw invariant_error(os.str());
        }
    }

    Matrix<K> w_in_v = v.coords(w.basis());       // dimV x dimW
    RrefResult<K> r = rref(w_in_v.transpose());   // rows: W-vectors in V-coords
    std::vector<bool> is_pivot(v.dim(), false);
    for (int c : r.pivot_cols) is_pivot[c] = true;

    QuotientData<K> q;
    q.numerator = v;
    q.denominator = w;
    q.dim = v.dim() - r.rank;

    std::vector<int> free_coords;
    for (int j = 0; j < v.dim(); ++j)
        if (!is_pivot[j]) free_coords.push_back(j);

    q.representatives = Matrix<K>(v.ambient_dim(), q.dim);
    for (int k = 0; k < q.dim; ++k) {
        Vec<K> col = v.basis().column(free_coords[k]);
        for (int i = 0; i < v.ambient_dim(); ++i)
            if (!col[i].is_zero()) q.representatives.set(i, k, col[i]);
    }

    // reduce each V-basis coordinate vector modulo the W rows, read off free coords
    q.projection = Matrix<K>(q.dim, v.dim());
    for (int j = 0; j < v.dim(); ++j) {
        Vec<K> e(v.dim(), K(0));
        e[j] = K(1);
        for (int k = 0; k < r.rank; ++k) {
            K c = e[r.pivot_cols[k]];
            if (c.is_zero()) continue;
            for (const auto& [col, val] : r.reduced.row(k)) e[col] -= c * val;
        }
        for (int k = 0; k < q.dim; ++k)
            if (!e[free_coords[k]].is_zero()) q.projection.set(k, j, e[free_coords[k]]);
    }
    return q;
}

}  // namespace cychom
