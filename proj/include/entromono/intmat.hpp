#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "entromono/errors.hpp"

namespace entromono::intmat {

using Int = mpz_class;

// Dense row-major integer matrix. Transform bookkeeping in the normal-form
// routines can grow entries well past 64 bits, hence GMP throughout.
struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<Int> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    Int& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
    bool operator==(const Mat& o) const = default;

    static Mat identity(std::size_t n) {
        Mat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }
};

inline Mat mul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw Error("matrix product shape mismatch");
    Mat z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            if (x(i, k) == 0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += x(i, k) * y(k, j);
        }
    return z;
}

inline Mat transpose(const Mat& m) {
    Mat t(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) t(j, i) = m(i, j);
    return t;
}

// U*A*V = D with U, V unimodular, D diagonal, D_11 | D_22 | ..., diagonal
// nonnegative. Inverses are tracked alongside so callers never invert.
struct SmithResult {
    Mat u, u_inv, d, v, v_inv;
};

namespace detail {

struct SmithOps {
    Mat* d;
    Mat* u;
    Mat* u_inv;
    Mat* v;
    Mat* v_inv;

    void row_axpy(std::size_t i, std::size_t t, const Int& q) {  // row_i -= q * row_t
        for (std::size_t j = 0; j < d->cols; ++j) (*d)(i, j) -= q * (*d)(t, j);
        for (std::size_t j = 0; j < u->cols; ++j) (*u)(i, j) -= q * (*u)(t, j);
        for (std::size_t k = 0; k < u_inv->rows; ++k) (*u_inv)(k, t) += q * (*u_inv)(k, i);
    }
    void row_swap(std::size_t i, std::size_t t) {
        for (std::size_t j = 0; j < d->cols; ++j) std::swap((*d)(i, j), (*d)(t, j));
        for (std::size_t j = 0; j < u->cols; ++j) std::swap((*u)(i, j), (*u)(t, j));
        for (std::size_t k = 0; k < u_inv->rows; ++k) std::swap((*u_inv)(k, i), (*u_inv)(k, t));
    }
    void row_negate(std::size_t i) {
        for (std::size_t j = 0; j < d->cols; ++j) (*d)(i, j) = -(*d)(i, j);
        for (std::size_t j = 0; j < u->cols; ++j) (*u)(i, j) = -(*u)(i, j);
        for (std::size_t k = 0; k < u_inv->rows; ++k) (*u_inv)(k, i) = -(*u_inv)(k, i);
    }
    void col_axpy(std::size_t j, std::size_t t, const Int& q) {  // col_j -= q * col_t
        for (std::size_t i = 0; i < d->rows; ++i) (*d)(i, j) -= q * (*d)(i, t);
        for (std::size_t i = 0; i < v->rows; ++i) (*v)(i, j) -= q * (*v)(i, t);
        for (std::size_t m = 0; m < v_inv->cols; ++m) (*v_inv)(t, m) += q * (*v_inv)(j, m);
    }
    void col_swap(std::size_t j, std::size_t t) {
        for (std::size_t i = 0; i < d->rows; ++i) std::swap((*d)(i, j), (*d)(i, t));
        for (std::size_t i = 0; i < v->rows; ++i) std::swap((*v)(i, j), (*v)(i, t));
        for (std::size_t m = 0; m < v_inv->cols; ++m) std::swap((*v_inv)(j, m), (*v_inv)(t, m));
    }
    void col_negate(std::size_t j) {
        for (std::size_t i = 0; i < d->rows; ++i) (*d)(i, j) = -(*d)(i, j);
        for (std::size_t i = 0; i < v->rows; ++i) (*v)(i, j) = -(*v)(i, j);
        for (std::size_t m = 0; m < v_inv->cols; ++m) (*v_inv)(j, m) = -(*v_inv)(j, m);
    }
};

}  // namespace detail

inline SmithResult smith_normal_form(const Mat& A) {
    SmithResult r;
    r.d = A;
    r.u = Mat::identity(A.rows);
    r.u_inv = Mat::identity(A.rows);
    r.v = Mat::identity(A.cols);
    r.v_inv = Mat::identity(A.cols);
    detail::SmithOps ops{&r.d, &r.u, &r.u_inv, &r.v, &r.v_inv};
    Mat& d = r.d;
    const std::size_t n = std::min(A.rows, A.cols);

    for (std::size_t t = 0; t < n; ++t) {
        // pick the absolutely smallest nonzero entry of the trailing block as pivot
        bool found = false;
        std::size_t pi = t, pj = t;
        for (std::size_t i = t; i < d.rows; ++i)
            for (std::size_t j = t; j < d.cols; ++j)
                if (d(i, j) != 0 && (!found || mpz_cmpabs(d(i, j).get_mpz_t(), d(pi, pj).get_mpz_t()) < 0)) {
                    found = true;
                    pi = i;
                    pj = j;
                }
        if (!found) break;
        if (pi != t) ops.row_swap(pi, t);
        if (pj != t) ops.col_swap(pj, t);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < d.rows; ++i) {
                if (d(i, t) == 0) continue;
                Int q = d(i, t) / d(t, t);
                ops.row_axpy(i, t, q);
                if (d(i, t) != 0) {  // gcd step: remainder becomes the new pivot
                    ops.row_swap(i, t);
                    clean = false;
                }
            }
            for (std::size_t j = t + 1; j < d.cols; ++j) {
                if (d(t, j) == 0) continue;
                Int q = d(t, j) / d(t, t);
                ops.col_axpy(j, t, q);
                if (d(t, j) != 0) {
                    ops.col_swap(j, t);
                    clean = false;
                }
            }
            if (!clean) continue;
            // pivot must divide the whole trailing block for the chain
            bool chain_ok = true;
            for (std::size_t i = t + 1; i < d.rows && chain_ok; ++i)
                for (std::size_t j = t + 1; j < d.cols && chain_ok; ++j)
                    if (d(i, j) % d(t, t) != 0) {
                        ops.row_axpy(t, i, Int(-1));  // row_t += row_i
                        chain_ok = false;
                    }
            if (chain_ok) break;
        }
    }
    for (std::size_t t = 0; t < n; ++t)
        if (d(t, t) < 0) ops.row_negate(t);
    return r;
}

// Row-style Hermite normal form: echelon, positive pivots, entries above each
// pivot reduced into [0, pivot). Unique per row lattice; zero rows dropped.
inline Mat row_hnf(const Mat& A) {
    Mat h = A;
    std::size_t r = 0;
    for (std::size_t c = 0; c < h.cols && r < h.rows; ++c) {
        std::size_t piv = r;
        bool found = false;
        for (std::size_t i = r; i < h.rows; ++i)
            if (h(i, c) != 0 && (!found || mpz_cmpabs(h(i, c).get_mpz_t(), h(piv, c).get_mpz_t()) < 0)) {
                piv = i;
                found = true;
            }
        if (!found) continue;
        for (std::size_t j = 0; j < h.cols; ++j) std::swap(h(r, j), h(piv, j));
        for (;;) {
            bool again = false;
            for (std::size_t i = r + 1; i < h.rows; ++i) {
                if (h(i, c) == 0) continue;
                Int q = h(i, c) / h(r, c);
                for (std::size_t j = 0; j < h.cols; ++j) h(i, j) -= q * h(r, j);
                if (h(i, c) != 0) {
                    for (std::size_t j = 0; j < h.cols; ++j) std::swap(h(r, j), h(i, j));
                    again = true;
                }
            }
            if (!again) break;
        }
        if (h(r, c) < 0)
            for (std::size_t j = 0; j < h.cols; ++j) h(r, j) = -h(r, j);
        for (std::size_t i = 0; i < r; ++i) {
            Int q;
            mpz_fdiv_q(q.get_mpz_t(), h(i, c).get_mpz_t(), h(r, c).get_mpz_t());
            if (q != 0)
                for (std::size_t j = 0; j < h.cols; ++j) h(i, j) -= q * h(r, j);
        }
        ++r;
    }
    Mat out(r, h.cols);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < h.cols; ++j) out(i, j) = h(i, j);
    return out;
}

// Coefficients y with y * H = x, for H a row-HNF basis; nullopt if x is
// outside the row lattice. Forward substitution along pivot columns.
inline std::optional<std::vector<Int>> solve_in_row_lattice(const Mat& h, const std::vector<Int>& x) {
    if (x.size() != h.cols) throw Error("solve_in_row_lattice shape mismatch");
    std::vector<Int> residue = x;
    std::vector<Int> y(h.rows);
    std::size_t row = 0;
    for (std::size_t c = 0; c < h.cols; ++c) {
        if (row < h.rows && h(row, c) != 0) {
            Int q, rem;
            mpz_fdiv_qr(q.get_mpz_t(), rem.get_mpz_t(), residue[c].get_mpz_t(), h(row, c).get_mpz_t());
            if (rem != 0) return std::nullopt;
            y[row] = q;
            if (q != 0)
                for (std::size_t j = c; j < h.cols; ++j) residue[j] -= q * h(row, j);
            ++row;
        } else if (residue[c] != 0) {
            return std::nullopt;
        }
    }
    return y;
}

// Particular integer solution of A x = b, if one exists.
inline std::optional<std::vector<Int>> solve_linear(const Mat& A, const std::vector<Int>& b) {
    if (b.size() != A.rows) throw Error("solve_linear shape mismatch");
    SmithResult s = smith_normal_form(A);
    std::vector<Int> c(A.rows);
    for (std::size_t i = 0; i < A.rows; ++i)
        for (std::size_t j = 0; j < A.rows; ++j) c[i] += s.u(i, j) * b[j];
    std::vector<Int> y(A.cols);
    const std::size_t n = std::min(A.rows, A.cols);
    for (std::size_t i = 0; i < A.rows; ++i) {
        if (i < n && s.d(i, i) != 0) {
            if (c[i] % s.d(i, i) != 0) return std::nullopt;
            y[i] = c[i] / s.d(i, i);
        } else if (c[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Int> x(A.cols);
    for (std::size_t i = 0; i < A.cols; ++i)
        for (std::size_t j = 0; j < A.cols; ++j) x[i] += s.v(i, j) * y[j];
    return x;
}

// Basis (as columns) of { z : A z = 0 }.
inline Mat kernel_basis(const Mat& A) {
    SmithResult s = smith_normal_form(A);
    const std::size_t n = std::min(A.rows, A.cols);
    std::vector<std::size_t> free_cols;
    for (std::size_t j = 0; j < A.cols; ++j)
        if (j >= n || s.d(j, j) == 0) free_cols.push_back(j);
    Mat k(A.cols, free_cols.size());
    for (std::size_t m = 0; m < free_cols.size(); ++m)
        for (std::size_t i = 0; i < A.cols; ++i) k(i, m) = s.v(i, free_cols[m]);
    return k;
}

}  // namespace entromono::intmat
