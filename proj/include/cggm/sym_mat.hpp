#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "cggm/errors.hpp"

namespace cggm {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Dense symmetric matrix with a bitwise symmetry guarantee: every path that
// writes an entry writes (i,j) and (j,i) from the same double. Sums and
// scalar multiples of symmetric operands stay bitwise symmetric, so the
// arithmetic operators below need no re-check.
class SymMat {
public:
    SymMat() : m_(Matrix::Zero(1, 1)) {}

    explicit SymMat(Index n) {
        if (n < 1) throw DimensionError("SymMat: dimension must be >= 1");
        m_ = Matrix::Zero(n, n);
    }

    static SymMat identity(Index n) {
        SymMat s(n);
        s.m_.setIdentity();
        return s;
    }

    // Takes a matrix that is already bitwise symmetric.
    static SymMat from_symmetric(Matrix a) {
        check_square(a);
        for (Index j = 0; j < a.cols(); ++j)
            for (Index i = j + 1; i < a.rows(); ++i)
                if (a(i, j) != a(j, i))
                    throw DimensionError(
                        "SymMat::from_symmetric: matrix is not bitwise "
                        "symmetric at (" + std::to_string(i) + "," +
                        std::to_string(j) + ")");
        SymMat s;
        s.m_ = std::move(a);
        return s;
    }

    // 0.5*(A + A^T), mirrored so both triangles hold identical bits.
    static SymMat symmetrized(const Matrix& a) {
        check_square(a);
        SymMat s(a.rows());
        for (Index j = 0; j < a.cols(); ++j) {
            s.m_(j, j) = a(j, j);
            for (Index i = j + 1; i < a.rows(); ++i) {
                const double v = 0.5 * (a(i, j) + a(j, i));
                s.m_(i, j) = v;
                s.m_(j, i) = v;
            }
        }
        return s;
    }

    static SymMat diagonal(const Vector& d) {
        SymMat s(d.size());
        s.m_.diagonal() = d;
        return s;
    }

    Index n() const { return m_.rows(); }

    double operator()(Index i, Index j) const { return m_(i, j); }

    void set(Index i, Index j, double v) {
        m_(i, j) = v;
        m_(j, i) = v;
    }

    Vector diag() const { return m_.diagonal(); }
    const Matrix& mat() const { return m_; }

    double norm() const { return m_.norm(); }
    double squared_norm() const { return m_.squaredNorm(); }
    double max_abs() const { return m_.cwiseAbs().maxCoeff(); }
    double trace() const { return m_.trace(); }

    SymMat& operator+=(const SymMat& o) { m_ += o.m_; return *this; }
    SymMat& operator-=(const SymMat& o) { m_ -= o.m_; return *this; }
    SymMat& operator*=(double a) { m_ *= a; return *this; }

    friend SymMat operator+(SymMat a, const SymMat& b) { a += b; return a; }
    friend SymMat operator-(SymMat a, const SymMat& b) { a -= b; return a; }
    friend SymMat operator*(double a, SymMat x) { x *= a; return x; }
    friend SymMat operator*(SymMat x, double a) { x *= a; return x; }
    friend SymMat operator-(SymMat x) { x *= -1.0; return x; }

private:
    static void check_square(const Matrix& a) {
        if (a.rows() != a.cols() || a.rows() < 1)
            throw DimensionError("SymMat: matrix must be square, n >= 1");
    }

    Matrix m_;
};

inline double dot(const SymMat& a, const SymMat& b) {
    return a.mat().cwiseProduct(b.mat()).sum();
}

// Strictly-upper-triangular vectorization of an n x n symmetric matrix,
// column-major: (1,2),(1,3),(2,3),(1,4),...  Length n(n-1)/2.
struct UpperVec {
    Index n = 1;
    Vector v;

    static Index length(Index n) { return n * (n - 1) / 2; }
};

inline UpperVec bmap(const SymMat& x) {
    const Index n = x.n();
    UpperVec u;
    u.n = n;
    u.v.resize(UpperVec::length(n));
    Index k = 0;
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i) u.v[k++] = x(i, j);
    return u;
}

// Adjoint of bmap under the trace inner product: entries are halved so that
// <bstar(u), X> = <u, bmap(X)> for all symmetric X. Zero diagonal.
inline SymMat bstar(Index n, const Vector& u) {
    if (u.size() != UpperVec::length(n))
        throw DimensionError("bstar: vector length does not match n(n-1)/2");
    SymMat s(n);
    Index k = 0;
    for (Index j = 1; j < n; ++j)
        for (Index i = 0; i < j; ++i) s.set(i, j, 0.5 * u[k++]);
    return s;
}

inline SymMat bstar(const UpperVec& u) { return bstar(u.n, u.v); }

// Eigendecomposition X = P Diag(d) P^T with d sorted non-increasing and a
// fixed sign convention (first nonzero component of each eigenvector is
// positive), so the decomposition is deterministic for a fixed input.
struct EigDecomp {
    Matrix P;
    Vector d;
};

inline EigDecomp eigh(const SymMat& x) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(x.mat());
    if (es.info() != Eigen::Success)
        throw NumericError(
            "eigh: eigendecomposition failed to converge within the QR "
            "iteration budget (30 sweeps per eigenvalue), n = " +
            std::to_string(x.n()));
    const Index n = x.n();
    EigDecomp e;
    e.P.resize(n, n);
    e.d.resize(n);
    // Eigen sorts ascending; flip to non-increasing.
    for (Index k = 0; k < n; ++k) {
        e.d[k] = es.eigenvalues()[n - 1 - k];
        e.P.col(k) = es.eigenvectors().col(n - 1 - k);
    }
    for (Index k = 0; k < n; ++k) {
        for (Index i = 0; i < n; ++i) {
            const double v = e.P(i, k);
            if (v != 0.0) {
                if (v < 0.0) e.P.col(k) = -e.P.col(k);
                break;
            }
        }
    }
    return e;
}

}  // namespace cggm
