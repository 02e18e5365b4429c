#include "jnr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace jnr::linalg {

SymmetricMatrix::SymmetricMatrix(int dim) : dim_(dim) {
    if (dim < 1) throw std::invalid_argument("SymmetricMatrix: dim must be >= 1");
    data_.assign(static_cast<std::size_t>(dim) * (dim + 1) / 2, 0.0);
}

std::size_t SymmetricMatrix::index(int i, int j) const {
    if (i < 0 || j < 0 || i >= dim_ || j >= dim_)
        throw std::out_of_range("SymmetricMatrix: index out of range");
    if (i > j) std::swap(i, j);
    // row-wise packed upper triangle
    return static_cast<std::size_t>(i) * dim_ - static_cast<std::size_t>(i) * (i - 1) / 2
         + static_cast<std::size_t>(j - i);
}

SymmetricMatrix SymmetricMatrix::from_dense(const Eigen::MatrixXd& A) {
    if (A.rows() != A.cols() || A.rows() < 1)
        throw std::invalid_argument("SymmetricMatrix: square matrix required");
    if (!A.allFinite())
        throw std::invalid_argument("SymmetricMatrix: non-finite entries");
    SymmetricMatrix S(static_cast<int>(A.rows()));
    for (int i = 0; i < S.dim_; ++i)
        for (int j = i; j < S.dim_; ++j)
            S.set(i, j, 0.5 * (A(i, j) + A(j, i)));
    return S;
}

Eigen::MatrixXd SymmetricMatrix::dense() const {
    Eigen::MatrixXd A(dim_, dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            A(i, j) = A(j, i) = (*this)(i, j);
    return A;
}

double SymmetricMatrix::frobenius_norm() const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) {
            double v = (*this)(i, j) * (*this)(i, j);
            s += (i == j) ? v : 2.0 * v;
        }
    return std::sqrt(s);
}

double SymmetricMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

// One cyclic sweep of Jacobi rotations over the strict upper triangle.
// Returns the off-diagonal Frobenius mass after the sweep.
double jacobi_sweep(Eigen::MatrixXd& A, Eigen::MatrixXd& V) {
    const int n = static_cast<int>(A.rows());
    for (int p = 0; p < n - 1; ++p) {
        for (int q = p + 1; q < n; ++q) {
            const double apq = A(p, q);
            if (apq == 0.0) continue;
            const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
            const double t = (theta >= 0 ? 1.0 : -1.0)
                           / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
            const double c = 1.0 / std::sqrt(t * t + 1.0);
            const double s = t * c;
            const double tau = s / (1.0 + c);
            const double app = A(p, p), aqq = A(q, q);
            A(p, p) = app - t * apq;
            A(q, q) = aqq + t * apq;
            A(p, q) = A(q, p) = 0.0;
            for (int r = 0; r < n; ++r) {
                if (r != p && r != q) {
                    const double arp = A(r, p), arq = A(r, q);
                    A(r, p) = A(p, r) = arp - s * (arq + tau * arp);
                    A(r, q) = A(q, r) = arq + s * (arp - tau * arq);
                }
                const double vrp = V(r, p), vrq = V(r, q);
                V(r, p) = vrp - s * (vrq + tau * vrp);
                V(r, q) = vrq + s * (vrp - tau * vrq);
            }
        }
    }
    double off = 0.0;
    for (int p = 0; p < n - 1; ++p)
        for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    return off;
}

} // namespace

EigenDecomposition sym_eig(const Eigen::MatrixXd& A_in) {
    if (A_in.rows() != A_in.cols() || A_in.rows() < 1)
        throw std::invalid_argument("sym_eig: square matrix required");
    if (!A_in.allFinite())
        throw std::invalid_argument("sym_eig: non-finite entries");

    const int n = static_cast<int>(A_in.rows());
    Eigen::MatrixXd A = 0.5 * (A_in + A_in.transpose());
    Eigen::MatrixXd V = Eigen::MatrixXd::Identity(n, n);

    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double tol = 1e-30 * scale * scale * n * n;
    for (int sweep = 0; sweep < 64; ++sweep) {
        if (jacobi_sweep(A, V) <= tol) break;
    }

    EigenDecomposition d;
    d.values.resize(n);
    d.vectors.resize(n, n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int i, int j) { return A(i, i) < A(j, j); });
    for (int i = 0; i < n; ++i) {
        d.values[i] = A(order[i], order[i]);
        d.vectors.col(i) = V.col(order[i]);
    }
    return d;
}

EigenDecomposition sym_eig(const SymmetricMatrix& A) { return sym_eig(A.dense()); }

double min_eigenvalue(const Eigen::MatrixXd& A) { return sym_eig(A).values[0]; }
double min_eigenvalue(const SymmetricMatrix& A) { return min_eigenvalue(A.dense()); }

NullspaceBasis nullspace_basis(const Eigen::VectorXd& h, double h0) {
    const int k = static_cast<int>(h.size());
    if (k < 1 || h.norm() == 0.0)
        throw std::invalid_argument("nullspace_basis: h must be nonzero");
    // Householder QR of h: the trailing k-1 columns of Q span h-perp.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(h);
    Eigen::MatrixXd Q = qr.householderQ();
    NullspaceBasis b;
    b.V = Q.rightCols(k - 1);
    b.y0 = -(h0 / h.squaredNorm()) * h;
    return b;
}

DependenceResult linear_dependence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                                   double rel_tol) {
    if (P.rows() != Q.rows() || P.cols() != Q.cols() || P.rows() != P.cols())
        throw std::invalid_argument("linear_dependence: dimension mismatch");
    const double np = P.norm(), nq = Q.norm();
    const double scale = std::max({np, nq, 1.0});
    DependenceResult r;
    if (np == 0.0 && nq == 0.0) {
        r.kind = DependenceKind::BothZero;
        return r;
    }
    if (np == 0.0) {
        // P = 0 * Q: dependent with roles swapped
        r.kind = DependenceKind::Dependent;
        r.swapped = true;
        r.t_star = 0.0;
        return r;
    }
    const double t = (P.array() * Q.array()).sum() / (np * np);
    const double res = (Q - t * P).norm();
    r.residual = res / scale;
    if (res <= rel_tol * scale) {
        r.kind = DependenceKind::Dependent;
        r.t_star = t;
    } else {
        r.kind = DependenceKind::Independent;
    }
    return r;
}

} // namespace jnr::linalg
