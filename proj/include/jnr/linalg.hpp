#pragma once

#include <Eigen/Dense>
#include <vector>

namespace jnr::linalg {

/// Dense symmetric matrix stored as the packed upper triangle (row-wise).
/// Construction symmetrizes and rejects non-finite entries.
class SymmetricMatrix {
public:
    SymmetricMatrix() = default;
    explicit SymmetricMatrix(int dim);
    static SymmetricMatrix from_dense(const Eigen::MatrixXd& A);

    int dim() const { return dim_; }
    double operator()(int i, int j) const { return data_[index(i, j)]; }
    void set(int i, int j, double value) { data_[index(i, j)] = value; }

    Eigen::MatrixXd dense() const;
    double frobenius_norm() const;
    double max_abs() const;

private:
    std::size_t index(int i, int j) const;

    int dim_ = 0;
    std::vector<double> data_;
};

struct EigenDecomposition {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // orthonormal columns, A * vectors.col(i) = values[i] * vectors.col(i)
};

/// Full spectral decomposition by cyclic Jacobi rotations.
EigenDecomposition sym_eig(const Eigen::MatrixXd& A);
EigenDecomposition sym_eig(const SymmetricMatrix& A);

double min_eigenvalue(const Eigen::MatrixXd& A);
double min_eigenvalue(const SymmetricMatrix& A);

struct NullspaceBasis {
    Eigen::MatrixXd V;   // k x (k-1), orthonormal columns spanning h-perp
    Eigen::VectorXd y0;  // -(h0 / h.h) h, so h.y0 + h0 = 0
};

/// Orthonormal basis of the hyperplane {y : h.y + h0 = 0} through its nearest-to-origin point.
NullspaceBasis nullspace_basis(const Eigen::VectorXd& h, double h0);

enum class DependenceKind { Independent, Dependent, BothZero };

struct DependenceResult {
    DependenceKind kind = DependenceKind::Independent;
    double t_star = 0.0;   // Q = t_star P (or P = t_star Q when swapped)
    bool swapped = false;  // set when P == 0 and Q != 0
    double residual = 0.0; // relative Frobenius residual of the best fit
};

/// Decides whether {P, Q} span a one-dimensional set, with relative residual threshold rel_tol.
DependenceResult linear_dependence(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Q,
                                   double rel_tol = 1e-9);

} // namespace jnr::linalg
