#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <vector>

namespace kw {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using CVector = Eigen::VectorXcd;

class SingularMatrixError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LabelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Real antisymmetric matrix with row/column labels.  Every write goes through
// set(), which keeps A(j,i) = -A(i,j); the diagonal is identically zero.
class SkewMatrix {
public:
    SkewMatrix() = default;
    explicit SkewMatrix(int n);

    // Builds from the strict upper triangle of `a`, ignoring everything else.
    static SkewMatrix from_upper(const RMatrix& a);
    // Builds from a dense matrix that must already be antisymmetric within `tol`
    // (relative to its max entry).  Throws std::invalid_argument otherwise.
    static SkewMatrix from_dense(const RMatrix& a, double tol = 1e-12);

    int size() const { return static_cast<int>(a_.rows()); }
    double operator()(int i, int j) const { return a_(i, j); }
    void set(int i, int j, double v);
    const RMatrix& dense() const { return a_; }

    const std::vector<int>& labels() const { return labels_; }
    void set_labels(std::vector<int> labels);
    int index_of(int label) const;

private:
    RMatrix a_;
    std::vector<int> labels_;
};

// Pfaffian via Parlett-Reid tridiagonalisation with partial pivoting.
// Odd dimension returns 0, the empty matrix returns 1.
double pfaffian(const SkewMatrix& a);
double pfaffian_dense(RMatrix a);
cplx pfaffian_dense(CMatrix a);

// Pfaffian of the submatrix on the given labels, in the given order.
double pfaffian_minor(const SkewMatrix& a, const std::vector<int>& labels);
// Same, addressed by raw row indices.
double pfaffian_minor_indices(const RMatrix& a, const std::vector<int>& rows);

// LU-based determinant and inverse.  invert() throws SingularMatrixError when
// a pivot falls below 1e-12 times the max-abs entry.
cplx det(const CMatrix& a);
double det(const RMatrix& a);
CMatrix invert(const CMatrix& a);
RMatrix invert(const RMatrix& a);

double max_abs(const CMatrix& a);
double max_abs(const RMatrix& a);

} // namespace kw
