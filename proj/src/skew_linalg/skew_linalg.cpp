#include "kacward/skew_linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace kw {

SkewMatrix::SkewMatrix(int n) : a_(RMatrix::Zero(n, n)), labels_(n) {
    std::iota(labels_.begin(), labels_.end(), 0);
}

SkewMatrix SkewMatrix::from_upper(const RMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("skew matrix must be square");
    SkewMatrix s(static_cast<int>(a.rows()));
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < j; ++i) s.set(i, j, a(i, j));
    return s;
}

SkewMatrix SkewMatrix::from_dense(const RMatrix& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("skew matrix must be square");
    double scale = std::max(1.0, max_abs(a));
    double asym = (a + a.transpose()).cwiseAbs().maxCoeff();
    if (a.size() > 0 && asym > tol * scale)
        throw std::invalid_argument("matrix is not antisymmetric (residual " + std::to_string(asym) + ")");
    return from_upper(a);
}

void SkewMatrix::set(int i, int j, double v) {
    if (i == j) {
        if (v != 0.0) throw std::invalid_argument("diagonal of a skew matrix must vanish");
        return;
    }
    a_(i, j) = v;
    a_(j, i) = -v;
}

void SkewMatrix::set_labels(std::vector<int> labels) {
    if (static_cast<int>(labels.size()) != size())
        throw LabelError("label count " + std::to_string(labels.size()) + " does not match dimension " +
                         std::to_string(size()));
    std::vector<int> sorted = labels;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) throw LabelError("duplicate label");
    labels_ = std::move(labels);
}

int SkewMatrix::index_of(int label) const {
    for (int i = 0; i < size(); ++i)
        if (labels_[i] == label) return i;
    throw LabelError("unknown label " + std::to_string(label));
}

namespace {

template <typename Scalar>
Scalar pfaffian_impl(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& a) {
    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    const Eigen::Index n = a.rows();
    if (n == 0) return Scalar(1);
    if (n % 2 == 1) return Scalar(0);
    // Pivots below the rounding level of the input count as exact zeros.
    const double floor = n * std::numeric_limits<double>::epsilon() * a.cwiseAbs().maxCoeff();
    Scalar pf(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index kp = k + 1;
        double best = std::abs(a(k + 1, k));
        for (Eigen::Index i = k + 2; i < n; ++i) {
            double v = std::abs(a(i, k));
            if (v > best) {
                best = v;
                kp = i;
            }
        }
        if (kp != k + 1) {
            a.row(k + 1).swap(a.row(kp));
            a.col(k + 1).swap(a.col(kp));
            pf = -pf;
        }
        if (best <= floor) return Scalar(0);
        pf *= a(k, k + 1);
        const Eigen::Index m = n - k - 2;
        if (m > 0) {
            Vec tau = a.row(k).segment(k + 2, m).transpose() / a(k, k + 1);
            Vec col = a.col(k + 1).segment(k + 2, m);
            auto block = a.bottomRightCorner(m, m);
            block.noalias() += tau * col.transpose();
            block.noalias() -= col * tau.transpose();
        }
    }
    return pf;
}

template <typename M>
void check_square(const M& a, const char* what) {
    if (a.rows() != a.cols()) throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

template <typename M>
void check_pivots(const M& lu, double scale) {
    const double threshold = 1e-12 * scale;
    for (Eigen::Index i = 0; i < lu.rows(); ++i)
        if (std::abs(lu(i, i)) <= threshold)
            throw SingularMatrixError("singular matrix: pivot " + std::to_string(std::abs(lu(i, i))) +
                                      " at step " + std::to_string(i));
}

} // namespace

double pfaffian_dense(RMatrix a) {
    check_square(a, "pfaffian");
    return pfaffian_impl(a);
}

cplx pfaffian_dense(CMatrix a) {
    check_square(a, "pfaffian");
    return pfaffian_impl(a);
}

double pfaffian(const SkewMatrix& a) { return pfaffian_dense(a.dense()); }

double pfaffian_minor_indices(const RMatrix& a, const std::vector<int>& rows) {
    const int m = static_cast<int>(rows.size());
    for (int r : rows)
        if (r < 0 || r >= a.rows()) throw LabelError("row index " + std::to_string(r) + " out of range");
    if (m % 2 == 1) return 0.0;
    RMatrix sub(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) sub(i, j) = a(rows[i], rows[j]);
    return pfaffian_impl(sub);
}

double pfaffian_minor(const SkewMatrix& a, const std::vector<int>& labels) {
    std::vector<int> rows;
    rows.reserve(labels.size());
    for (int l : labels) rows.push_back(a.index_of(l));
    for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = i + 1; j < rows.size(); ++j)
            if (rows[i] == rows[j]) return 0.0;
    return pfaffian_minor_indices(a.dense(), rows);
}

double max_abs(const CMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }
double max_abs(const RMatrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

cplx det(const CMatrix& a) {
    check_square(a, "det");
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<CMatrix>(a).determinant();
}

double det(const RMatrix& a) {
    check_square(a, "det");
    if (a.rows() == 0) return 1.0;
    return Eigen::PartialPivLU<RMatrix>(a).determinant();
}

CMatrix invert(const CMatrix& a) {
    check_square(a, "invert");
    Eigen::PartialPivLU<CMatrix> lu(a);
    check_pivots(lu.matrixLU(), max_abs(a));
    return lu.inverse();
}

RMatrix invert(const RMatrix& a) {
    check_square(a, "invert");
    Eigen::PartialPivLU<RMatrix> lu(a);
    check_pivots(lu.matrixLU(), max_abs(a));
    return lu.inverse();
}

} // namespace kw
