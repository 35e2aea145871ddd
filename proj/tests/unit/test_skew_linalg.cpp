#include "kacward/skew_linalg.hpp"

#include <doctest.h>

#include <random>

using namespace kw;

namespace {

RMatrix random_skew(int n, std::mt19937& rng) {
    std::normal_distribution<double> d;
    RMatrix a = RMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            a(i, j) = d(rng);
            a(j, i) = -a(i, j);
        }
    return a;
}

} // namespace

TEST_SUITE("skew_linalg") {

TEST_CASE("pfaffian of small matrices") {
    CHECK(pfaffian(SkewMatrix(0)) == 1.0);
    SkewMatrix a(2);
    a.set(0, 1, 3.5);
    CHECK(pfaffian(a) == doctest::Approx(3.5));
    CHECK(a(1, 0) == -3.5);
    SkewMatrix odd(3);
    odd.set(0, 1, 1.0);
    odd.set(1, 2, 2.0);
    CHECK(pfaffian(odd) == 0.0);

    // Pf of a 4x4 matrix: a01 a23 - a02 a13 + a03 a12
    SkewMatrix b(4);
    b.set(0, 1, 1.0);
    b.set(0, 2, 2.0);
    b.set(0, 3, 3.0);
    b.set(1, 2, 4.0);
    b.set(1, 3, 5.0);
    b.set(2, 3, 6.0);
    CHECK(pfaffian(b) == doctest::Approx(1 * 6 - 2 * 5 + 3 * 4));
}

TEST_CASE("pfaffian squared is the determinant") {
    std::mt19937 rng(7);
    for (int n : {2, 4, 6, 10, 20}) {
        const RMatrix a = random_skew(n, rng);
        const double pf = pfaffian_dense(a);
        CHECK(pf * pf == doctest::Approx(det(a)).epsilon(1e-9));
    }
    CHECK(pfaffian_dense(random_skew(41, rng)) == 0.0);
}

TEST_CASE("complex pfaffian agrees with the real one") {
    std::mt19937 rng(11);
    const RMatrix a = random_skew(8, rng);
    const cplx z = pfaffian_dense(CMatrix(a.cast<cplx>()));
    CHECK(z.real() == doctest::Approx(pfaffian_dense(a)));
    CHECK(std::abs(z.imag()) < 1e-12);
    const cplx w = pfaffian_dense(CMatrix(cplx(0, 1) * a.cast<cplx>()));
    // Pf(cA) = c^{n/2} Pf(A)
    CHECK(std::abs(w - std::pow(cplx(0, 1), 4) * pfaffian_dense(a)) < 1e-9);
}

TEST_CASE("pfaffian changes sign under a simultaneous row and column swap") {
    std::mt19937 rng(3);
    RMatrix a = random_skew(6, rng);
    const double pf = pfaffian_dense(a);
    a.row(1).swap(a.row(4));
    a.col(1).swap(a.col(4));
    CHECK(pfaffian_dense(a) == doctest::Approx(-pf));
}

TEST_CASE("pfaffian minors follow label order") {
    std::mt19937 rng(5);
    SkewMatrix s = SkewMatrix::from_dense(random_skew(6, rng));
    s.set_labels({10, 11, 12, 13, 14, 15});
    const double m = pfaffian_minor(s, {10, 12, 13, 15});
    CHECK(pfaffian_minor(s, {12, 10, 13, 15}) == doctest::Approx(-m));
    CHECK(pfaffian_minor_indices(s.dense(), {0, 2, 3, 5}) == doctest::Approx(m));
    CHECK(pfaffian_minor(s, {}) == 1.0);
    CHECK_THROWS_AS(pfaffian_minor(s, {10, 99}), LabelError);
    CHECK_THROWS_AS(s.set_labels({1, 1, 2, 3, 4, 5}), LabelError);
}

TEST_CASE("from_dense rejects matrices that are not antisymmetric") {
    RMatrix a = RMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    a(1, 0) = 0.5;
    CHECK_THROWS_AS(SkewMatrix::from_dense(a), std::invalid_argument);
    const SkewMatrix u = SkewMatrix::from_upper(a);
    CHECK(u(1, 0) == -1.0);
}

TEST_CASE("inverse and determinant") {
    std::mt19937 rng(9);
    const RMatrix a = random_skew(6, rng);
    const RMatrix inv = invert(a);
    CHECK(max_abs(RMatrix(a * inv - RMatrix::Identity(6, 6))) < 1e-10);
    CMatrix c = CMatrix::Identity(3, 3);
    c(0, 1) = cplx(0, 2);
    CHECK(std::abs(det(c) - cplx(1, 0)) < 1e-14);
    CHECK_THROWS_AS(invert(RMatrix(RMatrix::Zero(3, 3))), SingularMatrixError);
    CHECK_THROWS_AS(invert(CMatrix(CMatrix::Zero(2, 2))), SingularMatrixError);
}

TEST_CASE("rounding-level pivots give a zero pfaffian") {
    RMatrix a = RMatrix::Zero(4, 4);
    a(0, 1) = 1e-17;
    a(0, 2) = -2e-17;
    a(1, 2) = 0.5;
    a(1, 3) = 0.7;
    a(2, 3) = 0.3;
    a = RMatrix(a - a.transpose().eval());
    const double pf = pfaffian_dense(a);
    CHECK(std::isfinite(pf));
    CHECK(pf == 0.0);
}

}
