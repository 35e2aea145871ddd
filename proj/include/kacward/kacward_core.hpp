#pragma once

#include "kacward/embedded_graph.hpp"
#include "kacward/skew_linalg.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace kw {

// Raised when a matrix that must be real (or satisfy a structural identity)
// is not; this always indicates an angle or sign convention bug.
class ConventionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MatrixBundle {
    CMatrix T;
    CMatrix KW;
    CMatrix K;
    CMatrix KhatC;           // i U K U^*, complex antisymmetric in general
    SkewMatrix Khat;         // real form; filled only when every weight is >= 0
    bool real = true;
    CVector U;               // eta_e on the diagonal
    std::vector<int> twist;  // diagonal of I_[u1..um], one entry per oriented edge
};

// Square root of a real weight: sqrt(x) for x >= 0 and i sqrt(-x) otherwise.
cplx weight_root(double x);

// Per-oriented-edge transition matrix T with exp(i w(e,e')/2) sqrt(x_e x_e').
CMatrix transition_matrix(const EmbeddedGraph& g);
// Permutation matrix J exchanging e and its reversal.
CMatrix reversal_matrix(int num_oriented);

MatrixBundle build_kacward(const EmbeddedGraph& g);
MatrixBundle build_twisted(const EmbeddedGraph& g, const CutSet& cut);
// KW = diag(twist) - T for an arbitrary +-1 diagonal.
MatrixBundle build_kacward_signed(const EmbeddedGraph& g, const std::vector<int>& twist);

// i U M U^*, checked to be real antisymmetric.
SkewMatrix hat_matrix(const CMatrix& m, const CVector& u, const char* what);

// Sign of the Pfaffian of the long-edge matching: the constant term of Pf Khat.
double epsilon_d0(const EmbeddedGraph& g);

// ----- corner formalism ---------------------------------------------------------------

// Rotation angle from the decoration at c to the oriented edge e (v(c) = o(e)).
double corner_edge_angle(const EmbeddedGraph& g, int c, int e);
// w(c, reversed c'): direct turn for corners at the same vertex, or along c + e + reversed c'
// when v(c) = o(e) and v(c') = t(e).
double corner_pair_angle(const EmbeddedGraph& g, int c, int c2, int e = -1);

struct CornerBundle {
    CMatrix B;      // corners x oriented edges
    CMatrix C;      // B K B^*
    CMatrix F;      // (corners + oriented edges) square
    RMatrix Bhat;
    SkewMatrix Chat;
    SkewMatrix Fhat;
    CVector UC;     // eta_c
};

CornerBundle build_corner_bundle(const EmbeddedGraph& g, const CutSet* cut = nullptr);
// Expected |det B| from the vertex-block structure: 2 per vertex of degree >= 2
// times prod x_e^{-1}.
double expected_det_b(const EmbeddedGraph& g);

struct KasteleynFace {
    std::vector<int> vertices;  // Fisher-graph vertices in counterclockwise order
    int clockwise = 0;  // edges p -> q of the walk with Fhat(q, p) > 0
    bool ok = false;
};

struct KasteleynReport {
    std::vector<KasteleynFace> faces;
    int failures = 0;
    // The orientation read off Fhat is global up to reversal; reversal flips the
    // parity of odd faces, so the report uses whichever convention fits.
    bool reversed = false;
    bool all_ok() const { return failures == 0; }
};

// Checks that the signs of Fhat give a Kasteleyn orientation of the Fisher graph:
// every bounded face must have an odd number of clockwise-oriented edges, for the
// orientation p -> q when Fhat(p, q) > 0 or for its global reversal.
KasteleynReport check_kasteleyn(const EmbeddedGraph& g, const RMatrix& fhat);

// ----- propagation matrices ------------------------------------------------------------

struct PropagationBundle {
    CMatrix Y, D, S, W, C;
    std::vector<double> theta, p, q;  // per unoriented edge
    double residual_s = 0.0;          // |S - (Y + iI) C / 2|
    double residual_wd = 0.0;         // |(Y + iI) C / 2 - W D|
    double residual_ic = 0.0;         // |iC - (W D - W^* D^*)|
    double residual_minus = 0.0;      // |(Y - iI) C / 2 - W^* D^*|
};

struct EdgeAngles {
    double theta, p, q;
};
EdgeAngles edge_angles(double x);

// Requires a graph without degree-1 vertices.  With `verify`, the factorisation
// identities are checked to 1e-10 and ConventionError is raised on failure.
PropagationBundle build_propagation(const EmbeddedGraph& g, const CutSet* cut = nullptr, bool verify = true);

} // namespace kw
