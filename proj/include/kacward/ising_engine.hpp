#pragma once

#include "kacward/kacward_core.hpp"
#include "kacward/oracle.hpp"

#include <optional>
#include <random>
#include <vector>

namespace kw {

// ----- weights and duality -------------------------------------------------------------

enum class WeightMode { Direct, High, Low };

struct IsingWeights {
    std::vector<double> x;
    WeightMode mode = WeightMode::Direct;
    std::optional<double> beta;  // beta for High, beta* for Low
    std::vector<double> couplings;

    // x_e = tanh(beta J_e)
    static IsingWeights high(double beta, std::vector<double> couplings);
    // x_e = exp(-2 beta* J*_e)
    static IsingWeights low(double beta_star, std::vector<double> couplings);
    static IsingWeights direct(std::vector<double> x);
    // Recovers beta J_e (High) or beta* J*_e (Low) from x.
    std::vector<double> reduced_couplings() const;
};

// beta* J* with exp(-2 beta* J*) = tanh(beta J).
double dual_reduced_coupling(double beta_j);
// |sinh(2 beta J) sinh(2 beta* J*) - 1|
double kramers_wannier_defect(double beta_j, double beta_star_j_star);
// 2^|V| prod cosh(beta J_e): the factor relating the spin sum to Z_high(tanh beta J).
double high_temperature_prefactor(const EmbeddedGraph& g, double beta, const std::vector<double>& couplings);

// ----- partition function -----------------------------------------------------------------

struct PartitionResult {
    double value = 0.0;       // Z; for positive weights |Pf Khat|
    cplx complex_value;       // eps(D0) Pf Khat computed in complex arithmetic
    double pfaffian = 0.0;    // Pf Khat (real path only)
    double epsilon = 1.0;     // eps(D0)
    bool negative_weights = false;
};

PartitionResult partition_details(const EmbeddedGraph& g);
double partition_function(const EmbeddedGraph& g);
// Z_low = Z_high for the same weights; the Ising partition function on faces
// with the outer face fixed to +.
double partition_function_low(const EmbeddedGraph& g);

// ----- spin, energy, disorder --------------------------------------------------------------

// E+[sigma_u1 ... sigma_um] for faces other than the outer face.
double spin_correlation(const EmbeddedGraph& g, const std::vector<int>& faces, unsigned seed = 0);
double spin_correlation_with_cut(const EmbeddedGraph& g, const CutSet& cut);

struct EnergyResult {
    double product = 0.0;    // E+[eps_e1 ... eps_en]
    double indicator = 0.0;  // E+[prod (eps_e + 1) / 2] = P(no e_k in P)
    double inclusion_exclusion_residual = 0.0;
};
// Edges are unoriented edge ids.  eps_e = +1 when e is not in P.
EnergyResult energy_correlation(const EmbeddedGraph& g, const std::vector<int>& edges);
// (-1)^n Pf(Khat - 2 Jhat_E) / Pf Khat
double energy_product(const EmbeddedGraph& g, const std::vector<int>& edges);
// Pfaffian-process form: Pf[Khat^-1] on (e1, rev e1, ...) divided by the constant tau.
double energy_indicator(const EmbeddedGraph& g, const std::vector<int>& edges);

// <mu_v1 ... mu_v2n> = sum_{P odd exactly at v_k} x(P) / Z.
double disorder_correlation(const EmbeddedGraph& g, const std::vector<int>& vertices, unsigned seed = 0);
double disorder_correlation_with_cut(const EmbeddedGraph& g, const CutSet& primal);
// Mixed correlation sum_{P odd at v_k} (-1)^{kappa_faces . P} x(P) / Z.  Its sign
// depends on the chosen cuts.
double disorder_spin_correlation(const EmbeddedGraph& g, const std::vector<int>& vertices,
                                 const std::vector<int>& faces, unsigned seed = 0);

// ----- fermionic sign tau ---------------------------------------------------------------------

enum class Smoothing { Offset0, Offset1, Random };

struct TauOptions {
    Smoothing smoothing = Smoothing::Offset0;
    unsigned seed = 0;          // for Smoothing::Random
    bool reverse_paths = false; // walk every path from its other end
};

struct TauResult {
    cplx value;                              // sign(s) prod i conj(eta_start) eta_end exp(-i wind / 2)
    std::vector<std::pair<int, int>> pairs;  // terminal indices joined by a path (start, end)
    std::vector<double> winds;
};

// Works for edge terminals, corner terminals or both (terminals are numbered
// edges first, then corners).  Throws GraphError on a malformed configuration.
TauResult tau_sign_details(const EmbeddedGraph& g, const Configuration& cfg, const TauOptions& opt = {});
cplx tau_sign(const EmbeddedGraph& g, const Configuration& cfg, const TauOptions& opt = {});
SignRule tau_rule(const EmbeddedGraph& g, const TauOptions& opt = {});

// Pf[Khat^-1]_E (twisted by the cut when given).
double fermion_pfaffian(const EmbeddedGraph& g, const std::vector<int>& edges, const CutSet* cut = nullptr);
// Z_kappa = sum (-1)^{kappa.P} x(P) = (-1)^|kappa| eps(D0) Pf Khat_kappa
double twisted_partition(const EmbeddedGraph& g, const CutSet& cut);

// ----- corner formalism ------------------------------------------------------------------------

// Pf[4 Chat^-1] on the given corners, which must sit at pairwise distinct vertices.
// Each corner at a degree-1 vertex contributes a factor 2 relative to the
// configuration sum over C(c_1..c_2n).
double chi_correlator(const EmbeddedGraph& g, const std::vector<int>& corners, const CutSet* cut = nullptr);

// ----- complex observables ----------------------------------------------------------------------

struct Observable {
    // Per oriented edge e, the value at z_e on the sheet of o(e).  Both
    // orientations agree unless the edge crosses the cut of a spinor observable.
    std::vector<cplx> edge_values;
    std::vector<cplx> corner_values;  // per corner
    int source_edge = -1;             // oriented edge a, or -1
    int source_corner = -1;           // corner c, or -1
};

double edge_scale(double x);  // t_e = (x + 1/x)^{1/2}

// F_a(z_e) = <psi(z_e) phi_a>, F_a(c) = <psi(c) phi_a>.
Observable edge_observable(const EmbeddedGraph& g, int a, const CutSet* cut = nullptr);
// F_c(z_e) = <psi(z_e) chi_c>, F_c(c') = <psi(c') chi_c>.
Observable corner_observable(const EmbeddedGraph& g, int c, const CutSet* cut = nullptr);

struct SHolPair {
    int edge = 0;    // oriented edge e
    int corner = 0;  // c+(e) or c-(e)
    bool plus = true;
    double residual = 0.0;
};

// Residual of the s-holomorphicity relation for every pair (z_e, c+-(e)).  The
// single corner at a degree-1 vertex is both c+(e) and c-(e) and its value is
// the sum of the two projections, so half of it enters each relation.
std::vector<SHolPair> s_hol_residual(const EmbeddedGraph& g, const Observable& f);
// Largest residual over pairs away from the source: pairs at the source vertex
// o(a) (or v(c)) are skipped.
double s_hol_max_residual(const EmbeddedGraph& g, const Observable& f);
// The matrix form: max over corners c with v(c) != o(a) of |(S F)(c)| and
// |((S - iC) F)(c)|, where F holds the corner values.  Needs a graph without
// degree-1 vertices.
double s_hol_matrix_residual(const EmbeddedGraph& g, const Observable& f, const CutSet* cut = nullptr);

// Largest |Im(F(z_e1) e^{i pi/4} eta_e1)| over tails e1 (t(e1) of degree 1) with a != rev e1
// and, for a corner source, t(e1) away from the source vertex.
double boundary_residual(const EmbeddedGraph& g, const Observable& f);

struct PsiPair {
    cplx psi;
    cplx psi_dagger;
};
// Psi(z_e, z_a) and Psi^dagger(z_e, z_a) for unoriented edges e, a.
PsiPair psi_correlators(const EmbeddedGraph& g, int e, int a);
// The same values from the 2x2 matrix product with Khat^-1 blocks.
PsiPair psi_correlators_matrix(const EmbeddedGraph& g, int e, int a);

} // namespace kw
