#pragma once

#include "kacward/ising_engine.hpp"

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kw {

// Raised when a square root cannot be given a sign, or a connection is not flat.
class SurfaceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SurfaceKind { PuncturedDisk, Torus };

// A spin structure relative to the constant reference vector field, stored as a
// Z2 connection phi on unoriented edges.  `bits` are its coordinates: one bit per
// puncture (the puncture-to-outer-face cut is included) or, on the torus, the
// twists across the vertical and horizontal cut lines.
struct SpinStructure {
    SurfaceKind kind = SurfaceKind::Torus;
    std::vector<int> bits;
    std::vector<uint8_t> phi;
};

// The four torus structures, in the order (0,0), (1,0), (0,1), (1,1).
std::vector<SpinStructure> torus_spin_structures(const EmbeddedGraph& g);

// An m-punctured disk: a plane graph whose inner faces `punctures` are removed.
struct PuncturedDisk {
    EmbeddedGraph graph;
    std::vector<int> punctures;
    std::vector<CutSet> cuts;  // dual path from each puncture to the outer face
};
PuncturedDisk make_punctured_disk(const EmbeddedGraph& g, std::vector<int> punctures, unsigned seed = 0);
// 2^m structures; structure k twists along the cuts of the punctures in the bits of k.
std::vector<SpinStructure> punctured_spin_structures(const PuncturedDisk& d);

// Faces of the surface at which phi has odd boundary sum.
std::vector<int> curvature_defects(const EmbeddedGraph& g, const SpinStructure& s,
                                   const std::vector<int>& removed_faces = {});

// KW_lambda = I - T_lambda with (T_lambda)_{e,e'} = (-1)^{phi(e)} T_{e,e'}.  Throws
// SurfaceError for a non-flat connection.
CMatrix build_kacward_lambda(const EmbeddedGraph& g, const SpinStructure& s,
                             const std::vector<int>& removed_faces = {});

// q on the torus: q(alpha + beta) = q(alpha) + q(beta) + alpha . beta, alpha
// encoded as bit 0 = horizontal loop, bit 1 = vertical loop.
struct QuadraticForm {
    std::array<int, 2> basis{0, 0};
    int operator()(int alpha) const;
    // (-1)^Arf = 2^-1 sum_alpha (-1)^q(alpha)
    int arf() const;
};
// Basis values from the winding of the straight loops through vertex 0:
// (-1)^q(C) = -exp(i wind(C) / 2) (-1)^{phi . C}.
QuadraticForm quadratic_form(const EmbeddedGraph& g, const SpinStructure& s);
int arf(const EmbeddedGraph& g, const SpinStructure& s);

// sum_P (-1)^{phi . P} x(P): the square root of det KW_phi whose constant
// coefficient is +1.  The connection need not be flat.  Throws SurfaceError when
// |det KW_phi| < 1e-14.
double structure_root(const EmbeddedGraph& g, const std::vector<uint8_t>& phi);
double structure_root(const EmbeddedGraph& g, const SpinStructure& s);

// Z_high = 1/2 sum_lambda (-1)^Arf(lambda) sqrt(det KW_lambda)
double torus_partition_high(const EmbeddedGraph& g);
// Z_low = 1/4 sum_lambda sqrt(det KW_lambda)
double torus_partition_low(const EmbeddedGraph& g);

// Z_low of the punctured disk: 2^-m sum_lambda sqrt(det KW_lambda).
double surface_partition_low(const PuncturedDisk& d);
// E+[sigma_v1 ... sigma_vk] with + on the outer face and on every puncture:
// sum_lambda sqrt(det KW_{lambda + [v]}) / sum_lambda sqrt(det KW_lambda).
double surface_spin_correlation(const PuncturedDisk& d, const std::vector<int>& faces, unsigned seed = 0);

} // namespace kw
