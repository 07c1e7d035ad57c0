#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "aflow/grid.hpp"

namespace aflow {

using Mat3 = Eigen::Matrix3cd;
using Vec3 = Eigen::Vector3cd;

// Index slot character.  Display order of slots is the declaration order; a
// component is addressed by a base-3 multi-index over the slots (first slot
// most significant).
enum class Slot : std::uint8_t {
    LowBar,  // lower antiholomorphic  (e.g. the p̄ of a torsion component)
    Low,     // lower holomorphic
    UpBar,   // upper antiholomorphic
    Up,      // upper holomorphic
};

constexpr int kMaxRank = 8;

struct TensorField {
    GridSpec grid;
    std::vector<Slot> slots;
    std::vector<std::vector<cplx>> comp;  // comp[c][point]

    TensorField() = default;
    TensorField(const GridSpec& g, std::vector<Slot> sl);

    int rank() const { return static_cast<int>(slots.size()); }
    long ncomp() const { return static_cast<long>(comp.size()); }

    cplx& at(long c, long p) { return comp[static_cast<size_t>(c)][static_cast<size_t>(p)]; }
    const cplx& at(long c, long p) const { return comp[static_cast<size_t>(c)][static_cast<size_t>(p)]; }

    // Component index from per-slot values, first slot most significant.
    long cidx(std::initializer_list<int> idx) const;
};

// Complex conjugate: each slot swaps barred/unbarred character in place,
// values are conjugated.  (Signature counts (a,b,c,d) -> (b,a,d,c).)
TensorField conj(const TensorField& t);

double max_abs(const TensorField& t);

// Hermitian metric g_{p̄q}; row index barred, column index unbarred.
struct MetricField {
    GridSpec grid;
    std::array<std::vector<cplx>, 9> comp;  // comp[3*p + q][point] = g_{p̄q}

    MetricField() = default;
    explicit MetricField(const GridSpec& g);
    static MetricField flat(const GridSpec& g);

    Mat3 mat(long p) const;
    void set(long p, const Mat3& m);
    long npts() const { return grid.npts(); }
};

// View of the metric as a rank-2 tensor field (slots LowBar, Low), e.g. for
// feeding it through nabla in compatibility checks.
TensorField as_tensor(const MetricField& g);

MetricField add_scaled(const MetricField& a, double s, const MetricField& b);  // a + s*b
double max_abs_diff(const MetricField& a, const MetricField& b);

std::vector<double> det_field(const MetricField& g);  // det g (real part; imag is round-off)

// Smallest eigenvalue of g over the grid and where it is attained.
struct MinEig {
    double value;
    long point;
};
MinEig min_eigenvalue(const MetricField& g);

// Throws PositivityError naming the offending lattice point if g is not
// positive definite (or not Hermitian to within `herm_tol`).
void require_positive(const MetricField& g, double herm_tol = 1e-8);

// --- curvature package -----------------------------------------------------
//
// Conventions (all contractions below were locked in against closed forms for
// conformal metrics and against the integral identities in the audit suite):
//   Gamma^a_{kb}   = g^{aγ̄} ∂_k g_{γ̄b}            slots (Low k, Up a, Low b)
//   T_{p̄qk}        = ∂_q g_{p̄k} - ∂_k g_{p̄q}      slots (LowBar, Low, Low)
//   R_{p̄q}{}^r{}_s = -∂_{p̄} Gamma^r_{qs}          slots (LowBar, Low, Up, Low)
//   R̃_{p̄q}         = g^{kᾱ} g_{p̄r} R_{ᾱk}{}^r{}_q  slots (LowBar, Low)
//   T_i            = g^{kp̄} T_{p̄ki}               slots (Low)
TensorField christoffel(const MetricField& g);
TensorField torsion(const MetricField& g);
TensorField torsion_trace(const MetricField& g);
TensorField curvature(const MetricField& g);
TensorField ricci_tilde(const MetricField& g);

// --- covariant derivatives -------------------------------------------------

// nabla prepends a Low slot, nabla_bar a LowBar slot.  Connection terms act on
// holomorphic (resp. antiholomorphic) slots only.
TensorField nabla(const TensorField& t, const MetricField& g);
TensorField nabla_bar(const TensorField& t, const MetricField& g);

// --- norms and integrals ---------------------------------------------------

// Pointwise |t|^2 with every slot paired through g or its inverse.  Real and
// nonnegative up to round-off; the imaginary part is discarded.
ScalarField norm_sq(const TensorField& t, const MetricField& g);

// |D^q t|^2 = sum over m+l=q of |nabla^m nabla_bar^l t|^2 (nabla_bar applied
// first).  q = 0 reduces to norm_sq.
ScalarField dq_norm_sq(const TensorField& t, const MetricField& g, int q);

// Volume-weighted integral  sum f * det(g) * cell_volume.
cplx integrate(const ScalarField& f, const MetricField& g);

double sup_real(const ScalarField& f);  // max over points of Re f
double inf_real(const ScalarField& f);

}  // namespace aflow
