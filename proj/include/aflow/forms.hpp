#pragma once

#include <vector>

#include "aflow/tensor.hpp"

namespace aflow {

// Smooth (p,q)-form with coefficients stored on strictly increasing index
// tuples: the value kept for (I, J) is the raw coefficient of dz^I ∧ dz̄^J in
// the expansion with I and J ascending (any i-factors are part of the stored
// value).  Component order: holomorphic tuple major, antiholomorphic minor,
// tuples enumerated lexicographically.
struct FormField {
    GridSpec grid;
    int p = 0;
    int q = 0;
    std::vector<std::vector<cplx>> comp;

    FormField() = default;
    FormField(const GridSpec& g, int p_deg, int q_deg);

    static const std::vector<std::vector<int>>& tuples(int len);
    static int tuple_count(int len);  // C(3, len)
    static int tuple_index(const std::vector<int>& t);

    long ncomp() const { return static_cast<long>(comp.size()); }
    cplx& at(int ia, int ib, long pt) { return comp[static_cast<size_t>(ia * tuple_count(q) + ib)][static_cast<size_t>(pt)]; }
    const cplx& at(int ia, int ib, long pt) const {
        return comp[static_cast<size_t>(ia * tuple_count(q) + ib)][static_cast<size_t>(pt)];
    }
};

FormField add_scaled(const FormField& a, cplx s, const FormField& b);  // a + s*b
FormField scaled(const FormField& a, cplx s);
double max_abs(const FormField& f);

FormField wedge(const FormField& a, const FormField& b);
FormField del(const FormField& f);     // ∂, new holomorphic index from the left
FormField delbar(const FormField& f);  // ∂̄, picks up (-1)^p passing the dz block

// sup over coefficients of (∂ + ∂̄)f; the d-closedness residual.
double d_residual_sup(const FormField& f);

// ‖Ω‖_ω = det(g)^{-1/2} for the flat-torus holomorphic volume form.
ScalarField omega_norm(const MetricField& g);

// ω = i g_{k̄j} dz^j ∧ dz̄^k
FormField omega_from_metric(const MetricField& g);

// Ψ = ‖Ω‖_ω ω ∧ ω   (the conformally balanced (2,2) datum)
FormField psi_from_metric(const MetricField& g);

// Exact inverse of psi_from_metric.  Throws PositivityError (with the lattice
// point) when the candidate coefficient matrix is not Hermitian positive.
MetricField metric_from_psi(const FormField& psi);

// sup-norm of the coefficients of d(‖Ω‖_ω ω²); zero for conformally balanced g.
double balanced_residual(const MetricField& g);

// tr(Rm ∧ Rm) as a (2,2)-form, from the endomorphism-valued curvature 2-form.
// `rm` must use the curvature() slot layout (LowBar, Low, Up, Low).
FormField trace_rm_wedge_rm(const TensorField& rm);

// A (2,2)-form on the 3-fold is equivalent to a 3x3 matrix through the basis
// of complementary index pairs; these convert both ways.  W(b, a) couples the
// holomorphic complement of a with the antiholomorphic complement of b, signed
// by the orientation of each complement.
Mat3 rep22(const FormField& x, long pt);
FormField form22_from_matrix(const GridSpec& g, const Mat3& w);  // constant in space

}  // namespace aflow
