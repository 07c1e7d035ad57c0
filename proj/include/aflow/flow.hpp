#pragma once

#include <memory>
#include <optional>

#include "aflow/forms.hpp"

namespace aflow {

enum class RhsMode {
    PsiEvolution,     // evolve the (2,2) datum, metric reconstructed each stage
    MetricEvolution,  // evolve g_{p̄q} by the equivalent pointwise law
    CrossCheck,       // both in lockstep, per-step discrepancy reported
};

enum class PhiKind { Zero, Constant, ChernWeil };

// Source term of the flow.  Constant: spatially uniform (2,2)-form given by
// its complementary-pair matrix.  ChernWeil: the curvature trace form of a
// fixed reference metric (closed by construction).
struct PhiSource {
    PhiKind kind = PhiKind::Zero;
    Mat3 constant_w = Mat3::Zero();
    std::shared_ptr<MetricField> reference;
};

struct FlowConfig {
    double alpha_prime = 0.0;
    PhiSource phi;
    double dt_initial = 1e-3;
    double dt_safety = 0.5;
    double t_max = 0.0;
    RhsMode rhs_mode = RhsMode::PsiEvolution;

    void validate() const;  // throws ContractError on out-of-range values
};

// Materialise the source term on a grid and verify it is d-closed (residual
// at most 1e-8); a non-closed source would silently break conformal balance.
FormField build_phi(const PhiSource& src, const GridSpec& g);

struct FlowState {
    double t = 0.0;
    MetricField g;
    FormField psi;
    // refreshed together with g after every accepted step
    TensorField torsion_c;
    TensorField curvature_c;
    ScalarField omega_norm_c;
    double last_dt = 0.0;
    long step_count = 0;
};

// State from a metric: builds the (2,2) datum and the caches.
FlowState make_state(const MetricField& g);
void refresh_caches(FlowState& s);

// Enforced after every accepted step: the two representations may not drift
// apart by more than this.
constexpr double kStateConsistencyTol = 1e-10;
double state_consistency(const FlowState& s);

// d Psi/dt = i del delbar omega - alpha' (tr Rm∧Rm - Phi)
FormField rhs_psi(const MetricField& g, const FormField& phi, double alpha_prime);

// The equivalent evolution of the metric itself:
//   2 ||Omega|| dg/dt = -R̃ + g g T T̄ - alpha' (Q - P)
// with Q the signed pair-antisymmetrised curvature square and P the image of
// Phi under the pointwise inversion of the (1,1) -> (2,2) wedge map.
MetricField rhs_metric(const MetricField& g, const FormField& phi, double alpha_prime);

// One Runge-Kutta-4 application with the given dt.  Throws PositivityError if
// any stage metric leaves the positive cone; the caller decides whether to
// halve.  On success the state is advanced and its caches refreshed.
void rk4_apply(FlowState& s, const FlowConfig& cfg, const FormField& phi, double dt);

struct StepInfo {
    double dt_used = 0.0;
    int halvings = 0;
    double rhs_sup = 0.0;     // sup-norm of the evolved object's time derivative
    double min_eig = 0.0;     // smallest metric eigenvalue before the step
};

// Adaptive step: starts from the previous accepted dt (or dt_initial), caps
// it so that rhs_sup * dt <= dt_safety * lambda_min(g), clips at t_max, and
// halves on positivity loss.  dt underflow below 1e-12 is a FlowBreakdown.
StepInfo step_adaptive(FlowState& s, const FlowConfig& cfg, const FormField& phi);

constexpr double kDtUnderflow = 1e-12;

// --- initial data ----------------------------------------------------------
//
// `axis` is a real axis index (0..5) that must be active on the grid; the
// profile is one cosine period along it.

MetricField make_conformal(const GridSpec& g, double amplitude, int axis);
MetricField make_potential(const GridSpec& g, double amplitude, int axis);

// Conformally balanced: perturbs the flat (2,2) datum by i del delbar of an
// anisotropically weighted (1,1)-form and maps back to a metric, so the
// result is d-closed by construction (and positive for small amplitudes).
MetricField make_balanced(const GridSpec& g, double amplitude, int axis);

}  // namespace aflow
