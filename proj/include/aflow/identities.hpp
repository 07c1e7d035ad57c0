#pragma once

// Standalone audit of the structural identities the solver relies on: the
// balanced-torsion identity, the dilaton gradient chain, the curvature
// commutator, the divergence theorem for the Chern connection, and the
// preservation of the balanced condition along a run.  Each check assembles
// its two sides through independent code paths and reports the residual.

#include <string>
#include <vector>

#include "aflow/tensor.hpp"

namespace aflow {

// Gate below which a metric counts as conformally balanced for the checks
// that only hold on balanced metrics.
constexpr double kBalancedGate = 1e-7;

struct IdentityEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;          // residual <= tolerance
    bool not_applicable = false;  // precondition gate failed; residual holds the gate metric
    std::string descriptor;       // what the check ran on
    std::string details;
};

struct IdentityReport {
    std::vector<IdentityEntry> entries;
    bool all_passed() const;  // NOT_APPLICABLE entries do not count as failures
};

// T_i against the holomorphic gradient of log omega_norm (torsion contraction
// versus spectral derivative of the volume density: fully independent paths).
// Requires an approximately balanced metric; otherwise NOT_APPLICABLE.
IdentityEntry check_balanced_torsion(const MetricField& g, const std::string& descriptor = "");

// First and mixed-second derivatives of the dilaton weight w = 1/(2*omega_norm)
// against their torsion expansions:
//   grad_i w = -w T_i,   grad_jbar w = -w conj(T)_jbar,
//   grad_i grad_jbar w = w (T_i conj(T)_jbar - grad_i conj(T)_jbar).
// Residual is relative to sup w, so it is invariant under constant rescaling
// of the metric.  Requires an approximately balanced metric.
IdentityEntry check_dilaton_gradient(const MetricField& g, const std::string& descriptor = "");

// Ricci-type commutator [grad_i, grad_jbar] on a scalar (must vanish) or a
// rank-one tensor (curvature contraction, sign set by the slot type).  Only
// single derivative orders m, l <= 1 carry exact coefficients; deeper orders
// are rejected.
IdentityEntry check_commutator(const MetricField& g, const TensorField& a, int m = 1,
                               int l = 1, const std::string& descriptor = "");

// Integral of the Chern divergence of V against the torsion pairing:
// int grad_i V^i dvol = int T_i V^i dvol on balanced metrics.  The residual
// is normalised by 1 + |reference| so near-zero integrals stay meaningful.
IdentityEntry check_divergence(const MetricField& g, const TensorField& v,
                               const std::string& descriptor = "");

// Growth of the balanced residual along a run: `samples` holds
// balanced_residual(g(t)) at successive monitor times, `steps` the number of
// accepted steps between the first and last sample.  Passes when the growth
// stays below 1e-7 per step.
IdentityEntry check_chern_weil_preservation(const std::vector<double>& samples, long steps,
                                            const std::string& descriptor = "");

// Deterministic band-limited random vector field (single upper holomorphic
// slot); the same seed always produces the same field, bitwise.
TensorField random_band_limited_vector(const GridSpec& g, unsigned seed);

// The four pointwise audits bundled with standard probe data.
IdentityReport run_audit(const MetricField& g, unsigned seed = 7);

}  // namespace aflow
