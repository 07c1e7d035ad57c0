#pragma once

// Run-time health monitor for the flow: sup-norm bounds on torsion and
// curvature, the derived test functions and their L^{2p} integrals, exact
// rational slope-parameter thresholds, Gronwall envelope checks, and the
// extension certificate. Everything here is read-only over a FlowState
// snapshot; nothing mutates the state being measured.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "aflow/flow.hpp"
#include "aflow/rational.hpp"
#include "aflow/tensor.hpp"

namespace aflow {

// Sup-norm bounds measured on a single state. B controls the dilaton weight
// 1/(2*omega_norm) from both sides: 1/B <= w <= B with a single constant.
// C0 bounds |T|, |conj T|, |Rm|, |DT|, |D conj T|; Cq[q-1] bounds
// |D^q Rm|, |D^{q+1} T|, |D^{q+1} conj T| for q >= 1. a0 is the configured
// contraction constant that scales every threshold; it is echoed verbatim
// into reports so a certificate can always be traced to the a0 it assumed.
struct AssumptionBounds {
    double B = 1.0;
    double C0 = 0.0;
    std::vector<double> Cq;  // Cq[q-1] holds the order-q bound
    double a0 = 1.0;
    double measured_at = 0.0;
};

// Measure B, C0 and Cq for q = 1..max_order on the given state. Derivative
// depth is capped (max_order <= 2, so at most D^2 Rm and D^3 T appear);
// deeper orders are rejected rather than reported from under-resolved data.
AssumptionBounds measure_bounds(const FlowState& s, double a0, int max_order = 2);

// Weight constant used by the weighted test functions for L^{2p} estimates:
// 1/(100 * a0 * B^2 * p). The primed variant uses the same expression.
double default_mu(double a0, double B, double p);
double default_mu_prime(double a0, double B, double p);

// Pointwise test functions and their integrals against the metric volume
// form. G_k = |D^k Rm|^2 + |D^{k+1} T|^2; the weighted variants couple the
// zeroth level in: G = (alpha'*G0 + mu)*G1 and G' = (alpha'*G0 + mu')*G2.
// lp_integrals holds the integrals of the p-th powers, keyed "G0", "G1",
// "G2", "G", "Gprime".
struct ShiQuantities {
    ScalarField g0, g1, g2;
    ScalarField g_weighted;
    ScalarField gprime_weighted;
    double mu = 0.0;
    double mu_prime = 0.0;
    double p = 1.0;
    std::map<std::string, double> lp_integrals;
};

ShiQuantities shi_quantities(const FlowState& s, double alpha_prime, double p,
                             double mu, double mu_prime);

// One slope-parameter threshold row. `key` is a stable machine identifier
// (also used for CSV column names). `finite` is false when the formula
// divides by C0 = 0, in which case the row is vacuously satisfied and
// `bound` is meaningless. k_family tags which dimensionless combination
// the row belongs to: 1 for the alpha'*C0^2 family, 2 for alpha'*C0.
struct ThresholdEntry {
    std::string key;
    int k_family = 1;
    Rational bound = 0;
    bool finite = true;
    bool satisfied = false;
};

// Exact rational evaluation of every implemented threshold at the given
// inputs, plus the two dimensionless combinations with family verdicts.
// flat_regime is set when C0 = 0; every row is then satisfied regardless
// of alpha_prime (nothing to bound means nothing to violate).
struct ThresholdReport {
    Rational a0 = 1;
    Rational B = 1;
    Rational C0 = 0;
    Rational p = 1;
    Rational alpha_prime = 0;
    bool flat_regime = false;
    std::vector<ThresholdEntry> entries;
    Rational dimensionless_k1 = 0;  // alpha' * C0^2
    Rational dimensionless_k2 = 0;  // alpha' * C0
    bool k1_satisfied = false;
    bool k2_satisfied = false;

    // Lookup by key; throws ContractError if the key is unknown.
    const ThresholdEntry& entry(const std::string& key) const;
};

// Exact-arithmetic core. Row keys and formulas:
//   thm3_2:  1 / (2 a0 B^2 C0 (2p+1))        [= 1/(4 a0 B^2 C0 (p+1/2))]
//   cor3_3:  1 / (14 a0 B^2 C0)
//   cor4_1:  1 / (26 a0 B^2 C0)
//   thm4_2:  1 / (10^6 a0 B^6 max(1,C0)^2 p)
//   cor4_5:  1 / (3*10^7 a0 B^6 max(1,C0)^2)
//   thm5_1:  1 / (3*10^7 a0 B^6 max(1,C0)^2)
ThresholdReport alpha_thresholds_exact(const Rational& a0, const Rational& B,
                                       const Rational& C0, const Rational& p,
                                       const Rational& alpha_prime);

// Convenience wrapper over measured bounds; doubles are converted to exact
// dyadic rationals before evaluation, so no floating-point rounding enters
// the comparisons.
ThresholdReport alpha_thresholds(const AssumptionBounds& b, double p,
                                 double alpha_prime);

// One time sample of a monitored integral.
struct GronwallSample {
    double t = 0.0;
    double value = 0.0;
};

// Exponential-envelope check for a monitored series v(t): the envelope is
// (1 + v(t0)) * exp(lambda*(t - t0)), with a 1e-9 relative slack. In fitted
// mode lambda is the steepest observed slope of log(1 + v), clipped at 0 so
// a decaying series gets a flat envelope instead of a vacuously shrinking
// one.
struct GronwallFit {
    std::string name;
    double p = 1.0;
    std::vector<GronwallSample> samples;
    double lambda = 0.0;
    bool fixed_lambda = false;
    bool envelope_violated = false;
};

GronwallFit gronwall_check(const std::string& name, double p,
                           std::vector<GronwallSample> samples,
                           std::optional<double> fixed_lambda = std::nullopt);

enum class Verdict { Extendable, NotCertified };

std::string to_string(Verdict v);

// Extension verdict: EXTENDABLE when alpha' lies strictly below the
// strictest implemented threshold (the thm5_1 row), or when the measured
// state is flat (C0 = 0). NOT_CERTIFIED states only that this criterion
// does not apply; it never claims the flow breaks down.
struct Certificate {
    Verdict verdict = Verdict::NotCertified;
    Rational bound = 0;
    bool flat_regime = false;
    Rational alpha_prime = 0;
    Rational margin = 0;  // bound - alpha_prime (exact)
    std::string explanation;
};

Certificate extension_certificate(const AssumptionBounds& b, double alpha_prime);

// Comparison of the evolving metric against a fixed reference metric:
// the endomorphism h, the connection-difference tensor S computed two
// independent ways, and sup norms of reference-covariant derivatives
// of g (reference metric used for both the connection and the norm
// weights).
struct ReferenceDiagnostics {
    TensorField h;                     // slots (Up, Low): h^a_b
    TensorField S;                     // slots (Low, Up, Low): S^a_{kb}
    double identity_residual = 0.0;    // max-abs gap between the two S routes
    std::vector<double> hat_dq_g_sup;  // index q = 0..max_order
};

ReferenceDiagnostics reference_diagnostics(const FlowState& s,
                                           const MetricField& g_hat,
                                           int max_order);

}  // namespace aflow
