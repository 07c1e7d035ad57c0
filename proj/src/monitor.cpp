#include "aflow/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "aflow/common.hpp"

namespace aflow {

namespace {

// Pointwise maximum of squared-norm fields, real parts.
ScalarField pointwise_max(const std::vector<const ScalarField*>& fields) {
    ScalarField out(fields.front()->grid);
    const long n = out.grid.npts();
    for (long p = 0; p < n; ++p) {
        double m = fields[0]->v[p].real();
        for (size_t i = 1; i < fields.size(); ++i) m = std::max(m, fields[i]->v[p].real());
        out[p] = m;
    }
    return out;
}

double sup_sqrt(const ScalarField& sq) { return std::sqrt(std::max(0.0, sup_real(sq))); }

ScalarField pow_field(const ScalarField& f, double p) {
    ScalarField out(f.grid);
    const long n = f.grid.npts();
    for (long pt = 0; pt < n; ++pt) {
        // norms are nonnegative up to round-off; clamp so fractional powers stay real
        out[pt] = std::pow(std::max(0.0, f.v[pt].real()), p);
    }
    return out;
}

Rational pow6(const Rational& b) {
    const Rational b2 = b * b;
    return b2 * b2 * b2;
}

}  // namespace

AssumptionBounds measure_bounds(const FlowState& s, double a0, int max_order) {
    if (!(a0 > 0.0)) throw ContractError("measure_bounds: a0 must be positive");
    if (max_order < 0 || max_order > 2)
        throw ContractError("measure_bounds: derivative order must be within 0..2");

    AssumptionBounds b;
    b.a0 = a0;
    b.measured_at = s.t;

    // dilaton weight w = 1/(2*omega_norm); one constant bounds it both ways
    ScalarField w(s.g.grid);
    const long n = s.g.npts();
    for (long p = 0; p < n; ++p) w[p] = 1.0 / (2.0 * s.omega_norm_c.v[p].real());
    const double lo = inf_real(w);
    if (!(lo > 0.0)) throw ContractError("measure_bounds: dilaton weight must stay positive");
    b.B = std::max(sup_real(w), 1.0 / lo);

    const TensorField& T = s.torsion_c;
    const TensorField Tb = conj(T);
    const TensorField& Rm = s.curvature_c;

    const ScalarField t0 = norm_sq(T, s.g);
    const ScalarField tb0 = norm_sq(Tb, s.g);
    const ScalarField r0 = norm_sq(Rm, s.g);
    const ScalarField t1 = dq_norm_sq(T, s.g, 1);
    const ScalarField tb1 = dq_norm_sq(Tb, s.g, 1);
    b.C0 = sup_sqrt(pointwise_max({&t0, &tb0, &r0, &t1, &tb1}));

    for (int q = 1; q <= max_order; ++q) {
        const ScalarField rq = dq_norm_sq(Rm, s.g, q);
        const ScalarField tq = dq_norm_sq(T, s.g, q + 1);
        const ScalarField tbq = dq_norm_sq(Tb, s.g, q + 1);
        b.Cq.push_back(sup_sqrt(pointwise_max({&rq, &tq, &tbq})));
    }
    return b;
}

double default_mu(double a0, double B, double p) {
    if (!(a0 > 0.0 && B > 0.0 && p > 0.0))
        throw ContractError("default_mu: a0, B and p must be positive");
    return 1.0 / (100.0 * a0 * B * B * p);
}

double default_mu_prime(double a0, double B, double p) { return default_mu(a0, B, p); }

ShiQuantities shi_quantities(const FlowState& s, double alpha_prime, double p,
                             double mu, double mu_prime) {
    if (!(p >= 1.0)) throw ContractError("shi_quantities: p must be at least 1");
    if (!(mu > 0.0) || !(mu_prime > 0.0))
        throw ContractError("shi_quantities: weights must be positive");
    if (alpha_prime < 0.0) throw ContractError("shi_quantities: alpha_prime must be nonnegative");

    const TensorField& T = s.torsion_c;
    const TensorField& Rm = s.curvature_c;

    ShiQuantities q;
    q.mu = mu;
    q.mu_prime = mu_prime;
    q.p = p;

    const auto level = [&](int k) {
        ScalarField out = dq_norm_sq(Rm, s.g, k);
        const ScalarField td = dq_norm_sq(T, s.g, k + 1);
        const long n = out.grid.npts();
        for (long pt = 0; pt < n; ++pt) out[pt] += td.v[pt];
        return out;
    };
    q.g0 = level(0);
    q.g1 = level(1);
    q.g2 = level(2);

    q.g_weighted = ScalarField(s.g.grid);
    q.gprime_weighted = ScalarField(s.g.grid);
    const long n = s.g.npts();
    for (long pt = 0; pt < n; ++pt) {
        const double g0 = q.g0.v[pt].real();
        q.g_weighted[pt] = (alpha_prime * g0 + mu) * q.g1.v[pt].real();
        q.gprime_weighted[pt] = (alpha_prime * g0 + mu_prime) * q.g2.v[pt].real();
    }

    q.lp_integrals["G0"] = integrate(pow_field(q.g0, p), s.g).real();
    q.lp_integrals["G1"] = integrate(pow_field(q.g1, p), s.g).real();
    q.lp_integrals["G2"] = integrate(pow_field(q.g2, p), s.g).real();
    q.lp_integrals["G"] = integrate(pow_field(q.g_weighted, p), s.g).real();
    q.lp_integrals["Gprime"] = integrate(pow_field(q.gprime_weighted, p), s.g).real();
    return q;
}

const ThresholdEntry& ThresholdReport::entry(const std::string& key) const {
    for (const auto& e : entries)
        if (e.key == key) return e;
    throw ContractError("ThresholdReport: no entry named '" + key + "'");
}

ThresholdReport alpha_thresholds_exact(const Rational& a0, const Rational& B,
                                       const Rational& C0, const Rational& p,
                                       const Rational& alpha_prime) {
    if (!(a0 > 0)) throw ContractError("alpha_thresholds: a0 must be positive");
    if (B < 1) throw ContractError("alpha_thresholds: B must be at least 1");
    if (C0 < 0) throw ContractError("alpha_thresholds: C0 must be nonnegative");
    if (!(p > 0)) throw ContractError("alpha_thresholds: p must be positive");
    if (alpha_prime < 0) throw ContractError("alpha_thresholds: alpha_prime must be nonnegative");

    ThresholdReport r;
    r.a0 = a0;
    r.B = B;
    r.C0 = C0;
    r.p = p;
    r.alpha_prime = alpha_prime;
    r.flat_regime = (C0 == 0);

    const Rational B2 = B * B;
    const Rational B6 = pow6(B);
    const Rational maxC0 = std::max(Rational(1), C0);
    const Rational maxC0sq = maxC0 * maxC0;

    const auto add = [&](const std::string& key, int family, const Rational& denom,
                         bool finite) {
        ThresholdEntry e;
        e.key = key;
        e.k_family = family;
        e.finite = finite;
        if (finite) e.bound = Rational(1) / denom;
        e.satisfied = r.flat_regime || !finite || (alpha_prime < e.bound);
        r.entries.push_back(std::move(e));
    };

    const bool c0_pos = (C0 > 0);
    add("thm3_2", 2, 2 * a0 * B2 * C0 * (2 * p + 1), c0_pos);
    add("cor3_3", 2, 14 * a0 * B2 * C0, c0_pos);
    add("cor4_1", 2, 26 * a0 * B2 * C0, c0_pos);
    add("thm4_2", 1, Rational(1000000) * a0 * B6 * maxC0sq * p, true);
    add("cor4_5", 1, Rational(30000000) * a0 * B6 * maxC0sq, true);
    add("thm5_1", 1, Rational(30000000) * a0 * B6 * maxC0sq, true);

    r.dimensionless_k1 = alpha_prime * C0 * C0;
    r.dimensionless_k2 = alpha_prime * C0;
    r.k1_satisfied = true;
    r.k2_satisfied = true;
    for (const auto& e : r.entries) {
        if (e.k_family == 1) r.k1_satisfied = r.k1_satisfied && e.satisfied;
        if (e.k_family == 2) r.k2_satisfied = r.k2_satisfied && e.satisfied;
    }
    return r;
}

ThresholdReport alpha_thresholds(const AssumptionBounds& b, double p, double alpha_prime) {
    return alpha_thresholds_exact(rational_from_double(b.a0), rational_from_double(b.B),
                                  rational_from_double(b.C0), rational_from_double(p),
                                  rational_from_double(alpha_prime));
}

GronwallFit gronwall_check(const std::string& name, double p,
                           std::vector<GronwallSample> samples,
                           std::optional<double> fixed_lambda) {
    if (samples.empty()) throw ContractError("gronwall_check: no samples");
    for (size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t > samples[i - 1].t))
            throw ContractError("gronwall_check: sample times must be strictly increasing");
    for (const auto& s : samples)
        if (!(1.0 + s.value > 0.0))
            throw ContractError("gronwall_check: sample values must exceed -1");

    GronwallFit fit;
    fit.name = name;
    fit.p = p;
    fit.samples = std::move(samples);
    fit.fixed_lambda = fixed_lambda.has_value();

    if (fixed_lambda) {
        fit.lambda = *fixed_lambda;
    } else {
        double lam = 0.0;  // clipped below at 0 so decaying series keep a flat envelope
        for (size_t i = 1; i < fit.samples.size(); ++i) {
            const double slope = (std::log1p(fit.samples[i].value) -
                                  std::log1p(fit.samples[i - 1].value)) /
                                 (fit.samples[i].t - fit.samples[i - 1].t);
            lam = std::max(lam, slope);
        }
        fit.lambda = lam;
    }

    const double t0 = fit.samples.front().t;
    const double v0 = fit.samples.front().value;
    for (const auto& s : fit.samples) {
        const double envelope = (1.0 + v0) * std::exp(fit.lambda * (s.t - t0)) * (1.0 + 1e-9);
        if (s.value > envelope) {
            fit.envelope_violated = true;
            break;
        }
    }
    return fit;
}

std::string to_string(Verdict v) {
    return v == Verdict::Extendable ? "EXTENDABLE" : "NOT_CERTIFIED";
}

Certificate extension_certificate(const AssumptionBounds& b, double alpha_prime) {
    if (alpha_prime < 0.0)
        throw ContractError("extension_certificate: alpha_prime must be nonnegative");

    const Rational a0 = rational_from_double(b.a0);
    const Rational B = rational_from_double(b.B);
    const Rational C0 = rational_from_double(b.C0);
    const Rational ap = rational_from_double(alpha_prime);
    const Rational maxC0 = std::max(Rational(1), C0);

    Certificate c;
    c.flat_regime = (C0 == 0);
    c.alpha_prime = ap;
    c.bound = Rational(1) / (Rational(30000000) * a0 * pow6(B) * maxC0 * maxC0);
    c.margin = c.bound - ap;

    std::ostringstream os;
    if (c.flat_regime) {
        c.verdict = Verdict::Extendable;
        os << "C0 = 0: torsion and curvature vanish, so every bound holds vacuously "
           << "and the flow extends.";
    } else if (ap < c.bound) {
        c.verdict = Verdict::Extendable;
        os << "alpha_prime = " << rational_to_string(ap)
           << " < 1/(3e7 * a0 * B^6 * max(1,C0)^2) = " << rational_to_string(c.bound)
           << " (margin " << rational_to_double(c.margin) << "); the flow extends past "
           << "the measured time.";
    } else {
        c.verdict = Verdict::NotCertified;
        os << "alpha_prime = " << rational_to_string(ap)
           << " >= 1/(3e7 * a0 * B^6 * max(1,C0)^2) = " << rational_to_string(c.bound)
           << "; the extension criterion does not apply. This is not evidence of "
           << "breakdown, only the absence of a certificate.";
    }
    c.explanation = os.str();
    return c;
}

ReferenceDiagnostics reference_diagnostics(const FlowState& s, const MetricField& g_hat,
                                           int max_order) {
    require_same_grid(s.g.grid, g_hat.grid, "reference_diagnostics");
    if (max_order < 0 || max_order > 4)
        throw ContractError("reference_diagnostics: derivative order must be within 0..4");
    require_positive(s.g);
    require_positive(g_hat);

    ReferenceDiagnostics d;
    const long n = s.g.npts();

    // endomorphism h^a_b = ghat^{a gamma-bar} g_{gamma-bar b}
    d.h = TensorField(s.g.grid, {Slot::Up, Slot::Low});
    for (long pt = 0; pt < n; ++pt) {
        const Mat3 h = g_hat.mat(pt).inverse() * s.g.mat(pt);
        for (int a = 0; a < 3; ++a)
            for (int bi = 0; bi < 3; ++bi) d.h.at(a * 3 + bi, pt) = h(a, bi);
    }

    // route 1: difference of the two connections
    d.S = christoffel(g_hat);
    {
        const TensorField gam = christoffel(s.g);
        for (long c = 0; c < d.S.ncomp(); ++c)
            for (long pt = 0; pt < n; ++pt) d.S.at(c, pt) -= gam.at(c, pt);
    }

    // route 2: -g^{a gamma-bar} (reference-covariant derivative of g)_{gamma-bar b},
    // built from entirely different pieces; the gap is the identity residual
    const TensorField dg = nabla(as_tensor(s.g), g_hat);
    double residual = 0.0;
    for (long pt = 0; pt < n; ++pt) {
        const Mat3 gi = s.g.mat(pt).inverse();
        for (int k = 0; k < 3; ++k)
            for (int a = 0; a < 3; ++a)
                for (int bi = 0; bi < 3; ++bi) {
                    cplx s2 = 0.0;
                    for (int gm = 0; gm < 3; ++gm)
                        s2 -= gi(a, gm) * dg.at(k * 9 + gm * 3 + bi, pt);
                    residual = std::max(residual,
                                        std::abs(d.S.at(k * 9 + a * 3 + bi, pt) - s2));
                }
    }
    d.identity_residual = residual;

    const TensorField gt = as_tensor(s.g);
    for (int q = 0; q <= max_order; ++q)
        d.hat_dq_g_sup.push_back(sup_sqrt(dq_norm_sq(gt, g_hat, q)));
    return d;
}

}  // namespace aflow
