#pragma once

// Shared fixtures for the test binaries.

#include <cmath>

#include "aflow/flow.hpp"
#include "aflow/forms.hpp"

namespace aflow::testing {

inline constexpr double kTau = 2.0 * M_PI;

inline GridSpec axis0(int n) { return GridSpec::uniform(n, {true, false, false, false, false, false}); }
inline GridSpec axes02(int n) { return GridSpec::uniform(n, {true, false, true, false, false, false}); }

inline MetricField conformal_metric(const GridSpec& g, double amp) {
    MetricField m(g);
    for (long p = 0; p < g.npts(); ++p) {
        const double u = amp * std::cos(kTau * g.position(p)[0]);
        m.set(p, std::exp(u) * Mat3::Identity());
    }
    return m;
}

// Conformally balanced metric with excitation along both active complex
// directions and an off-diagonal component, so curvature-square terms do not
// vanish by symmetry.  Needs a grid with real axes 0 and 2 active.
inline MetricField balanced_two_axis(const GridSpec& g, double amp) {
    FormField chi(g, 1, 1);
    for (long pt = 0; pt < g.npts(); ++pt) {
        const auto x = g.position(pt);
        const double f = std::cos(kTau * x[0]) + 0.6 * std::sin(kTau * x[2]) +
                         0.4 * std::cos(kTau * (x[0] + x[2]));
        const cplx rho = amp * cplx(0.5 * std::sin(kTau * x[0]), 0.3 * std::cos(kTau * x[2]));
        Mat3 h = Mat3::Zero();
        h(0, 0) = amp * f;
        h(1, 1) = 0.7 * amp * f;
        h(2, 2) = 0.4 * amp * f;
        h(1, 0) = rho;
        h(0, 1) = std::conj(rho);
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) chi.at(j, k, pt) = cplx(0.0, 1.0) * h(k, j);
        }
    }
    const FormField corr = scaled(del(delbar(chi)), cplx(0.0, 1.0));
    const FormField psi = add_scaled(psi_from_metric(MetricField::flat(g)), cplx(1.0, 0.0), corr);
    return metric_from_psi(psi);
}

// Conformally balanced metric whose chi profile is built from exponentials of
// trig functions, so every derived field has a full (geometrically decaying)
// Fourier tail instead of terminating at a fixed mode.  This is the probe for
// resolution-convergence checks: residuals at N=16 sit well above round-off
// and collapse by orders of magnitude at N=32.  Needs real axes 0 and 2.
inline MetricField balanced_rich(const GridSpec& g, double amp) {
    constexpr double a = 0.7;  // Fourier decay rate of the exponential profiles
    FormField chi(g, 1, 1);
    for (long pt = 0; pt < g.npts(); ++pt) {
        const auto x = g.position(pt);
        const double e0 = std::exp(a * std::cos(kTau * x[0])) / std::exp(a);
        const double e2 = std::exp(a * std::sin(kTau * x[2])) / std::exp(a);
        const double f = e0 + 0.6 * e2 + 0.4 * std::exp(a * std::cos(kTau * (x[0] + x[2]))) / std::exp(a);
        const cplx rho = amp * cplx(0.5 * e0 * std::sin(kTau * x[0]), 0.3 * e2);
        Mat3 h = Mat3::Zero();
        h(0, 0) = amp * f;
        h(1, 1) = 0.7 * amp * f;
        h(2, 2) = 0.4 * amp * f;
        h(1, 0) = rho;
        h(0, 1) = std::conj(rho);
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) chi.at(j, k, pt) = cplx(0.0, 1.0) * h(k, j);
        }
    }
    const FormField corr = scaled(del(delbar(chi)), cplx(0.0, 1.0));
    const FormField psi = add_scaled(psi_from_metric(MetricField::flat(g)), cplx(1.0, 0.0), corr);
    return metric_from_psi(psi);
}

inline double metric_sup(const MetricField& m) {
    double s = 0.0;
    for (const auto& arr : m.comp) {
        for (const cplx& v : arr) s = std::max(s, std::abs(v));
    }
    return s;
}

}  // namespace aflow::testing
