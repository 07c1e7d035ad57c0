#include <doctest.h>

#include <cmath>
#include <random>

#include "aflow/forms.hpp"

using namespace aflow;

namespace {

constexpr double kTau = 2.0 * M_PI;

GridSpec axis0(int n) { return GridSpec::uniform(n, {true, false, false, false, false, false}); }
GridSpec axes02(int n) { return GridSpec::uniform(n, {true, false, true, false, false, false}); }

ScalarField test_scalar(const GridSpec& g) {
    return sample(g, [](const std::array<double, 6>& x) {
        return cplx(std::sin(kTau * x[0]) + 0.4 * std::cos(kTau * x[2]),
                    0.2 * std::cos(kTau * (x[0] + x[2])));
    });
}

// A (1,1)-form i h_{k̄j} dz^j ∧ dz̄^k from a pointwise Hermitian coefficient
// matrix valued in a few smooth functions.
FormField hermitian_one_one(const GridSpec& g, double amp) {
    FormField f(g, 1, 1);
    for (long pt = 0; pt < g.npts(); ++pt) {
        const auto x = g.position(pt);
        Mat3 h = Mat3::Identity();
        h(0, 0) += amp * std::cos(kTau * x[0]);
        h(1, 1) += 0.5 * amp * std::sin(kTau * x[2]);
        h(0, 1) = amp * cplx(0.3 * std::sin(kTau * x[0]), 0.2 * std::cos(kTau * x[2]));
        h(1, 0) = std::conj(h(0, 1));
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                f.at(j, k, pt) = cplx(0.0, 1.0) * h(k, j);
            }
        }
    }
    return f;
}

// Conformally balanced two-axis metric: perturb the flat (2,2) datum by the
// (automatically closed) form i del delbar chi and map back to a metric.
MetricField balanced_two_axis(const GridSpec& g, double amp) {
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

MetricField conformal_metric(const GridSpec& g, double amp) {
    MetricField m(g);
    for (long p = 0; p < g.npts(); ++p) {
        const double u = amp * std::cos(kTau * g.position(p)[0]);
        m.set(p, std::exp(u) * Mat3::Identity());
    }
    return m;
}

}  // namespace

TEST_CASE("wedge grading: odd forms anticommute, even forms commute") {
    const GridSpec g = axis0(8);
    const ScalarField s = test_scalar(g);
    FormField a(g, 1, 0), b(g, 0, 1);
    a.comp[1] = s.v;  // coefficient on dz^1
    for (long p = 0; p < g.npts(); ++p) b.comp[2][static_cast<size_t>(p)] = cplx(0.3, -0.1) * s.v[static_cast<size_t>(p)];

    const FormField ab = wedge(a, b);
    const FormField ba = wedge(b, a);
    CHECK(max_abs(add_scaled(ab, cplx(1.0, 0.0), ba)) == 0.0);

    const FormField h = hermitian_one_one(g, 0.2);
    const FormField h2 = hermitian_one_one(axis0(8), 0.05);
    const FormField hh = wedge(h, h2);
    const FormField hh2 = wedge(h2, h);
    CHECK(max_abs(add_scaled(hh, cplx(-1.0, 0.0), hh2)) < 1e-15);
}

TEST_CASE("wedge degree overflow is rejected") {
    const GridSpec g = axis0(4);
    const FormField a(g, 2, 2);
    const FormField b(g, 2, 0);
    CHECK_THROWS_AS(wedge(a, b), ContractError);
}

TEST_CASE("exterior operators square to zero") {
    const GridSpec g = axes02(12);
    const FormField h = hermitian_one_one(g, 0.3);
    CHECK(max_abs(del(del(h))) < 1e-10);
    CHECK(max_abs(delbar(delbar(h))) < 1e-10);
    const FormField mixed = add_scaled(del(delbar(h)), cplx(1.0, 0.0), delbar(del(h)));
    CHECK(max_abs(mixed) < 1e-10);
}

TEST_CASE("i del delbar of a potential matches the closed form") {
    const GridSpec g = axis0(32);
    const double amp = 0.01;
    FormField phi(g, 0, 0);
    for (long p = 0; p < g.npts(); ++p) {
        phi.comp[0][static_cast<size_t>(p)] = cplx(amp * std::cos(kTau * g.position(p)[0]), 0.0);
    }
    const FormField e = scaled(del(delbar(phi)), cplx(0.0, 1.0));
    // raw coefficient of dz^1 ∧ dz̄^1 is i * del_1 delbar_1 phi
    double worst = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const double x = g.position(p)[0];
        const cplx expect = cplx(0.0, 1.0) * cplx(-0.25 * amp * kTau * kTau * std::cos(kTau * x), 0.0);
        worst = std::max(worst, std::abs(e.at(0, 0, p) - expect));
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                if (j == 0 && k == 0) continue;
                worst = std::max(worst, std::abs(e.at(j, k, p)));
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("flat hermitian form and its square are exact") {
    const GridSpec g = axis0(4);
    const MetricField flat = MetricField::flat(g);
    const FormField om = omega_from_metric(flat);
    for (long p = 0; p < g.npts(); ++p) {
        for (int j = 0; j < 3; ++j) {
            for (int k = 0; k < 3; ++k) {
                CHECK(om.at(j, k, p) == ((j == k) ? cplx(0.0, 1.0) : cplx(0.0, 0.0)));
            }
        }
    }
    const FormField psi = psi_from_metric(flat);
    for (long p = 0; p < g.npts(); ++p) {
        const Mat3 w = rep22(psi, p);
        CHECK((w - 2.0 * Mat3::Identity()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(balanced_residual(flat) == 0.0);
}

TEST_CASE("volume normalisation of the holomorphic form") {
    const GridSpec g = axis0(4);
    MetricField m(g);
    for (long p = 0; p < g.npts(); ++p) m.set(p, 2.0 * Mat3::Identity());
    const ScalarField w = omega_norm(m);
    for (long p = 0; p < g.npts(); ++p) CHECK(w.v[p].real() == doctest::Approx(1.0 / std::sqrt(8.0)));
}

TEST_CASE("matrix representation of (2,2)-forms round-trips") {
    const GridSpec g = axis0(4);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Mat3 w;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) w(i, j) = cplx(u(rng), u(rng));
    const FormField x = form22_from_matrix(g, w);
    for (long p = 0; p < g.npts(); ++p) {
        CHECK((rep22(x, p) - w).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("metric to (2,2) datum and back is the identity") {
    SUBCASE("flat") {
        const GridSpec g = axis0(8);
        const MetricField m = MetricField::flat(g);
        const MetricField back = metric_from_psi(psi_from_metric(m));
        CHECK(max_abs_diff(m, back) == 0.0);
    }
    SUBCASE("conformal") {
        const GridSpec g = axis0(16);
        const MetricField m = conformal_metric(g, 0.2);
        CHECK(max_abs_diff(m, metric_from_psi(psi_from_metric(m))) < 1e-12);
    }
    SUBCASE("random hermitian perturbation") {
        const GridSpec g = axes02(8);
        std::mt19937 rng(23);
        std::uniform_real_distribution<double> u(-0.05, 0.05);
        MetricField m(g);
        for (long p = 0; p < g.npts(); ++p) {
            Mat3 h;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) h(i, j) = cplx(u(rng), u(rng));
            m.set(p, Mat3(Mat3::Identity() + 0.5 * (h + h.adjoint())));
        }
        CHECK(max_abs_diff(m, metric_from_psi(psi_from_metric(m))) < 1e-12);
    }
}

TEST_CASE("non-positive (2,2) datum is rejected with a location") {
    const GridSpec g = axis0(8);
    FormField psi = psi_from_metric(MetricField::flat(g));
    psi = scaled(psi, cplx(-1.0, 0.0));
    CHECK_THROWS_AS(metric_from_psi(psi), PositivityError);
}

TEST_CASE("conformal metrics are not conformally balanced") {
    const GridSpec g = axis0(32);
    CHECK(balanced_residual(conformal_metric(g, 0.1)) > 1e-2);
}

TEST_CASE("constructed balanced data has small residual") {
    const GridSpec g = axes02(16);
    const MetricField m = balanced_two_axis(g, 0.02);
    require_positive(m);
    CHECK(balanced_residual(m) < 1e-8);
}

TEST_CASE("curvature trace form vanishes identically with one active axis") {
    const GridSpec g = axis0(16);
    const MetricField m = conformal_metric(g, 0.2);
    const FormField t = trace_rm_wedge_rm(curvature(m));
    CHECK(max_abs(t) == 0.0);
}

TEST_CASE("curvature trace form is closed on a curved background") {
    const GridSpec g = axes02(16);
    const MetricField m = balanced_two_axis(g, 0.02);
    const FormField t = trace_rm_wedge_rm(curvature(m));
    CHECK(max_abs(t) > 1e-6);  // the configuration really excites it
    CHECK(d_residual_sup(t) < 1e-8);
}

TEST_CASE("trace form demands the curvature slot layout") {
    const GridSpec g = axis0(4);
    TensorField wrong(g, {Slot::LowBar, Slot::Low});
    CHECK_THROWS_AS(trace_rm_wedge_rm(wrong), ContractError);
}
