#include <doctest.h>

#include <cmath>
#include <random>

#include "aflow/tensor.hpp"

using namespace aflow;

namespace {

constexpr double kTau = 2.0 * M_PI;

GridSpec axis0(int n) { return GridSpec::uniform(n, {true, false, false, false, false, false}); }

// Conformal metric g = e^u I with u = amp * cos(2 pi x^1); all curvature
// quantities have elementary closed forms used as oracles below.
MetricField conformal_metric(const GridSpec& g, double amp) {
    MetricField m(g);
    for (long p = 0; p < g.npts(); ++p) {
        const double u = amp * std::cos(kTau * g.position(p)[0]);
        m.set(p, std::exp(u) * Mat3::Identity());
    }
    return m;
}

struct ConformalOracle {
    double u, du, ddu;  // u, del_1 u, del_1bar del_1 u at the point (real values)
};

ConformalOracle conformal_at(const GridSpec& g, double amp, long p) {
    const double x = g.position(p)[0];
    ConformalOracle o;
    o.u = amp * std::cos(kTau * x);
    o.du = -0.5 * amp * kTau * std::sin(kTau * x);          // del_{z^1} u
    o.ddu = -0.25 * amp * kTau * kTau * std::cos(kTau * x);  // del_{z̄^1} del_{z^1} u
    return o;
}

// Metric from a potential, g = I + Hess(phi); torsion-free by construction.
MetricField potential_metric(const GridSpec& g, double amp) {
    ScalarField phi = sample(g, [&](const std::array<double, 6>& x) {
        return cplx(amp * std::cos(kTau * x[0]), 0.0);
    });
    MetricField m = MetricField::flat(g);
    for (int j = 0; j < 3; ++j) {
        ScalarField col = partial_z(phi, j);
        for (int k = 0; k < 3; ++k) {
            ScalarField h = partial_zbar(col, k);
            auto& dst = m.comp[static_cast<size_t>(3 * k + j)];
            for (long p = 0; p < g.npts(); ++p) dst[static_cast<size_t>(p)] += h.v[static_cast<size_t>(p)];
        }
    }
    return m;
}

}  // namespace

TEST_CASE("tensor rank guard") {
    const GridSpec g = axis0(4);
    CHECK_THROWS_AS(TensorField(g, std::vector<Slot>(9, Slot::Low)), ContractError);
    CHECK_NOTHROW(TensorField(g, std::vector<Slot>(8, Slot::Low)));
}

TEST_CASE("conjugation swaps slot character and is an involution") {
    const GridSpec g = axis0(8);
    TensorField t(g, {Slot::LowBar, Slot::Up});
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& arr : t.comp) {
        for (auto& v : arr) v = cplx(u(rng), u(rng));
    }
    const TensorField tc = conj(t);
    CHECK(tc.slots == std::vector<Slot>{Slot::Low, Slot::UpBar});
    CHECK(max_abs(tc) == max_abs(t));
    const TensorField tcc = conj(tc);
    for (long c = 0; c < t.ncomp(); ++c) {
        for (long p = 0; p < g.npts(); ++p) {
            CHECK(tcc.at(c, p) == t.at(c, p));
        }
    }
}

TEST_CASE("flat metric has exactly vanishing connection, torsion, curvature") {
    const GridSpec g = axis0(8);
    const MetricField m = MetricField::flat(g);
    CHECK(max_abs(christoffel(m)) == 0.0);
    CHECK(max_abs(torsion(m)) == 0.0);
    CHECK(max_abs(curvature(m)) == 0.0);
    CHECK(max_abs(ricci_tilde(m)) == 0.0);
    CHECK(max_abs(torsion_trace(m)) == 0.0);
}

TEST_CASE("christoffel matches the conformal closed form") {
    const GridSpec g = axis0(32);
    const double amp = 0.1;
    const MetricField m = conformal_metric(g, amp);
    const TensorField gam = christoffel(m);
    double worst = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const auto o = conformal_at(g, amp, p);
        for (int k = 0; k < 3; ++k) {
            for (int a = 0; a < 3; ++a) {
                for (int b = 0; b < 3; ++b) {
                    // Gamma^a_{kb} = delta_{ab} del_k u for a conformal metric
                    const cplx expect = (a == b && k == 0) ? cplx(o.du, 0.0) : cplx(0.0, 0.0);
                    worst = std::max(worst, std::abs(gam.at(gam.cidx({k, a, b}), p) - expect));
                }
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("torsion matches the conformal closed form") {
    const GridSpec g = axis0(32);
    const double amp = 0.1;
    const MetricField m = conformal_metric(g, amp);
    const TensorField t = torsion(m);
    double worst = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const auto o = conformal_at(g, amp, p);
        const double eu = std::exp(o.u);
        for (int pb = 0; pb < 3; ++pb) {
            for (int q = 0; q < 3; ++q) {
                for (int k = 0; k < 3; ++k) {
                    const double dq = (q == 0) ? o.du : 0.0;
                    const double dk = (k == 0) ? o.du : 0.0;
                    const cplx expect = eu * (dq * (pb == k ? 1.0 : 0.0) - dk * (pb == q ? 1.0 : 0.0));
                    worst = std::max(worst, std::abs(t.at(t.cidx({pb, q, k}), p) - expect));
                }
            }
        }
    }
    CHECK(worst < 1e-9);
    // antisymmetry in the two unbarred slots is exact
    for (long p = 0; p < g.npts(); ++p) {
        for (int pb = 0; pb < 3; ++pb) {
            for (int q = 0; q < 3; ++q) {
                CHECK(t.at(t.cidx({pb, q, q}), p) == cplx(0.0, 0.0));
            }
        }
    }
}

TEST_CASE("curvature and its trace match the conformal closed forms") {
    const GridSpec g = axis0(32);
    const double amp = 0.08;
    const MetricField m = conformal_metric(g, amp);
    const TensorField r = curvature(m);
    const TensorField rt = ricci_tilde(m);
    double worst = 0.0, worst_t = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const auto o = conformal_at(g, amp, p);
        for (int pb = 0; pb < 3; ++pb) {
            for (int q = 0; q < 3; ++q) {
                const double dd = (pb == 0 && q == 0) ? o.ddu : 0.0;
                for (int rr = 0; rr < 3; ++rr) {
                    for (int s = 0; s < 3; ++s) {
                        const cplx expect = (rr == s) ? cplx(-dd, 0.0) : cplx(0.0, 0.0);
                        worst = std::max(worst, std::abs(r.at(r.cidx({pb, q, rr, s}), p) - expect));
                    }
                }
                // only the z^1 second derivative of u is nonzero, so the
                // trace collapses to -ddu on the diagonal
                worst_t = std::max(worst_t, std::abs(rt.at(rt.cidx({pb, q}), p) -
                                                     ((pb == q) ? cplx(-o.ddu, 0.0) : cplx(0.0, 0.0))));
            }
        }
    }
    CHECK(worst < 1e-9);
    CHECK(worst_t < 1e-9);
}

TEST_CASE("torsion trace matches the conformal closed form") {
    const GridSpec g = axis0(32);
    const double amp = 0.1;
    const MetricField m = conformal_metric(g, amp);
    const TensorField tt = torsion_trace(m);
    double worst = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const auto o = conformal_at(g, amp, p);
        for (int i = 0; i < 3; ++i) {
            const cplx expect = (i == 0) ? cplx(-2.0 * o.du, 0.0) : cplx(0.0, 0.0);
            worst = std::max(worst, std::abs(tt.at(i, p) - expect));
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("potential metrics are torsion-free") {
    const GridSpec g = axis0(32);
    const MetricField m = potential_metric(g, 0.02);
    CHECK(max_abs(torsion(m)) < 1e-10);
    CHECK(max_abs(ricci_tilde(m)) > 1e-3);  // but they are genuinely curved
}

TEST_CASE("covariant derivative annihilates the metric") {
    const GridSpec g = axis0(24);
    const MetricField m = conformal_metric(g, 0.15);
    const TensorField gt = as_tensor(m);
    CHECK(max_abs(nabla(gt, m)) < 1e-10);
    CHECK(max_abs(nabla_bar(gt, m)) < 1e-10);
}

TEST_CASE("covariant derivatives commute on scalars") {
    const GridSpec g = axis0(24);
    const MetricField m = conformal_metric(g, 0.1);
    TensorField f(g, {});
    for (long p = 0; p < g.npts(); ++p) {
        f.at(0, p) = cplx(std::sin(kTau * g.position(p)[0]), 0.3 * std::cos(kTau * g.position(p)[0]));
    }
    const TensorField ab = nabla(nabla_bar(f, m), m);
    const TensorField ba = nabla_bar(nabla(f, m), m);
    // slot orders differ ((Low,LowBar) vs (LowBar,Low)); compare transposes
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (long p = 0; p < g.npts(); ++p) {
                worst = std::max(worst, std::abs(ab.at(ab.cidx({i, j}), p) - ba.at(ba.cidx({j, i}), p)));
            }
        }
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("norms reproduce conformal closed forms") {
    const GridSpec g = axis0(32);
    const double amp = 0.12;
    const MetricField m = conformal_metric(g, amp);
    const ScalarField t2 = norm_sq(torsion(m), m);
    const ScalarField r2 = norm_sq(curvature(m), m);
    double worst_t = 0.0, worst_r = 0.0;
    for (long p = 0; p < g.npts(); ++p) {
        const auto o = conformal_at(g, amp, p);
        const double t_expect = 4.0 * std::exp(-o.u) * o.du * o.du;
        const double r_expect = 3.0 * std::exp(-2.0 * o.u) * o.ddu * o.ddu;
        worst_t = std::max(worst_t, std::abs(t2.v[p].real() - t_expect));
        worst_r = std::max(worst_r, std::abs(r2.v[p].real() - r_expect));
        CHECK(t2.v[p].real() >= 0.0);
        CHECK(r2.v[p].real() >= 0.0);
    }
    CHECK(worst_t < 1e-8);
    CHECK(worst_r < 1e-7);
}

TEST_CASE("derivative-order norm sums extend the base norm") {
    const GridSpec g = axis0(16);
    const MetricField m = conformal_metric(g, 0.05);
    const TensorField t = torsion(m);
    const ScalarField n0 = dq_norm_sq(t, m, 0);
    const ScalarField base = norm_sq(t, m);
    for (long p = 0; p < g.npts(); ++p) CHECK(n0.v[p] == base.v[p]);
    const ScalarField n1 = dq_norm_sq(t, m, 1);
    for (long p = 0; p < g.npts(); ++p) CHECK(n1.v[p].real() >= 0.0);
    CHECK_THROWS_AS(dq_norm_sq(t, m, 6), ContractError);
}

TEST_CASE("volume-weighted integration uses the metric determinant") {
    const GridSpec g = axis0(32);
    const MetricField flat = MetricField::flat(g);
    ScalarField one(g);
    for (auto& v : one.v) v = cplx(1.0, 0.0);
    CHECK(std::abs(integrate(one, flat).real() - 1.0) < 1e-14);

    // det(e^u I) = e^{3u}; the integral of e^{3u} over one period of
    // u = a cos is the modified Bessel value I_0(3a), checked through a
    // straightforward series evaluation.
    const double amp = 0.1;
    const MetricField m = conformal_metric(g, amp);
    double bessel = 0.0, term = 1.0;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) {
            term *= (3.0 * amp / 2.0) * (3.0 * amp / 2.0) / (static_cast<double>(k) * k);
        }
        bessel += term;
    }
    CHECK(std::abs(integrate(one, m).real() - bessel) < 1e-12);
}

TEST_CASE("positivity guard reports the offending point") {
    const GridSpec g = axis0(8);
    MetricField m = MetricField::flat(g);
    Mat3 bad = Mat3::Identity();
    bad(0, 0) = -0.5;
    m.set(3, bad);
    try {
        require_positive(m);
        FAIL("expected a positivity error");
    } catch (const PositivityError& e) {
        CHECK(e.point == 3);
        CHECK(std::string(e.what()).find("(3,0,0,0,0,0)") != std::string::npos);
    }
}

TEST_CASE("minimum eigenvalue scan") {
    const GridSpec g = axis0(8);
    MetricField m = MetricField::flat(g);
    Mat3 tweak = Mat3::Identity();
    tweak(1, 1) = 0.25;
    m.set(5, tweak);
    const MinEig me = min_eigenvalue(m);
    CHECK(me.value == doctest::Approx(0.25));
    CHECK(me.point == 5);
}
