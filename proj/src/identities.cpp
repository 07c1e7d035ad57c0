#include "aflow/identities.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "aflow/common.hpp"
#include "aflow/forms.hpp"

namespace aflow {

namespace {

IdentityEntry gated_out(const std::string& name, double bres, const std::string& descriptor) {
    IdentityEntry e;
    e.name = name;
    e.residual = bres;
    e.tolerance = kBalancedGate;
    e.passed = false;
    e.not_applicable = true;
    e.descriptor = descriptor;
    std::ostringstream os;
    os << "balanced residual " << bres << " exceeds the gate " << kBalancedGate
       << "; the identity only holds on conformally balanced metrics";
    e.details = os.str();
    return e;
}

IdentityEntry finish(IdentityEntry e) {
    e.passed = e.residual <= e.tolerance;
    return e;
}

}  // namespace

bool IdentityReport::all_passed() const {
    for (const auto& e : entries)
        if (!e.not_applicable && !e.passed) return false;
    return true;
}

IdentityEntry check_balanced_torsion(const MetricField& g, const std::string& descriptor) {
    const double bres = balanced_residual(g);
    if (bres > kBalancedGate) return gated_out("balanced_torsion", bres, descriptor);

    const TensorField tt = torsion_trace(g);
    const ScalarField omega = omega_norm(g);
    ScalarField logw(g.grid);
    for (long p = 0; p < g.npts(); ++p) logw[p] = std::log(omega.v[p].real());

    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const ScalarField di = partial_z(logw, i);
        for (long p = 0; p < g.npts(); ++p)
            worst = std::max(worst, std::abs(tt.at(i, p) - di.v[p]));
    }

    IdentityEntry e;
    e.name = "balanced_torsion";
    e.residual = worst;
    e.tolerance = 1e-6;
    e.descriptor = descriptor;
    return finish(e);
}

IdentityEntry check_dilaton_gradient(const MetricField& g, const std::string& descriptor) {
    const double bres = balanced_residual(g);
    if (bres > kBalancedGate) return gated_out("dilaton_gradient", bres, descriptor);

    const long n = g.npts();
    const ScalarField omega = omega_norm(g);
    ScalarField w(g.grid);
    for (long p = 0; p < n; ++p) w[p] = 1.0 / (2.0 * omega.v[p].real());
    const double wsup = sup_real(w);

    const TensorField tt = torsion_trace(g);

    double worst = 0.0;
    std::array<ScalarField, 3> dwbar;
    for (int i = 0; i < 3; ++i) {
        const ScalarField dw = partial_z(w, i);
        dwbar[i] = partial_zbar(w, i);
        for (long p = 0; p < n; ++p) {
            // first order and its conjugate
            worst = std::max(worst, std::abs(dw.v[p] + w.v[p] * tt.at(i, p)));
            worst = std::max(worst, std::abs(dwbar[i].v[p] + w.v[p] * std::conj(tt.at(i, p))));
        }
    }

    // mixed second order: w and its first derivatives carry no unbarred slot,
    // so the left side is a plain iterated spectral derivative
    std::array<ScalarField, 3> tbar;
    for (int j = 0; j < 3; ++j) {
        tbar[j] = ScalarField(g.grid);
        for (long p = 0; p < n; ++p) tbar[j][p] = std::conj(tt.at(j, p));
    }
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 3; ++i) {
            const ScalarField lhs = partial_z(dwbar[j], i);
            const ScalarField dtb = partial_z(tbar[j], i);
            for (long p = 0; p < n; ++p) {
                const cplx rhs = w.v[p] * (tt.at(i, p) * tbar[j].v[p] - dtb.v[p]);
                worst = std::max(worst, std::abs(lhs.v[p] - rhs));
            }
        }
    }

    IdentityEntry e;
    e.name = "dilaton_gradient";
    e.residual = worst / wsup;
    e.tolerance = 1e-6;
    e.descriptor = descriptor;
    return finish(e);
}

IdentityEntry check_commutator(const MetricField& g, const TensorField& a, int m, int l,
                               const std::string& descriptor) {
    require_same_grid(g.grid, a.grid, "check_commutator");
    if (m < 0 || l < 0 || m > 1 || l > 1)
        throw ContractError(
            "check_commutator: exact coefficients are only available for single "
            "derivative orders (m, l <= 1)");
    if (a.rank() + 2 > kMaxRank) throw ContractError("check_commutator: rank guard");

    IdentityEntry e;
    e.name = "commutator";
    e.tolerance = 1e-6;
    e.descriptor = descriptor;

    if (m == 0 || l == 0) {
        // a single derivative commutes with nothing; the identity is empty
        e.residual = 0.0;
        e.details = "m = 0 or l = 0: nothing to commute";
        return finish(e);
    }

    const long n = g.npts();
    const TensorField c2 = nabla(nabla_bar(a, g), g);   // slots (Low i, LowBar j, ...)
    const TensorField c1 = nabla_bar(nabla(a, g), g);   // slots (LowBar j, Low i, ...)

    double worst = 0.0;
    if (a.rank() == 0) {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (long p = 0; p < n; ++p)
                    worst = std::max(worst,
                                     std::abs(c2.at(i * 3 + j, p) - c1.at(j * 3 + i, p)));
        e.details = "scalar: the mixed derivatives must agree exactly";
    } else if (a.rank() == 1 && (a.slots[0] == Slot::Up || a.slots[0] == Slot::Low)) {
        const bool up = (a.slots[0] == Slot::Up);
        const TensorField rm = curvature(g);
        for (long p = 0; p < n; ++p) {
            for (int i = 0; i < 3; ++i) {
                for (int j = 0; j < 3; ++j) {
                    for (int r = 0; r < 3; ++r) {
                        cplx curv = 0.0;
                        for (int s = 0; s < 3; ++s) {
                            if (up) {
                                curv += rm.at(j * 27 + i * 9 + r * 3 + s, p) * a.at(s, p);
                            } else {
                                curv -= rm.at(j * 27 + i * 9 + s * 3 + r, p) * a.at(s, p);
                            }
                        }
                        const cplx lhs =
                            c2.at(i * 9 + j * 3 + r, p) - c1.at(j * 9 + i * 3 + r, p);
                        worst = std::max(worst, std::abs(lhs - curv));
                    }
                }
            }
        }
        e.details = up ? "upper slot: curvature acts with a plus sign"
                       : "lower slot: curvature acts with a minus sign";
    } else {
        throw ContractError(
            "check_commutator: exact form implemented for scalars and rank-one "
            "unbarred tensors");
    }

    e.residual = worst;
    return finish(e);
}

IdentityEntry check_divergence(const MetricField& g, const TensorField& v,
                               const std::string& descriptor) {
    require_same_grid(g.grid, v.grid, "check_divergence");
    if (v.rank() != 1 || v.slots[0] != Slot::Up)
        throw ContractError("check_divergence: expects one upper holomorphic slot");

    const double bres = balanced_residual(g);
    if (bres > kBalancedGate) return gated_out("divergence", bres, descriptor);

    const long n = g.npts();
    const TensorField nb = nabla(v, g);  // slots (Low i, Up r)
    ScalarField div(g.grid);
    for (long p = 0; p < n; ++p) {
        cplx tr = 0.0;
        for (int i = 0; i < 3; ++i) tr += nb.at(i * 3 + i, p);
        div[p] = tr;
    }

    const TensorField tt = torsion_trace(g);
    ScalarField pairing(g.grid);
    for (long p = 0; p < n; ++p) {
        cplx s = 0.0;
        for (int i = 0; i < 3; ++i) s += tt.at(i, p) * v.at(i, p);
        pairing[p] = s;
    }

    const cplx lhs = integrate(div, g);
    const cplx rhs = integrate(pairing, g);

    IdentityEntry e;
    e.name = "divergence";
    e.residual = std::abs(lhs - rhs) / (1.0 + std::abs(rhs));
    e.tolerance = 1e-6;
    e.descriptor = descriptor;
    return finish(e);
}

IdentityEntry check_chern_weil_preservation(const std::vector<double>& samples, long steps,
                                            const std::string& descriptor) {
    if (samples.empty()) throw ContractError("check_chern_weil_preservation: no samples");
    if (steps < 1) throw ContractError("check_chern_weil_preservation: steps must be positive");

    double growth = 0.0;
    for (const double s : samples) growth = std::max(growth, s - samples.front());

    IdentityEntry e;
    e.name = "chern_weil_preservation";
    e.residual = growth;
    e.tolerance = 1e-7 * static_cast<double>(steps);
    e.descriptor = descriptor;
    std::ostringstream os;
    os << "balanced residual start " << samples.front() << ", growth " << growth << " over "
       << steps << " steps";
    e.details = os.str();
    return finish(e);
}

TensorField random_band_limited_vector(const GridSpec& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> mode(-2, 2);

    TensorField v(g, {Slot::Up});
    const long n = g.npts();
    for (int r = 0; r < 3; ++r) {
        // a handful of low-frequency waves per component
        for (int wave = 0; wave < 5; ++wave) {
            std::array<int, 6> k{};
            for (int ax = 0; ax < 6; ++ax) k[ax] = g.active[ax] ? mode(rng) : 0;
            const cplx c(coef(rng), coef(rng));
            for (long p = 0; p < n; ++p) {
                const auto x = g.position(p);
                double phase = 0.0;
                for (int ax = 0; ax < 6; ++ax)
                    phase += 2.0 * M_PI * k[ax] * x[ax] / g.period[ax];
                v.at(r, p) += c * std::exp(cplx(0.0, phase));
            }
        }
    }
    return v;
}

IdentityReport run_audit(const MetricField& g, unsigned seed) {
    const TensorField v = random_band_limited_vector(g.grid, seed);
    IdentityReport r;
    r.entries.push_back(check_balanced_torsion(g));
    r.entries.push_back(check_dilaton_gradient(g));
    r.entries.push_back(check_commutator(g, v));
    r.entries.push_back(check_divergence(g, v));
    return r;
}

}  // namespace aflow
