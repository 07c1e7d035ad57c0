#include "aflow/flow.hpp"

#include <cmath>

namespace aflow {

void FlowConfig::validate() const {
    if (!(alpha_prime >= 0.0)) throw ContractError("flow: alpha_prime must be nonnegative");
    if (!(dt_initial > 0.0)) throw ContractError("flow: dt_initial must be positive");
    if (!(dt_safety > 0.0 && dt_safety <= 1.0)) throw ContractError("flow: dt_safety must lie in (0, 1]");
    if (!(t_max >= 0.0)) throw ContractError("flow: t_max must be nonnegative");
}

FormField build_phi(const PhiSource& src, const GridSpec& g) {
    FormField phi(g, 2, 2);
    switch (src.kind) {
        case PhiKind::Zero:
            break;
        case PhiKind::Constant:
            phi = form22_from_matrix(g, src.constant_w);
            break;
        case PhiKind::ChernWeil: {
            if (!src.reference) throw ContractError("flow: curvature-background source needs a reference metric");
            require_same_grid(src.reference->grid, g, "build_phi");
            phi = trace_rm_wedge_rm(curvature(*src.reference));
            break;
        }
    }
    const double res = d_residual_sup(phi);
    if (!(res <= 1e-8)) {
        throw ContractError("flow: source form is not closed (d-residual " + std::to_string(res) + ")");
    }
    return phi;
}

FlowState make_state(const MetricField& g) {
    FlowState s;
    s.g = g;
    require_positive(s.g);
    s.psi = psi_from_metric(s.g);
    refresh_caches(s);
    return s;
}

void refresh_caches(FlowState& s) {
    s.torsion_c = torsion(s.g);
    s.curvature_c = curvature(s.g);
    s.omega_norm_c = omega_norm(s.g);
}

double state_consistency(const FlowState& s) {
    return max_abs_diff(s.g, metric_from_psi(s.psi));
}

FormField rhs_psi(const MetricField& g, const FormField& phi, double alpha_prime) {
    const FormField om = omega_from_metric(g);
    FormField e = scaled(del(delbar(om)), cplx(0.0, 1.0));
    if (alpha_prime != 0.0) {
        const FormField tr = trace_rm_wedge_rm(curvature(g));
        e = add_scaled(e, cplx(-alpha_prime, 0.0), tr);
        e = add_scaled(e, cplx(alpha_prime, 0.0), phi);
    }
    return e;
}

MetricField rhs_metric(const MetricField& g, const FormField& phi, double alpha_prime) {
    const TensorField T = torsion(g);
    const TensorField Tc = conj(T);
    const TensorField R = curvature(g);
    const TensorField Rt = ricci_tilde(g);
    const long np = g.npts();
    MetricField out(g.grid);

    parallel_for(np, [&](long lo, long hi) {
        for (long x = lo; x < hi; ++x) {
            const Mat3 G = g.mat(x);
            const Mat3 Gi = G.inverse();
            const double det = G.determinant().real();
            const double omega_n = 1.0 / std::sqrt(det);

            Mat3 rhs = Mat3::Zero();

            // -R̃_{p̄q}
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    rhs(p, q) -= Rt.comp[static_cast<size_t>(p * 3 + q)][static_cast<size_t>(x)];
                }
            }

            // + g^{ab̄} g^{sr̄} T_{b̄sq} T̄_{ar̄p̄}
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    cplx acc{0.0, 0.0};
                    for (int a = 0; a < 3; ++a) {
                        for (int b = 0; b < 3; ++b) {
                            for (int s = 0; s < 3; ++s) {
                                for (int r = 0; r < 3; ++r) {
                                    acc += Gi(a, b) * Gi(s, r) *
                                           T.comp[static_cast<size_t>(b * 9 + s * 3 + q)][static_cast<size_t>(x)] *
                                           Tc.comp[static_cast<size_t>(a * 9 + r * 3 + p)][static_cast<size_t>(x)];
                                }
                            }
                        }
                    }
                    rhs(p, q) += acc;
                }
            }

            if (alpha_prime != 0.0) {
                // Q: the four signed trace-coupled curvature squares
                auto rr = [&](int i1, int i2, int i3, int i4) {
                    return R.comp[static_cast<size_t>(i1 * 27 + i2 * 9 + i3 * 3 + i4)][static_cast<size_t>(x)];
                };
                for (int p = 0; p < 3; ++p) {
                    for (int q = 0; q < 3; ++q) {
                        cplx qacc{0.0, 0.0};
                        for (int s = 0; s < 3; ++s) {
                            for (int r = 0; r < 3; ++r) {
                                const cplx w = Gi(s, r);
                                for (int a = 0; a < 3; ++a) {
                                    for (int b = 0; b < 3; ++b) {
                                        qacc += w * (rr(p, s, a, b) * rr(r, q, b, a) - rr(r, s, a, b) * rr(p, q, b, a) -
                                                     rr(p, q, a, b) * rr(r, s, b, a) + rr(r, q, a, b) * rr(p, s, b, a));
                                    }
                                }
                            }
                        }
                        rhs(p, q) -= alpha_prime * qacc;
                    }
                }

                // P: source form mapped back through the wedge-square, i.e.
                // (tr(W^T G) G - G W^T G) / det g  with W the pair matrix of Phi
                Mat3 w = rep22(phi, x);
                const Mat3 wt = w.transpose();
                const Mat3 pmat = ((wt * G).trace() * G - G * wt * G) / det;
                rhs += alpha_prime * pmat;
            }

            Mat3 res = rhs / (2.0 * omega_n);
            res = 0.5 * (res + res.adjoint()).eval();  // the law is Hermitian; drop round-off skew
            out.set(x, res);
        }
    });
    return out;
}

namespace {

FormField psi_rhs_of_psi(const FormField& psi, const FlowConfig& cfg, const FormField& phi) {
    const MetricField g = metric_from_psi(psi);
    require_positive(g);
    return rhs_psi(g, phi, cfg.alpha_prime);
}

MetricField metric_rhs_of_metric(const MetricField& g, const FlowConfig& cfg, const FormField& phi) {
    require_positive(g);
    return rhs_metric(g, phi, cfg.alpha_prime);
}

}  // namespace

void rk4_apply(FlowState& s, const FlowConfig& cfg, const FormField& phi, double dt) {
    if (cfg.rhs_mode == RhsMode::PsiEvolution || cfg.rhs_mode == RhsMode::CrossCheck) {
        const FormField k1 = psi_rhs_of_psi(s.psi, cfg, phi);
        const FormField k2 = psi_rhs_of_psi(add_scaled(s.psi, 0.5 * dt, k1), cfg, phi);
        const FormField k3 = psi_rhs_of_psi(add_scaled(s.psi, 0.5 * dt, k2), cfg, phi);
        const FormField k4 = psi_rhs_of_psi(add_scaled(s.psi, dt, k3), cfg, phi);
        FormField next = add_scaled(s.psi, dt / 6.0, k1);
        next = add_scaled(next, dt / 3.0, k2);
        next = add_scaled(next, dt / 3.0, k3);
        next = add_scaled(next, dt / 6.0, k4);
        MetricField gnext = metric_from_psi(next);
        require_positive(gnext);
        s.psi = std::move(next);
        s.g = std::move(gnext);
    } else {
        const MetricField k1 = metric_rhs_of_metric(s.g, cfg, phi);
        const MetricField k2 = metric_rhs_of_metric(add_scaled(s.g, 0.5 * dt, k1), cfg, phi);
        const MetricField k3 = metric_rhs_of_metric(add_scaled(s.g, 0.5 * dt, k2), cfg, phi);
        const MetricField k4 = metric_rhs_of_metric(add_scaled(s.g, dt, k3), cfg, phi);
        MetricField next = add_scaled(s.g, dt / 6.0, k1);
        next = add_scaled(next, dt / 3.0, k2);
        next = add_scaled(next, dt / 3.0, k3);
        next = add_scaled(next, dt / 6.0, k4);
        require_positive(next);
        s.g = std::move(next);
        s.psi = psi_from_metric(s.g);
    }
    s.t += dt;
    s.last_dt = dt;
    s.step_count += 1;
    refresh_caches(s);
    const double cons = state_consistency(s);
    if (!(cons <= kStateConsistencyTol)) {
        throw ContractError("flow: metric/datum representations drifted apart (" + std::to_string(cons) + ")");
    }
}

StepInfo step_adaptive(FlowState& s, const FlowConfig& cfg, const FormField& phi) {
    cfg.validate();
    StepInfo info;

    const MinEig me = min_eigenvalue(s.g);
    info.min_eig = me.value;

    // sup-norm of the time derivative of whatever is being evolved
    if (cfg.rhs_mode == RhsMode::MetricEvolution) {
        const MetricField k1 = rhs_metric(s.g, phi, cfg.alpha_prime);
        double m = 0.0;
        for (const auto& arr : k1.comp) {
            for (const cplx& v : arr) m = std::max(m, std::abs(v));
        }
        info.rhs_sup = m;
    } else {
        info.rhs_sup = max_abs(rhs_psi(s.g, phi, cfg.alpha_prime));
    }

    // at most doubles between steps, then capped by the safety inequality
    double dt = (s.last_dt > 0.0) ? 2.0 * s.last_dt : cfg.dt_initial;
    if (info.rhs_sup > 0.0) {
        dt = std::min(dt, cfg.dt_safety * info.min_eig / info.rhs_sup);
    }
    if (cfg.t_max > 0.0) {
        dt = std::min(dt, cfg.t_max - s.t);
    }
    if (!(dt > 0.0)) throw ContractError("flow: no time left to step");

    for (;;) {
        if (dt < kDtUnderflow) {
            throw FlowBreakdown("time step underflow at t = " + std::to_string(s.t) +
                                ": dt fell below " + std::to_string(kDtUnderflow));
        }
        try {
            rk4_apply(s, cfg, phi, dt);
            info.dt_used = dt;
            return info;
        } catch (const PositivityError&) {
            dt *= 0.5;
            info.halvings += 1;
        }
    }
}

MetricField make_conformal(const GridSpec& g, double amplitude, int axis) {
    if (axis < 0 || axis >= 6 || !g.active[axis]) throw ContractError("initial data: axis is not active");
    MetricField m(g);
    for (long p = 0; p < g.npts(); ++p) {
        const double u = amplitude * std::cos(2.0 * M_PI * g.position(p)[axis] / g.period[axis]);
        m.set(p, std::exp(u) * Mat3::Identity());
    }
    require_positive(m);
    return m;
}

MetricField make_potential(const GridSpec& g, double amplitude, int axis) {
    if (axis < 0 || axis >= 6 || !g.active[axis]) throw ContractError("initial data: axis is not active");
    ScalarField phi = sample(g, [&](const std::array<double, 6>& x) {
        return cplx(amplitude * std::cos(2.0 * M_PI * x[axis] / g.period[axis]), 0.0);
    });
    MetricField m = MetricField::flat(g);
    for (int j = 0; j < 3; ++j) {
        const ScalarField col = partial_z(phi, j);
        for (int k = 0; k < 3; ++k) {
            const ScalarField h = partial_zbar(col, k);
            auto& dst = m.comp[static_cast<size_t>(3 * k + j)];
            for (long p = 0; p < g.npts(); ++p) dst[static_cast<size_t>(p)] += h.v[static_cast<size_t>(p)];
        }
    }
    require_positive(m);
    return m;
}

MetricField make_balanced(const GridSpec& g, double amplitude, int axis) {
    if (axis < 0 || axis >= 6 || !g.active[axis]) throw ContractError("initial data: axis is not active");
    // anisotropic weights keep all three diagonal directions distinct
    const double w[3] = {1.0, 0.7, 0.4};
    FormField chi(g, 1, 1);
    for (long pt = 0; pt < g.npts(); ++pt) {
        const double f = amplitude * std::cos(2.0 * M_PI * g.position(pt)[axis] / g.period[axis]);
        for (int j = 0; j < 3; ++j) chi.at(j, j, pt) = cplx(0.0, 1.0) * (w[j] * f);
    }
    const FormField corr = scaled(del(delbar(chi)), cplx(0.0, 1.0));
    const FormField psi = add_scaled(psi_from_metric(MetricField::flat(g)), cplx(1.0, 0.0), corr);
    MetricField m = metric_from_psi(psi);
    require_positive(m);
    return m;
}

}  // namespace aflow
