#include "aflow/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aflow {

TensorField::TensorField(const GridSpec& g, std::vector<Slot> sl) : grid(g), slots(std::move(sl)) {
    if (static_cast<int>(slots.size()) > kMaxRank) {
        throw ContractError("tensor rank " + std::to_string(slots.size()) +
                            " exceeds the supported maximum of " + std::to_string(kMaxRank));
    }
    long nc = 1;
    for (size_t i = 0; i < slots.size(); ++i) nc *= 3;
    comp.assign(static_cast<size_t>(nc), std::vector<cplx>(static_cast<size_t>(g.npts()), cplx{0.0, 0.0}));
}

long TensorField::cidx(std::initializer_list<int> idx) const {
    if (static_cast<int>(idx.size()) != rank()) throw ContractError("cidx: wrong number of indices");
    long c = 0;
    for (int v : idx) {
        if (v < 0 || v > 2) throw ContractError("cidx: index out of range");
        c = c * 3 + v;
    }
    return c;
}

TensorField conj(const TensorField& t) {
    std::vector<Slot> sl(t.slots.size());
    for (size_t i = 0; i < sl.size(); ++i) {
        switch (t.slots[i]) {
            case Slot::LowBar: sl[i] = Slot::Low; break;
            case Slot::Low: sl[i] = Slot::LowBar; break;
            case Slot::UpBar: sl[i] = Slot::Up; break;
            case Slot::Up: sl[i] = Slot::UpBar; break;
        }
    }
    TensorField out(t.grid, sl);
    for (long c = 0; c < t.ncomp(); ++c) {
        const auto& src = t.comp[static_cast<size_t>(c)];
        auto& dst = out.comp[static_cast<size_t>(c)];
        for (size_t p = 0; p < src.size(); ++p) dst[p] = std::conj(src[p]);
    }
    return out;
}

double max_abs(const TensorField& t) {
    double m = 0.0;
    for (const auto& arr : t.comp) {
        for (const cplx& x : arr) m = std::max(m, std::abs(x));
    }
    return m;
}

MetricField::MetricField(const GridSpec& g) : grid(g) {
    for (auto& c : comp) c.assign(static_cast<size_t>(g.npts()), cplx{0.0, 0.0});
}

MetricField MetricField::flat(const GridSpec& g) {
    MetricField m(g);
    const long np = g.npts();
    for (int d = 0; d < 3; ++d) {
        std::fill_n(m.comp[static_cast<size_t>(3 * d + d)].begin(), np, cplx{1.0, 0.0});
    }
    return m;
}

Mat3 MetricField::mat(long p) const {
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = comp[static_cast<size_t>(3 * i + j)][static_cast<size_t>(p)];
    return m;
}

void MetricField::set(long p, const Mat3& m) {
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) comp[static_cast<size_t>(3 * i + j)][static_cast<size_t>(p)] = m(i, j);
}

TensorField as_tensor(const MetricField& g) {
    TensorField t(g.grid, {Slot::LowBar, Slot::Low});
    for (int c = 0; c < 9; ++c) t.comp[static_cast<size_t>(c)] = g.comp[static_cast<size_t>(c)];
    return t;
}

MetricField add_scaled(const MetricField& a, double s, const MetricField& b) {
    require_same_grid(a.grid, b.grid, "add_scaled");
    MetricField out(a.grid);
    for (int c = 0; c < 9; ++c) {
        const auto& av = a.comp[static_cast<size_t>(c)];
        const auto& bv = b.comp[static_cast<size_t>(c)];
        auto& ov = out.comp[static_cast<size_t>(c)];
        for (size_t p = 0; p < av.size(); ++p) ov[p] = av[p] + s * bv[p];
    }
    return out;
}

double max_abs_diff(const MetricField& a, const MetricField& b) {
    require_same_grid(a.grid, b.grid, "max_abs_diff");
    double m = 0.0;
    for (int c = 0; c < 9; ++c) {
        const auto& av = a.comp[static_cast<size_t>(c)];
        const auto& bv = b.comp[static_cast<size_t>(c)];
        for (size_t p = 0; p < av.size(); ++p) m = std::max(m, std::abs(av[p] - bv[p]));
    }
    return m;
}

std::vector<double> det_field(const MetricField& g) {
    const long np = g.npts();
    std::vector<double> d(static_cast<size_t>(np));
    parallel_for(np, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) d[static_cast<size_t>(p)] = g.mat(p).determinant().real();
    });
    return d;
}

MinEig min_eigenvalue(const MetricField& g) {
    const long np = g.npts();
    MinEig best{std::numeric_limits<double>::infinity(), 0};
    Eigen::SelfAdjointEigenSolver<Mat3> es;
    for (long p = 0; p < np; ++p) {
        es.compute(g.mat(p), Eigen::EigenvaluesOnly);
        const double lam = es.eigenvalues().minCoeff();
        if (lam < best.value) best = {lam, p};
    }
    return best;
}

void require_positive(const MetricField& g, double herm_tol) {
    const long np = g.npts();
    for (long p = 0; p < np; ++p) {
        const Mat3 m = g.mat(p);
        const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
        if (!(herm <= herm_tol)) {
            throw PositivityError("metric is not Hermitian at lattice point " + g.grid.point_label(p) +
                                      " (asymmetry " + std::to_string(herm) + ")",
                                  p);
        }
    }
    const MinEig me = min_eigenvalue(g);
    if (!(me.value > 0.0)) {
        throw PositivityError("metric lost positivity at lattice point " + g.grid.point_label(me.point) +
                                  " (smallest eigenvalue " + std::to_string(me.value) + ")",
                              me.point);
    }
}

namespace {

ScalarField component_field(const TensorField& t, long c) {
    ScalarField f(t.grid);
    f.v = t.comp[static_cast<size_t>(c)];
    return f;
}

}  // namespace

TensorField nabla(const TensorField& t, const MetricField& g) {
    require_same_grid(t.grid, g.grid, "nabla");
    const TensorField gam = christoffel(g);

    std::vector<Slot> out_slots;
    out_slots.reserve(t.slots.size() + 1);
    out_slots.push_back(Slot::Low);
    out_slots.insert(out_slots.end(), t.slots.begin(), t.slots.end());
    TensorField out(t.grid, out_slots);

    const long nc = t.ncomp();
    const long np = t.grid.npts();
    for (int i = 0; i < 3; ++i) {
        for (long c = 0; c < nc; ++c) {
            out.comp[static_cast<size_t>(i * nc + c)] = partial_z(component_field(t, c), i).v;
        }
    }

    // Connection terms: +Gamma on holomorphic upper slots, -Gamma on
    // holomorphic lower slots, nothing on barred slots.
    for (int s = 0; s < t.rank(); ++s) {
        const Slot ty = t.slots[static_cast<size_t>(s)];
        if (ty != Slot::Up && ty != Slot::Low) continue;
        long stride = 1;
        for (int u = s + 1; u < t.rank(); ++u) stride *= 3;
        const double sign = (ty == Slot::Up) ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) {
            for (long c = 0; c < nc; ++c) {
                const int ds = static_cast<int>((c / stride) % 3);
                const long c0 = c - ds * stride;
                auto& dst = out.comp[static_cast<size_t>(i * nc + c)];
                for (int gm = 0; gm < 3; ++gm) {
                    const auto& src = t.comp[static_cast<size_t>(c0 + gm * stride)];
                    const int gcomp = (ty == Slot::Up) ? (i * 9 + ds * 3 + gm) : (i * 9 + gm * 3 + ds);
                    const auto& gv = gam.comp[static_cast<size_t>(gcomp)];
                    parallel_for(np, [&](long lo, long hi) {
                        for (long p = lo; p < hi; ++p) {
                            dst[static_cast<size_t>(p)] += sign * gv[static_cast<size_t>(p)] * src[static_cast<size_t>(p)];
                        }
                    });
                }
            }
        }
    }
    return out;
}

TensorField nabla_bar(const TensorField& t, const MetricField& g) {
    require_same_grid(t.grid, g.grid, "nabla_bar");
    const TensorField gam = christoffel(g);

    std::vector<Slot> out_slots;
    out_slots.reserve(t.slots.size() + 1);
    out_slots.push_back(Slot::LowBar);
    out_slots.insert(out_slots.end(), t.slots.begin(), t.slots.end());
    TensorField out(t.grid, out_slots);

    const long nc = t.ncomp();
    const long np = t.grid.npts();
    for (int i = 0; i < 3; ++i) {
        for (long c = 0; c < nc; ++c) {
            out.comp[static_cast<size_t>(i * nc + c)] = partial_zbar(component_field(t, c), i).v;
        }
    }

    // Mirror image of nabla: conjugated connection coefficients act on the
    // antiholomorphic slots only.
    for (int s = 0; s < t.rank(); ++s) {
        const Slot ty = t.slots[static_cast<size_t>(s)];
        if (ty != Slot::UpBar && ty != Slot::LowBar) continue;
        long stride = 1;
        for (int u = s + 1; u < t.rank(); ++u) stride *= 3;
        const double sign = (ty == Slot::UpBar) ? 1.0 : -1.0;
        for (int i = 0; i < 3; ++i) {
            for (long c = 0; c < nc; ++c) {
                const int ds = static_cast<int>((c / stride) % 3);
                const long c0 = c - ds * stride;
                auto& dst = out.comp[static_cast<size_t>(i * nc + c)];
                for (int gm = 0; gm < 3; ++gm) {
                    const auto& src = t.comp[static_cast<size_t>(c0 + gm * stride)];
                    const int gcomp = (ty == Slot::UpBar) ? (i * 9 + ds * 3 + gm) : (i * 9 + gm * 3 + ds);
                    const auto& gv = gam.comp[static_cast<size_t>(gcomp)];
                    parallel_for(np, [&](long lo, long hi) {
                        for (long p = lo; p < hi; ++p) {
                            dst[static_cast<size_t>(p)] +=
                                sign * std::conj(gv[static_cast<size_t>(p)]) * src[static_cast<size_t>(p)];
                        }
                    });
                }
            }
        }
    }
    return out;
}

ScalarField norm_sq(const TensorField& t, const MetricField& g) {
    require_same_grid(t.grid, g.grid, "norm_sq");
    ScalarField out(t.grid);
    const int r = t.rank();
    const long nc = t.ncomp();
    const long np = t.grid.npts();

    parallel_for(np, [&](long lo, long hi) {
        std::vector<cplx> a(static_cast<size_t>(nc)), b(static_cast<size_t>(nc)), orig(static_cast<size_t>(nc));
        for (long p = lo; p < hi; ++p) {
            const Mat3 G = g.mat(p);
            const Mat3 Gi = G.inverse();
            for (long c = 0; c < nc; ++c) {
                orig[static_cast<size_t>(c)] = a[static_cast<size_t>(c)] = t.comp[static_cast<size_t>(c)][static_cast<size_t>(p)];
            }
            // Pair slot s of the tensor with the same slot of its conjugate:
            // lower slots contract through the inverse metric, upper slots
            // through the metric, with transposition fixed by barredness.
            for (int s = 0; s < r; ++s) {
                Mat3 M;
                switch (t.slots[static_cast<size_t>(s)]) {
                    case Slot::Low: M = Gi.transpose(); break;
                    case Slot::LowBar: M = Gi; break;
                    case Slot::Up: M = G; break;
                    case Slot::UpBar: M = G.transpose(); break;
                }
                long stride = 1;
                for (int u = s + 1; u < r; ++u) stride *= 3;
                for (long c = 0; c < nc; ++c) {
                    const int J = static_cast<int>((c / stride) % 3);
                    const long c0 = c - J * stride;
                    cplx acc{0.0, 0.0};
                    for (int I = 0; I < 3; ++I) acc += M(J, I) * a[static_cast<size_t>(c0 + I * stride)];
                    b[static_cast<size_t>(c)] = acc;
                }
                std::swap(a, b);
            }
            cplx acc{0.0, 0.0};
            for (long c = 0; c < nc; ++c) acc += a[static_cast<size_t>(c)] * std::conj(orig[static_cast<size_t>(c)]);
            out.v[static_cast<size_t>(p)] = cplx(acc.real(), 0.0);
        }
    });
    return out;
}

ScalarField dq_norm_sq(const TensorField& t, const MetricField& g, int q) {
    if (q < 0) throw ContractError("dq_norm_sq: negative derivative order");
    if (t.rank() + q > kMaxRank) {
        throw ContractError("dq_norm_sq: derivative order " + std::to_string(q) +
                            " would exceed the supported tensor rank");
    }
    ScalarField acc(t.grid);
    TensorField bl = t;  // nabla_bar^l t
    for (int l = 0; l <= q; ++l) {
        if (l > 0) bl = nabla_bar(bl, g);
        TensorField bm = bl;
        for (int m = 0; m < q - l; ++m) bm = nabla(bm, g);
        const ScalarField n = norm_sq(bm, g);
        for (size_t p = 0; p < acc.v.size(); ++p) acc.v[p] += n.v[p];
    }
    return acc;
}

cplx integrate(const ScalarField& f, const MetricField& g) {
    require_same_grid(f.grid, g.grid, "integrate");
    return integrate_weighted(f, det_field(g));
}

double sup_real(const ScalarField& f) {
    double m = -std::numeric_limits<double>::infinity();
    for (const cplx& x : f.v) m = std::max(m, x.real());
    return m;
}

double inf_real(const ScalarField& f) {
    double m = std::numeric_limits<double>::infinity();
    for (const cplx& x : f.v) m = std::min(m, x.real());
    return m;
}

}  // namespace aflow
