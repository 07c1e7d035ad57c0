#include "aflow/tensor.hpp"

namespace aflow {

namespace {

// dz[k][3*p + q] = partial_{z^k} g_{p̄q}
std::array<std::array<std::vector<cplx>, 9>, 3> metric_derivatives(const MetricField& g) {
    std::array<std::array<std::vector<cplx>, 9>, 3> dz;
    ScalarField buf(g.grid);
    for (int k = 0; k < 3; ++k) {
        for (int c = 0; c < 9; ++c) {
            buf.v = g.comp[static_cast<size_t>(c)];
            dz[static_cast<size_t>(k)][static_cast<size_t>(c)] = partial_z(buf, k).v;
        }
    }
    return dz;
}

}  // namespace

TensorField christoffel(const MetricField& g) {
    const auto dz = metric_derivatives(g);
    TensorField out(g.grid, {Slot::Low, Slot::Up, Slot::Low});
    const long np = g.npts();
    parallel_for(np, [&](long lo, long hi) {
        for (long p = lo; p < hi; ++p) {
            const Mat3 Gi = g.mat(p).inverse();
            for (int k = 0; k < 3; ++k) {
                for (int a = 0; a < 3; ++a) {
                    for (int b = 0; b < 3; ++b) {
                        cplx acc{0.0, 0.0};
                        for (int gm = 0; gm < 3; ++gm) {
                            acc += Gi(a, gm) * dz[static_cast<size_t>(k)][static_cast<size_t>(3 * gm + b)][static_cast<size_t>(p)];
                        }
                        out.comp[static_cast<size_t>(k * 9 + a * 3 + b)][static_cast<size_t>(p)] = acc;
                    }
                }
            }
        }
    });
    return out;
}

TensorField torsion(const MetricField& g) {
    const auto dz = metric_derivatives(g);
    TensorField out(g.grid, {Slot::LowBar, Slot::Low, Slot::Low});
    const long np = g.npts();
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            for (int k = 0; k < 3; ++k) {
                auto& dst = out.comp[static_cast<size_t>(p * 9 + q * 3 + k)];
                const auto& a = dz[static_cast<size_t>(q)][static_cast<size_t>(3 * p + k)];
                const auto& b = dz[static_cast<size_t>(k)][static_cast<size_t>(3 * p + q)];
                for (long x = 0; x < np; ++x) {
                    dst[static_cast<size_t>(x)] = a[static_cast<size_t>(x)] - b[static_cast<size_t>(x)];
                }
            }
        }
    }
    return out;
}

TensorField torsion_trace(const MetricField& g) {
    const TensorField T = torsion(g);
    TensorField out(g.grid, {Slot::Low});
    const long np = g.npts();
    parallel_for(np, [&](long lo, long hi) {
        for (long x = lo; x < hi; ++x) {
            const Mat3 Gi = g.mat(x).inverse();
            for (int i = 0; i < 3; ++i) {
                cplx acc{0.0, 0.0};
                for (int k = 0; k < 3; ++k) {
                    for (int p = 0; p < 3; ++p) {
                        acc += Gi(k, p) * T.comp[static_cast<size_t>(p * 9 + k * 3 + i)][static_cast<size_t>(x)];
                    }
                }
                out.comp[static_cast<size_t>(i)][static_cast<size_t>(x)] = acc;
            }
        }
    });
    return out;
}

TensorField curvature(const MetricField& g) {
    const TensorField gam = christoffel(g);
    TensorField out(g.grid, {Slot::LowBar, Slot::Low, Slot::Up, Slot::Low});
    ScalarField buf(g.grid);
    for (int p = 0; p < 3; ++p) {
        for (int q = 0; q < 3; ++q) {
            for (int r = 0; r < 3; ++r) {
                for (int s = 0; s < 3; ++s) {
                    buf.v = gam.comp[static_cast<size_t>(q * 9 + r * 3 + s)];
                    auto d = partial_zbar(buf, p).v;
                    for (auto& x : d) x = -x;
                    out.comp[static_cast<size_t>(p * 27 + q * 9 + r * 3 + s)] = std::move(d);
                }
            }
        }
    }
    return out;
}

TensorField ricci_tilde(const MetricField& g) {
    const TensorField R = curvature(g);
    TensorField out(g.grid, {Slot::LowBar, Slot::Low});
    const long np = g.npts();
    parallel_for(np, [&](long lo, long hi) {
        for (long x = lo; x < hi; ++x) {
            const Mat3 G = g.mat(x);
            const Mat3 Gi = G.inverse();
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    cplx acc{0.0, 0.0};
                    for (int k = 0; k < 3; ++k) {
                        for (int a = 0; a < 3; ++a) {
                            for (int r = 0; r < 3; ++r) {
                                acc += Gi(k, a) * G(p, r) *
                                       R.comp[static_cast<size_t>(a * 27 + k * 9 + r * 3 + q)][static_cast<size_t>(x)];
                            }
                        }
                    }
                    out.comp[static_cast<size_t>(p * 3 + q)][static_cast<size_t>(x)] = acc;
                }
            }
        }
    });
    return out;
}

}  // namespace aflow
