#include "aflow/forms.hpp"

#include <algorithm>
#include <cmath>

namespace aflow {

namespace {

// Insert `k` into the ascending tuple `t`.  Returns the sign of the
// permutation that sorts (k, t...) or 0 if k already occurs.
int merge_one(const std::vector<int>& t, int k, std::vector<int>& out) {
    int pos = 0;
    for (int v : t) {
        if (v == k) return 0;
        if (v < k) ++pos;
    }
    out.clear();
    out.reserve(t.size() + 1);
    out.insert(out.end(), t.begin(), t.end());
    out.insert(out.begin() + pos, k);
    return (pos % 2 == 0) ? 1 : -1;
}

// Concatenate two ascending tuples and sort; sign by inversion count, 0 on a
// repeated index.
int merge_two(const std::vector<int>& a, const std::vector<int>& b, std::vector<int>& out) {
    out.clear();
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    int inv = 0;
    for (size_t i = 0; i < out.size(); ++i) {
        for (size_t j = i + 1; j < out.size(); ++j) {
            if (out[i] == out[j]) return 0;
            if (out[i] > out[j]) ++inv;
        }
    }
    std::sort(out.begin(), out.end());
    return (inv % 2 == 0) ? 1 : -1;
}

// Complementary pair basis for (2,2)-forms: axis a pairs with the ascending
// 2-tuple omitting a, signed so that dz^a ∧ dz^{pair} = sign * dz^0∧dz^1∧dz^2.
struct Pair22 {
    std::vector<int> tuple;
    double sign;
};
const Pair22 kPair[3] = {{{1, 2}, 1.0}, {{0, 2}, -1.0}, {{0, 1}, 1.0}};

}  // namespace

FormField::FormField(const GridSpec& g, int p_deg, int q_deg) : grid(g), p(p_deg), q(q_deg) {
    if (p < 0 || p > 3 || q < 0 || q > 3) throw ContractError("FormField: bidegree out of range");
    const long nc = static_cast<long>(tuple_count(p)) * tuple_count(q);
    comp.assign(static_cast<size_t>(nc), std::vector<cplx>(static_cast<size_t>(g.npts()), cplx{0.0, 0.0}));
}

const std::vector<std::vector<int>>& FormField::tuples(int len) {
    static const std::vector<std::vector<int>> t0 = {{}};
    static const std::vector<std::vector<int>> t1 = {{0}, {1}, {2}};
    static const std::vector<std::vector<int>> t2 = {{0, 1}, {0, 2}, {1, 2}};
    static const std::vector<std::vector<int>> t3 = {{0, 1, 2}};
    switch (len) {
        case 0: return t0;
        case 1: return t1;
        case 2: return t2;
        case 3: return t3;
        default: throw ContractError("FormField: tuple length out of range");
    }
}

int FormField::tuple_count(int len) { return static_cast<int>(tuples(len).size()); }

int FormField::tuple_index(const std::vector<int>& t) {
    const auto& list = tuples(static_cast<int>(t.size()));
    for (size_t i = 0; i < list.size(); ++i) {
        if (list[i] == t) return static_cast<int>(i);
    }
    throw ContractError("FormField: tuple is not ascending");
}

FormField add_scaled(const FormField& a, cplx s, const FormField& b) {
    require_same_grid(a.grid, b.grid, "form add_scaled");
    if (a.p != b.p || a.q != b.q) throw ContractError("form add_scaled: bidegree mismatch");
    FormField out = a;
    for (long c = 0; c < out.ncomp(); ++c) {
        auto& dst = out.comp[static_cast<size_t>(c)];
        const auto& src = b.comp[static_cast<size_t>(c)];
        for (size_t x = 0; x < dst.size(); ++x) dst[x] += s * src[x];
    }
    return out;
}

FormField scaled(const FormField& a, cplx s) {
    FormField out = a;
    for (auto& arr : out.comp) {
        for (auto& v : arr) v *= s;
    }
    return out;
}

double max_abs(const FormField& f) {
    double m = 0.0;
    for (const auto& arr : f.comp) {
        for (const cplx& v : arr) m = std::max(m, std::abs(v));
    }
    return m;
}

FormField wedge(const FormField& a, const FormField& b) {
    require_same_grid(a.grid, b.grid, "wedge");
    if (a.p + b.p > 3 || a.q + b.q > 3) throw ContractError("wedge: resulting bidegree exceeds (3,3)");
    FormField out(a.grid, a.p + b.p, a.q + b.q);
    const long np = a.grid.npts();
    const auto& ia_list = FormField::tuples(a.p);
    const auto& ja_list = FormField::tuples(a.q);
    const auto& ib_list = FormField::tuples(b.p);
    const auto& jb_list = FormField::tuples(b.q);
    std::vector<int> mi, mj;
    // (dz^{Ia} dz̄^{Ja}) ∧ (dz^{Ib} dz̄^{Jb}) reorders dz̄^{Ja} past dz^{Ib}.
    const double cross = (a.q * b.p) % 2 == 0 ? 1.0 : -1.0;
    for (size_t ia = 0; ia < ia_list.size(); ++ia) {
        for (size_t ja = 0; ja < ja_list.size(); ++ja) {
            const auto& ca = a.comp[ia * ja_list.size() + ja];
            for (size_t ib = 0; ib < ib_list.size(); ++ib) {
                const int si = merge_two(ia_list[ia], ib_list[ib], mi);
                if (si == 0) continue;
                const int mi_idx = FormField::tuple_index(mi);
                for (size_t jb = 0; jb < jb_list.size(); ++jb) {
                    const int sj = merge_two(ja_list[ja], jb_list[jb], mj);
                    if (sj == 0) continue;
                    const double sign = cross * si * sj;
                    const auto& cb = b.comp[ib * jb_list.size() + jb];
                    auto& dst = out.comp[static_cast<size_t>(mi_idx) * FormField::tuples(out.q).size() +
                                         static_cast<size_t>(FormField::tuple_index(mj))];
                    for (long x = 0; x < np; ++x) {
                        dst[static_cast<size_t>(x)] += sign * ca[static_cast<size_t>(x)] * cb[static_cast<size_t>(x)];
                    }
                }
            }
        }
    }
    return out;
}

FormField del(const FormField& f) {
    if (f.p == 3) {
        FormField out(f.grid, 3, f.q);  // would need four holomorphic slots; identically zero
        return out;
    }
    FormField out(f.grid, f.p + 1, f.q);
    const auto& i_list = FormField::tuples(f.p);
    const auto& j_list = FormField::tuples(f.q);
    ScalarField buf(f.grid);
    std::vector<int> merged;
    for (size_t ia = 0; ia < i_list.size(); ++ia) {
        for (size_t ja = 0; ja < j_list.size(); ++ja) {
            const auto& src = f.comp[ia * j_list.size() + ja];
            for (int k = 0; k < 3; ++k) {
                const int sign = merge_one(i_list[ia], k, merged);
                if (sign == 0) continue;
                buf.v = src;
                const auto d = partial_z(buf, k).v;
                auto& dst = out.comp[static_cast<size_t>(FormField::tuple_index(merged)) * j_list.size() + ja];
                for (size_t x = 0; x < d.size(); ++x) dst[x] += static_cast<double>(sign) * d[x];
            }
        }
    }
    return out;
}

FormField delbar(const FormField& f) {
    if (f.q == 3) {
        FormField out(f.grid, f.p, 3);
        return out;
    }
    FormField out(f.grid, f.p, f.q + 1);
    const auto& i_list = FormField::tuples(f.p);
    const auto& j_list = FormField::tuples(f.q);
    const auto& jo_list = FormField::tuples(f.q + 1);
    ScalarField buf(f.grid);
    std::vector<int> merged;
    const double pass_dz = (f.p % 2 == 0) ? 1.0 : -1.0;
    for (size_t ia = 0; ia < i_list.size(); ++ia) {
        for (size_t ja = 0; ja < j_list.size(); ++ja) {
            const auto& src = f.comp[ia * j_list.size() + ja];
            for (int k = 0; k < 3; ++k) {
                const int sign = merge_one(j_list[ja], k, merged);
                if (sign == 0) continue;
                buf.v = src;
                const auto d = partial_zbar(buf, k).v;
                auto& dst = out.comp[ia * jo_list.size() + static_cast<size_t>(FormField::tuple_index(merged))];
                for (size_t x = 0; x < d.size(); ++x) dst[x] += pass_dz * sign * d[x];
            }
        }
    }
    return out;
}

double d_residual_sup(const FormField& f) {
    double m = 0.0;
    if (f.p < 3) m = std::max(m, max_abs(del(f)));
    if (f.q < 3) m = std::max(m, max_abs(delbar(f)));
    return m;
}

ScalarField omega_norm(const MetricField& g) {
    ScalarField out(g.grid);
    const auto det = det_field(g);
    for (size_t p = 0; p < det.size(); ++p) {
        if (!(det[p] > 0.0)) {
            throw PositivityError("metric determinant is not positive at lattice point " +
                                      g.grid.point_label(static_cast<long>(p)),
                                  static_cast<long>(p));
        }
        out.v[p] = cplx(1.0 / std::sqrt(det[p]), 0.0);
    }
    return out;
}

FormField omega_from_metric(const MetricField& g) {
    FormField out(g.grid, 1, 1);
    const long np = g.npts();
    for (int j = 0; j < 3; ++j) {
        for (int k = 0; k < 3; ++k) {
            auto& dst = out.comp[static_cast<size_t>(j * 3 + k)];
            const auto& src = g.comp[static_cast<size_t>(3 * k + j)];  // g_{k̄j}
            for (long x = 0; x < np; ++x) dst[static_cast<size_t>(x)] = cplx(0.0, 1.0) * src[static_cast<size_t>(x)];
        }
    }
    return out;
}

FormField psi_from_metric(const MetricField& g) {
    const FormField om = omega_from_metric(g);
    FormField psi = wedge(om, om);
    const ScalarField w = omega_norm(g);
    for (auto& arr : psi.comp) {
        for (size_t x = 0; x < arr.size(); ++x) arr[x] *= w.v[x].real();
    }
    return psi;
}

Mat3 rep22(const FormField& x, long pt) {
    if (x.p != 2 || x.q != 2) throw ContractError("rep22: expected a (2,2)-form");
    Mat3 w;
    for (int b = 0; b < 3; ++b) {
        for (int a = 0; a < 3; ++a) {
            const int ia = FormField::tuple_index(kPair[a].tuple);
            const int jb = FormField::tuple_index(kPair[b].tuple);
            w(b, a) = kPair[a].sign * kPair[b].sign * x.at(ia, jb, pt);
        }
    }
    return w;
}

FormField form22_from_matrix(const GridSpec& g, const Mat3& w) {
    FormField out(g, 2, 2);
    const long np = g.npts();
    for (int b = 0; b < 3; ++b) {
        for (int a = 0; a < 3; ++a) {
            const int ia = FormField::tuple_index(kPair[a].tuple);
            const int jb = FormField::tuple_index(kPair[b].tuple);
            const cplx val = kPair[a].sign * kPair[b].sign * w(b, a);
            auto& dst = out.comp[static_cast<size_t>(ia * 3 + jb)];
            for (long x = 0; x < np; ++x) dst[static_cast<size_t>(x)] = val;
        }
    }
    return out;
}

MetricField metric_from_psi(const FormField& psi) {
    if (psi.p != 2 || psi.q != 2) throw ContractError("metric_from_psi: expected a (2,2)-form");
    MetricField g(psi.grid);
    const long np = psi.grid.npts();
    parallel_for(np, [&](long lo, long hi) {
        for (long pt = lo; pt < hi; ++pt) {
            const Mat3 a = 0.5 * rep22(psi, pt);
            const double herm = (a - a.adjoint()).cwiseAbs().maxCoeff();
            const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
            if (!(herm <= 1e-8 * scale)) {
                throw PositivityError("(2,2) datum is not Hermitian at lattice point " +
                                          psi.grid.point_label(pt),
                                      pt);
            }
            // With a = det(g)^{1/2} g^{-T} the inverse is the transposed
            // adjugate; positivity of g is checked by the caller's
            // require_positive when it matters, but a non-positive det is
            // already fatal here.
            const double det_a = a.determinant().real();
            if (!(det_a > 0.0)) {
                throw PositivityError("(2,2) datum has non-positive determinant at lattice point " +
                                          psi.grid.point_label(pt),
                                      pt);
            }
            Mat3 adj_t;  // adj(a^T): adj(a)(i,j) = cofactor of a(j,i)
            const Mat3 at = a.transpose();
            adj_t = at.determinant() * at.inverse();
            const Mat3 gm = 0.5 * (adj_t + adj_t.adjoint());  // symmetrise round-off
            g.set(pt, gm);
        }
    });
    return g;
}

double balanced_residual(const MetricField& g) {
    return d_residual_sup(psi_from_metric(g));
}

FormField trace_rm_wedge_rm(const TensorField& rm) {
    if (rm.slots != std::vector<Slot>{Slot::LowBar, Slot::Low, Slot::Up, Slot::Low}) {
        throw ContractError("trace_rm_wedge_rm: tensor does not have the curvature slot layout");
    }
    FormField acc(rm.grid, 2, 2);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            // Theta^a_b = R_{p̄q}{}^a{}_b dz^q ∧ dz̄^p
            FormField fa(rm.grid, 1, 1);
            FormField fb(rm.grid, 1, 1);
            for (int p = 0; p < 3; ++p) {
                for (int q = 0; q < 3; ++q) {
                    fa.comp[static_cast<size_t>(q * 3 + p)] = rm.comp[static_cast<size_t>(p * 27 + q * 9 + a * 3 + b)];
                    fb.comp[static_cast<size_t>(q * 3 + p)] = rm.comp[static_cast<size_t>(p * 27 + q * 9 + b * 3 + a)];
                }
            }
            acc = add_scaled(acc, cplx{1.0, 0.0}, wedge(fa, fb));
        }
    }
    return acc;
}

}  // namespace aflow
