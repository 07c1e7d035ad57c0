#pragma once

#include <array>
#include <functional>
#include <vector>

#include "aflow/common.hpp"

namespace aflow {

// Discretisation of the real 6-torus underlying C^3/Z^6.  Complex coordinate
// z^j pairs the real axes (2j, 2j+1):  z^j = x^{2j} + i x^{2j+1}.
//
// Axes that are inactive carry a single sample; every field is constant along
// them and derivatives in those directions vanish identically.  This keeps
// low-dimensional test configurations cheap without special-casing callers.
struct GridSpec {
    std::array<int, 6> n{1, 1, 1, 1, 1, 1};
    std::array<bool, 6> active{};
    std::array<double, 6> period{1, 1, 1, 1, 1, 1};

    // Uniform sample count on all active axes.
    static GridSpec uniform(int samples, const std::array<bool, 6>& act,
                            const std::array<double, 6>& per = {1, 1, 1, 1, 1, 1});

    void validate() const;  // throws ContractError (odd n, n < 4, bad period)

    long npts() const;
    std::array<long, 6> strides() const;  // row-major, axis 5 fastest
    std::array<int, 6> coords(long p) const;
    long index(const std::array<int, 6>& c) const;
    std::array<double, 6> position(long p) const;  // x_a = period_a * i_a / n_a
    double cell_volume() const;                    // product over active axes of period_a / n_a
    std::string point_label(long p) const;         // "(i0,i1,...)" for diagnostics

    bool operator==(const GridSpec& o) const = default;
};

struct ScalarField {
    GridSpec grid;
    std::vector<cplx> v;

    ScalarField() = default;
    explicit ScalarField(const GridSpec& g) : grid(g), v(g.npts(), cplx{0.0, 0.0}) {}

    cplx& operator[](long p) { return v[p]; }
    const cplx& operator[](long p) const { return v[p]; }
};

// Evaluate fn at every lattice point.  fn receives the real position.
ScalarField sample(const GridSpec& g, const std::function<cplx(const std::array<double, 6>&)>& fn);

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);

// Spectral partial derivative along one real axis (trigonometric interpolation:
// integer wavenumbers, Nyquist mode dropped since its derivative is not
// representable with real symmetry).  Inactive axis: identically zero.
// A line whose samples are all equal differentiates to exactly 0.0, with no
// transform round-off; flat configurations stay bitwise flat.
ScalarField partial_real(const ScalarField& f, int axis);

// Holomorphic/antiholomorphic derivatives for z^j = x^{2j} + i x^{2j+1}:
//   partial_z    = (D_{2j} - i D_{2j+1}) / 2
//   partial_zbar = (D_{2j} + i D_{2j+1}) / 2
ScalarField partial_z(const ScalarField& f, int j);
ScalarField partial_zbar(const ScalarField& f, int j);

// Plain lattice integral  sum f * cell_volume  (no metric weight).
cplx integrate(const ScalarField& f);
// Weighted integral  sum f * w * cell_volume; w is a pointwise real weight
// such as det(g).  Summation order is fixed regardless of thread count.
cplx integrate_weighted(const ScalarField& f, const std::vector<double>& w);

double max_abs(const ScalarField& f);

// Worker count for pointwise loops (1 = serial; default).  Writes from
// parallel_for chunks are disjoint, so results are bitwise independent of the
// thread count; reductions always accumulate chunk sums in index order.
void set_num_threads(int t);
int num_threads();
void parallel_for(long count, const std::function<void(long begin, long end)>& body);

}  // namespace aflow
