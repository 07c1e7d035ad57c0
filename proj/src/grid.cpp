#include "aflow/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace aflow {

GridSpec GridSpec::uniform(int samples, const std::array<bool, 6>& act,
                           const std::array<double, 6>& per) {
    GridSpec g;
    g.active = act;
    g.period = per;
    for (int a = 0; a < 6; ++a) g.n[a] = act[a] ? samples : 1;
    g.validate();
    return g;
}

void GridSpec::validate() const {
    for (int a = 0; a < 6; ++a) {
        if (active[a]) {
            if (n[a] < 4 || n[a] % 2 != 0) {
                throw ContractError("grid: active axis " + std::to_string(a) +
                                    " needs an even sample count >= 4, got " +
                                    std::to_string(n[a]));
            }
        } else if (n[a] != 1) {
            throw ContractError("grid: inactive axis " + std::to_string(a) +
                                " must carry a single sample");
        }
        if (!(period[a] > 0.0)) {
            throw ContractError("grid: period on axis " + std::to_string(a) +
                                " must be positive");
        }
    }
}

long GridSpec::npts() const {
    long t = 1;
    for (int a = 0; a < 6; ++a) t *= n[a];
    return t;
}

std::array<long, 6> GridSpec::strides() const {
    std::array<long, 6> s{};
    long acc = 1;
    for (int a = 5; a >= 0; --a) {
        s[a] = acc;
        acc *= n[a];
    }
    return s;
}

std::array<int, 6> GridSpec::coords(long p) const {
    auto s = strides();
    std::array<int, 6> c{};
    for (int a = 0; a < 6; ++a) {
        c[a] = static_cast<int>((p / s[a]) % n[a]);
    }
    return c;
}

long GridSpec::index(const std::array<int, 6>& c) const {
    auto s = strides();
    long p = 0;
    for (int a = 0; a < 6; ++a) p += s[a] * c[a];
    return p;
}

std::array<double, 6> GridSpec::position(long p) const {
    auto c = coords(p);
    std::array<double, 6> x{};
    for (int a = 0; a < 6; ++a) x[a] = period[a] * c[a] / n[a];
    return x;
}

double GridSpec::cell_volume() const {
    double v = 1.0;
    for (int a = 0; a < 6; ++a) {
        if (active[a]) v *= period[a] / n[a];
    }
    return v;
}

std::string GridSpec::point_label(long p) const {
    auto c = coords(p);
    std::ostringstream os;
    os << '(';
    for (int a = 0; a < 6; ++a) os << c[a] << (a < 5 ? "," : ")");
    return os.str();
}

ScalarField sample(const GridSpec& g, const std::function<cplx(const std::array<double, 6>&)>& fn) {
    ScalarField f(g);
    const long n = g.npts();
    for (long p = 0; p < n; ++p) f.v[p] = fn(g.position(p));
    return f;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
    if (!(a == b)) {
        throw ContractError(std::string(where) + ": operands live on different grids");
    }
}

namespace {

// One forward/backward complex 1-d plan pair per line length.  Plans are
// created with FFTW_ESTIMATE so the planner never runs timing experiments;
// repeated runs therefore use identical twiddle strategies.  FFTW_UNALIGNED
// lets us execute on whatever buffer the caller hands in.
struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;

PlanPair& plans_for(int len) {
    static std::map<int, PlanPair> cache;
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto it = cache.find(len);
    if (it != cache.end()) return it->second;
    std::vector<cplx> scratch(static_cast<size_t>(len));
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    pp.fwd = fftw_plan_dft_1d(len, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    pp.bwd = fftw_plan_dft_1d(len, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!pp.fwd || !pp.bwd) throw ContractError("fftw refused to build a plan");
    return cache.emplace(len, pp).first->second;
}

void differentiate_line(std::vector<cplx>& line, int len, double period) {
    auto& pp = plans_for(len);
    auto* buf = reinterpret_cast<fftw_complex*>(line.data());
    fftw_execute_dft(pp.fwd, buf, buf);
    const double scale = 1.0 / len;
    for (int m = 0; m < len; ++m) {
        int k = (m <= len / 2) ? m : m - len;
        if (m == len / 2) k = 0;  // unmatched Nyquist mode
        line[static_cast<size_t>(m)] *= cplx(0.0, 2.0 * M_PI * k / period) * scale;
    }
    fftw_execute_dft(pp.bwd, buf, buf);
}

}  // namespace

ScalarField partial_real(const ScalarField& f, int axis) {
    if (axis < 0 || axis >= 6) throw ContractError("partial_real: axis out of range");
    ScalarField out(f.grid);
    if (!f.grid.active[axis]) return out;  // constant direction

    const int len = f.grid.n[axis];
    const double period = f.grid.period[axis];
    const auto s = f.grid.strides();
    const long stride = s[axis];
    const long total = f.grid.npts();
    const long nlines = total / len;

    parallel_for(nlines, [&](long lo, long hi) {
        std::vector<cplx> line(static_cast<size_t>(len));
        for (long li = lo; li < hi; ++li) {
            // Base point of line li: enumerate points with coordinate 0 on `axis`.
            long rem = li;
            long base = 0;
            for (int a = 5; a >= 0; --a) {
                if (a == axis) continue;
                long w = f.grid.n[a];
                base += (rem % w) * s[a];
                rem /= w;
            }
            bool constant = true;
            const cplx first = f.v[static_cast<size_t>(base)];
            for (int m = 0; m < len; ++m) {
                const cplx val = f.v[static_cast<size_t>(base + m * stride)];
                line[static_cast<size_t>(m)] = val;
                if (val != first) constant = false;
            }
            if (constant) {
                // The interpolant of equal samples is that constant; write the
                // derivative without a transform so no round-off is introduced.
                for (int m = 0; m < len; ++m) out.v[static_cast<size_t>(base + m * stride)] = cplx{0.0, 0.0};
                continue;
            }
            differentiate_line(line, len, period);
            for (int m = 0; m < len; ++m) out.v[static_cast<size_t>(base + m * stride)] = line[static_cast<size_t>(m)];
        }
    });
    return out;
}

ScalarField partial_z(const ScalarField& f, int j) {
    if (j < 0 || j >= 3) throw ContractError("partial_z: complex index out of range");
    ScalarField dx = partial_real(f, 2 * j);
    ScalarField dy = partial_real(f, 2 * j + 1);
    const long n = f.grid.npts();
    ScalarField out(f.grid);
    for (long p = 0; p < n; ++p) {
        out.v[p] = 0.5 * (dx.v[p] - cplx(0.0, 1.0) * dy.v[p]);
    }
    return out;
}

ScalarField partial_zbar(const ScalarField& f, int j) {
    if (j < 0 || j >= 3) throw ContractError("partial_zbar: complex index out of range");
    ScalarField dx = partial_real(f, 2 * j);
    ScalarField dy = partial_real(f, 2 * j + 1);
    const long n = f.grid.npts();
    ScalarField out(f.grid);
    for (long p = 0; p < n; ++p) {
        out.v[p] = 0.5 * (dx.v[p] + cplx(0.0, 1.0) * dy.v[p]);
    }
    return out;
}

cplx integrate(const ScalarField& f) {
    cplx acc{0.0, 0.0};
    for (const cplx& x : f.v) acc += x;
    return acc * f.grid.cell_volume();
}

cplx integrate_weighted(const ScalarField& f, const std::vector<double>& w) {
    if (w.size() != f.v.size()) throw ContractError("integrate_weighted: weight size mismatch");
    cplx acc{0.0, 0.0};
    for (size_t p = 0; p < f.v.size(); ++p) acc += f.v[p] * w[p];
    return acc * f.grid.cell_volume();
}

double max_abs(const ScalarField& f) {
    double m = 0.0;
    for (const cplx& x : f.v) m = std::max(m, std::abs(x));
    return m;
}

namespace {
int g_threads = 1;
}

void set_num_threads(int t) {
    if (t < 1) throw ContractError("set_num_threads: need at least one worker");
    g_threads = t;
}

int num_threads() { return g_threads; }

void parallel_for(long count, const std::function<void(long, long)>& body) {
    const int workers = static_cast<int>(std::min<long>(g_threads, std::max<long>(count, 1)));
    if (workers <= 1) {
        body(0, count);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(static_cast<size_t>(workers));
    pool.reserve(static_cast<size_t>(workers));
    const long chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long lo = w * chunk;
        const long hi = std::min(count, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errs[static_cast<size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    // Rethrow the lowest-chunk failure so the surfaced error does not depend
    // on thread scheduling.
    for (auto& e : errs) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace aflow
