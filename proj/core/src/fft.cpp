#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace szego::detail {

namespace {

struct PlanPair {
    fftw_plan fwd = nullptr, bwd = nullptr;
    fftw_complex* buf = nullptr;
    ~PlanPair() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        if (buf) fftw_free(buf);
    }
};

std::mutex g_mutex;
std::map<int, PlanPair>& cache() {
    static std::map<int, PlanPair> c;
    return c;
}

} // namespace

void fft(const Eigen::VectorXcd& in, Eigen::VectorXcd& out, int sign) {
    const int m = static_cast<int>(in.size());
    out.resize(m);

    std::lock_guard<std::mutex> lock(g_mutex);
    auto& pp = cache()[m];
    if (!pp.buf) {
        pp.buf = fftw_alloc_complex(static_cast<size_t>(m));
        pp.fwd = fftw_plan_dft_1d(m, pp.buf, pp.buf, FFTW_FORWARD, FFTW_ESTIMATE);
        pp.bwd = fftw_plan_dft_1d(m, pp.buf, pp.buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (int i = 0; i < m; ++i) {
        pp.buf[i][0] = in[i].real();
        pp.buf[i][1] = in[i].imag();
    }
    fftw_execute(sign < 0 ? pp.fwd : pp.bwd);
    for (int i = 0; i < m; ++i) out[i] = cd(pp.buf[i][0], pp.buf[i][1]);
}

} // namespace szego::detail
