#include "ssns/fft3.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace ssns {
namespace {

struct PlanSet {
    int n = 0;
    double* real_buf = nullptr;
    fftw_complex* cplx_buf = nullptr;
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;

    explicit PlanSet(int n_) : n(n_) {
        const std::size_t nr = static_cast<std::size_t>(n) * n * n;
        const std::size_t nc = static_cast<std::size_t>(n) * n * (n / 2 + 1);
        real_buf = fftw_alloc_real(nr);
        cplx_buf = fftw_alloc_complex(nc);
        if (!real_buf || !cplx_buf)
            throw std::bad_alloc();
        fwd = fftw_plan_dft_r2c_3d(n, n, n, real_buf, cplx_buf, FFTW_MEASURE);
        bwd = fftw_plan_dft_c2r_3d(n, n, n, cplx_buf, real_buf, FFTW_MEASURE);
    }
    ~PlanSet() {
        if (fwd) fftw_destroy_plan(fwd);
        if (bwd) fftw_destroy_plan(bwd);
        fftw_free(real_buf);
        fftw_free(cplx_buf);
    }
    PlanSet(const PlanSet&) = delete;
    PlanSet& operator=(const PlanSet&) = delete;
};

PlanSet& plans_for(int n) {
    static std::map<int, PlanSet*> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, new PlanSet(n)).first;
    return *it->second;
}

}  // namespace

void fft_forward(const Grid& g, const std::vector<double>& phys,
                 std::vector<std::complex<double>>& spec) {
    if (phys.size() != g.num_points())
        throw std::invalid_argument("fft_forward: size mismatch");
    PlanSet& p = plans_for(g.n);
    spec.resize(spectral_size(g));
    std::memcpy(p.real_buf, phys.data(), phys.size() * sizeof(double));
    fftw_execute(p.fwd);
    const double scale = 1.0 / static_cast<double>(g.num_points());
    const auto* src = reinterpret_cast<const std::complex<double>*>(p.cplx_buf);
    for (std::size_t i = 0; i < spec.size(); ++i)
        spec[i] = src[i] * scale;
}

void fft_backward(const Grid& g, const std::vector<std::complex<double>>& spec,
                  std::vector<double>& phys) {
    if (spec.size() != spectral_size(g))
        throw std::invalid_argument("fft_backward: size mismatch");
    PlanSet& p = plans_for(g.n);
    phys.resize(g.num_points());
    std::memcpy(p.cplx_buf, spec.data(), spec.size() * sizeof(fftw_complex));
    fftw_execute(p.bwd);
    std::memcpy(phys.data(), p.real_buf, phys.size() * sizeof(double));
}

}  // namespace ssns
