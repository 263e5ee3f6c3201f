#include "nlt/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <stdexcept>

namespace nlt {

// ---------------------------------------------------------------- FFT plans

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
class PlanCache {
public:
    struct Plans {
        fftw_plan r2c;
        fftw_plan c2r;
    };

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    const Plans& get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;
        std::vector<double> real(n);
        std::vector<std::complex<double>> cplx(n / 2 + 1);
        auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        Plans p{fftw_plan_dft_r2c_1d(static_cast<int>(n), real.data(), c, flags),
                fftw_plan_dft_c2r_1d(static_cast<int>(n), c, real.data(), flags)};
        return plans_.emplace(n, p).first->second;
    }

    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.r2c);
            fftw_destroy_plan(p.c2r);
        }
    }

private:
    PlanCache() = default;
    std::mutex mutex_;
    std::map<std::size_t, Plans> plans_;
};

}  // namespace

Spectrum forward_transform(const Grid& grid, const std::vector<double>& values) {
    if (values.size() != grid.size()) throw std::invalid_argument("sample count mismatch");
    const auto& plans = PlanCache::instance().get(grid.size());
    std::vector<double> in(values);
    Spectrum out(grid.spectrum_size());
    fftw_execute_dft_r2c(plans.r2c, in.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

std::vector<double> inverse_transform(const Grid& grid, Spectrum spectrum) {
    if (spectrum.size() != grid.spectrum_size()) {
        throw std::invalid_argument("spectrum length mismatch");
    }
    const auto& plans = PlanCache::instance().get(grid.size());
    std::vector<double> out(grid.size());
    fftw_execute_dft_c2r(plans.c2r, reinterpret_cast<fftw_complex*>(spectrum.data()),
                         out.data());
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (double& v : out) v *= scale;
    return out;
}

Spectrum to_spectrum(const RealField& f) {
    return forward_transform(f.grid(), std::vector<double>(f.values().begin(), f.values().end()));
}

RealField from_spectrum(const Grid& grid, Spectrum spectrum) {
    return RealField(grid, inverse_transform(grid, std::move(spectrum)));
}

// ---------------------------------------------------------------- multipliers

void apply_hilbert(const Grid& grid, Spectrum& s) {
    const std::complex<double> minus_i(0.0, -1.0);
    s[0] = 0.0;
    for (std::size_t m = 1; m < grid.size() / 2; ++m) s[m] *= minus_i;
    s[grid.size() / 2] = 0.0;
}

void apply_frac_laplacian(const Grid& grid, Spectrum& s, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) {
        throw std::invalid_argument("fractional Laplacian exponent must lie in [0, 2]");
    }
    if (alpha == 0.0) return;
    s[0] = 0.0;
    for (std::size_t m = 1; m < s.size(); ++m) s[m] *= std::pow(grid.wavenumber(m), alpha);
}

void apply_deriv(const Grid& grid, Spectrum& s) {
    s[0] = 0.0;
    for (std::size_t m = 1; m < grid.size() / 2; ++m) {
        s[m] *= std::complex<double>(0.0, grid.wavenumber(m));
    }
    s[grid.size() / 2] = 0.0;
}

std::size_t dealias_cutoff(const Grid& grid) { return grid.size() / 3; }

void apply_dealias(const Grid& grid, Spectrum& s) {
    for (std::size_t m = dealias_cutoff(grid) + 1; m < s.size(); ++m) s[m] = 0.0;
}

namespace {

template <class Apply>
RealField transform_field(const RealField& f, Apply apply) {
    Spectrum s = to_spectrum(f);
    apply(f.grid(), s);
    return from_spectrum(f.grid(), std::move(s));
}

}  // namespace

RealField hilbert(const RealField& f) { return transform_field(f, apply_hilbert); }

RealField frac_laplacian(const RealField& f, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 2.0)) {
        throw std::invalid_argument("fractional Laplacian exponent must lie in [0, 2]");
    }
    return transform_field(f, [alpha](const Grid& g, Spectrum& s) {
        apply_frac_laplacian(g, s, alpha);
    });
}

RealField deriv(const RealField& f) { return transform_field(f, apply_deriv); }

RealField dealias(const RealField& f) { return transform_field(f, apply_dealias); }

RealField dealiased_product(const RealField& a, const RealField& b) {
    return dealias(pointwise_product(a, b));
}

double hilbert_identity_residual(const RealField& f) {
    const RealField hf = hilbert(f);
    const RealField lhs = 2.0 * hilbert(dealiased_product(f, hf));
    RealField rhs = dealiased_product(hf, hf) - dealiased_product(f, f);
    rhs = rhs - RealField::constant(f.grid(), rhs.mean());
    return max_abs_diff(lhs, rhs);
}

double sobolev_seminorm_squared(const Grid& grid, const Spectrum& s, double order) {
    const std::size_t half = grid.size() / 2;
    double sum = 0.0;
    for (std::size_t m = 0; m <= half; ++m) {
        const double weight = (m == 0 || m == half) ? 1.0 : 2.0;
        double symbol = 1.0;
        if (order != 0.0) symbol = m == 0 ? 0.0 : std::pow(grid.wavenumber(m), 2.0 * order);
        sum += weight * symbol * std::norm(s[m]);
    }
    return sum * grid.dx() / static_cast<double>(grid.size());
}

}  // namespace nlt
