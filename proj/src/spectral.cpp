#include "parlab/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <stdexcept>

#include "parlab/fractional.hpp"

namespace parlab::spectral {

std::size_t SpectralField::reduced_spatial_size() const {
    std::size_t s = 1;
    for (int d = 0; d < spec.n; ++d) s *= static_cast<std::size_t>(Mx);
    return s;
}

std::size_t SpectralField::index(int k, std::span<const int> m) const {
    std::size_t idx = k;
    for (int d = 0; d < spec.n; ++d) idx = idx * Mx + m[d];
    return idx;
}

double SpectralField::rho(int k) const {
    int ks = (k <= Mt / 2) ? k : k - Mt;
    return 2.0 * M_PI * ks / (spec.t_max - spec.t_min);
}

double SpectralField::xi(int m) const {
    int ms = (m <= Mx / 2) ? m : m - Mx;
    return M_PI * ms / spec.L;
}

namespace {

void run_fft(std::vector<std::complex<double>>& data, int Mt, int Mx, int n, int sign) {
    std::vector<int> dims;
    dims.push_back(Mt);
    for (int d = 0; d < n; ++d) dims.push_back(Mx);
    fftw_plan plan = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                   reinterpret_cast<fftw_complex*>(data.data()),
                                   reinterpret_cast<fftw_complex*>(data.data()), sign,
                                   FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
}

}  // namespace

SpectralField transform(const GridFunction& f) {
    const GridSpec& spec = f.spec;
    spec.validate();
    SpectralField F;
    F.spec = spec;
    F.Mt = spec.N_t - 1;
    F.Mx = spec.N_x - 1;
    const std::size_t rsx = F.reduced_spatial_size();
    F.c.assign(static_cast<std::size_t>(F.Mt) * rsx, {});

    // copy the periodic representative (drop the duplicated end node per axis)
    std::vector<int> m(spec.n);
    for (int k = 0; k < F.Mt; ++k) {
        for (std::size_t mm = 0; mm < rsx; ++mm) {
            std::size_t rem = mm;
            for (int d = spec.n - 1; d >= 0; --d) {
                m[d] = static_cast<int>(rem % F.Mx);
                rem /= F.Mx;
            }
            F.c[F.index(k, m)] = f.at(k, spec.spatial_index(m));
        }
    }
    run_fft(F.c, F.Mt, F.Mx, spec.n, FFTW_FORWARD);
    double norm = 1.0 / static_cast<double>(F.c.size());
    for (auto& z : F.c) z *= norm;
    return F;
}

InverseResult inverse_transform(const SpectralField& F) {
    const GridSpec& spec = F.spec;
    std::vector<std::complex<double>> data = F.c;
    run_fft(data, F.Mt, F.Mx, spec.n, FFTW_BACKWARD);

    InverseResult out{zeros(spec), 0.0};
    const std::size_t rsx = F.reduced_spatial_size();
    std::vector<int> m(spec.n);
    for (int j = 0; j < spec.N_t; ++j) {
        int jp = j % F.Mt;  // periodic closure of the duplicated node
        for (std::size_t mm = 0; mm < spec.spatial_size(); ++mm) {
            spec.spatial_coords(mm, m);
            std::vector<int> mp(m);
            for (int d = 0; d < spec.n; ++d) mp[d] %= F.Mx;
            std::size_t ridx = jp;
            for (int d = 0; d < spec.n; ++d) ridx = ridx * F.Mx + mp[d];
            (void)rsx;
            std::complex<double> z = data[ridx];
            out.values.at(j, mm) = z.real();
            out.max_imag = std::max(out.max_imag, std::abs(z.imag()));
        }
    }
    return out;
}

std::complex<double> symbol_value(const Symbol& sigma, double rho, std::span<const double> xi) {
    double xi2 = 0.0;
    for (double v : xi) xi2 += v * v;
    std::complex<double> lam(xi2, rho);  // i rho + |xi|^2
    bool zero_mode = (rho == 0.0 && xi2 == 0.0);
    switch (sigma.kind) {
        case SymbolKind::heat_inverse:
            if (zero_mode) throw std::invalid_argument("symbol_value: heat_inverse at zero mode");
            return 1.0 / lam;
        case SymbolKind::riesz_ij:
            if (zero_mode) return 0.0;
            return xi[sigma.i] * xi[sigma.j] / lam;
        case SymbolKind::riesz_t:
            if (zero_mode) return 0.0;
            return std::complex<double>(0.0, rho) / lam;
        case SymbolKind::frac_power:
            if (zero_mode) return 0.0;
            return std::pow(lam, sigma.s);
        case SymbolKind::poisson:
            if (zero_mode) return 1.0;  // unit subordination mass
            return fractional::scalar_subordination(lam, sigma.s, sigma.y);
    }
    return {};
}

ApplyResult apply_symbol(const SpectralField& F, const Symbol& sigma) {
    ApplyResult out{F, 0.0};
    SpectralField& G = out.field;
    const std::size_t rsx = F.reduced_spatial_size();
    std::vector<int> m(F.spec.n);
    std::vector<double> xi(F.spec.n);
    for (int k = 0; k < F.Mt; ++k) {
        double rho = F.rho(k);
        for (std::size_t mm = 0; mm < rsx; ++mm) {
            std::size_t rem = mm;
            for (int d = F.spec.n - 1; d >= 0; --d) {
                m[d] = static_cast<int>(rem % F.Mx);
                rem /= F.Mx;
            }
            for (int d = 0; d < F.spec.n; ++d) xi[d] = F.xi(m[d]);
            double xi2 = 0.0;
            for (double v : xi) xi2 += v * v;
            std::size_t idx = F.index(k, m);
            if (rho == 0.0 && xi2 == 0.0 && sigma.kind == SymbolKind::heat_inverse) {
                switch (sigma.zero_mode) {
                    case ZeroModePolicy::subtract_mean:
                        out.subtracted_mean = F.c[idx].real();
                        G.c[idx] = 0.0;
                        break;
                    case ZeroModePolicy::reject:
                        if (std::abs(F.c[idx]) > 1e-13)
                            throw std::invalid_argument(
                                "apply_symbol: heat_inverse on a field with nonzero mean "
                                "(policy=reject)");
                        G.c[idx] = 0.0;
                        break;
                    case ZeroModePolicy::zero_fill:
                        G.c[idx] = 0.0;
                        break;
                }
                continue;
            }
            G.c[idx] = F.c[idx] * symbol_value(sigma, rho, xi);
        }
    }
    return out;
}

GridFunction derivative_oracle(const GridFunction& f, bool time_kind, int i, int j) {
    SpectralField F = transform(f);
    Symbol sigma;
    sigma.kind = time_kind ? SymbolKind::riesz_t : SymbolKind::riesz_ij;
    sigma.i = i;
    sigma.j = j;
    ApplyResult G = apply_symbol(F, sigma);
    if (!time_kind) {
        // d_ij (d_t - Delta)^{-1} carries the opposite sign of the
        // normalized ij symbol
        for (auto& z : G.field.c) z = -z;
    }
    return inverse_transform(G.field).values;
}

SolveOracle heat_inverse_oracle(const GridFunction& f, ZeroModePolicy policy) {
    SpectralField F = transform(f);
    Symbol sigma;
    sigma.kind = SymbolKind::heat_inverse;
    sigma.zero_mode = policy;
    ApplyResult G = apply_symbol(F, sigma);
    return {inverse_transform(G.field).values, G.subtracted_mean};
}

GridFunction poisson_oracle(const GridFunction& f, double s, double y) {
    SpectralField F = transform(f);
    Symbol sigma;
    sigma.kind = SymbolKind::poisson;
    sigma.s = s;
    sigma.y = y;
    return inverse_transform(apply_symbol(F, sigma).field).values;
}

GridFunction frac_power_oracle(const GridFunction& f, double s, double c_s) {
    SpectralField F = transform(f);
    Symbol sigma;
    sigma.kind = SymbolKind::frac_power;
    sigma.s = s;
    ApplyResult G = apply_symbol(F, sigma);
    for (auto& z : G.field.c) z *= c_s;
    return inverse_transform(G.field).values;
}

}  // namespace parlab::spectral
