#include "fdam/fit.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

#include "fdam/fft.hpp"

namespace fdam {

TargetKind target_kind_from_string(const std::string& name) {
    if (name == "lowpass") return TargetKind::lowpass;
    if (name == "highpass") return TargetKind::highpass;
    if (name == "bandpass") return TargetKind::bandpass;
    if (name == "bandstop") return TargetKind::bandstop;
    if (name == "random") return TargetKind::random;
    throw_invalid("unknown target kind: \"" + name +
                  "\" (expected lowpass/highpass/bandpass/bandstop/random)");
}

std::string to_string(TargetKind kind) {
    switch (kind) {
        case TargetKind::lowpass: return "lowpass";
        case TargetKind::highpass: return "highpass";
        case TargetKind::bandpass: return "bandpass";
        case TargetKind::bandstop: return "bandstop";
        case TargetKind::random: return "random";
    }
    return "?";
}

FitTarget build_target(const TargetSpec& spec, index_t height, index_t width) {
    require(height >= 1 && width >= 1, "build_target: extents must be >= 1");
    const bool banded = spec.kind == TargetKind::bandpass || spec.kind == TargetKind::bandstop;
    if (banded) {
        require(spec.low > 0.0 && spec.low < 1.0 && spec.high > 0.0 && spec.high < 1.0,
                "build_target: band cutoffs must be in (0,1)");
        require(spec.low < spec.high, "build_target: band cutoffs must satisfy low < high");
    } else if (spec.kind != TargetKind::random) {
        require(spec.cutoff > 0.0 && spec.cutoff < 1.0, "build_target: cutoff must be in (0,1)");
    } else {
        require(spec.bands >= 2, "build_target: random kind needs at least 2 shells");
    }

    FitTarget target;
    target.kind = spec.kind;
    target.magnitude = Tensor({height, width});

    std::vector<double> shell_values;
    if (spec.kind == TargetKind::random) {
        Rng rng{spec.seed};
        for (index_t b = 0; b < spec.bands; ++b) shell_values.push_back(rng.uniform01());
    }

    for (index_t i = 0; i < height; ++i) {
        for (index_t j = 0; j < width; ++j) {
            const double rho = chebyshev_radius(i, j, height, width, /*centered=*/true);
            double value = 0.0;
            switch (spec.kind) {
                case TargetKind::lowpass: value = rho < spec.cutoff ? 1.0 : 0.0; break;
                case TargetKind::highpass: value = rho >= spec.cutoff ? 1.0 : 0.0; break;
                case TargetKind::bandpass:
                    value = (rho >= spec.low && rho < spec.high) ? 1.0 : 0.0;
                    break;
                case TargetKind::bandstop:
                    value = (rho >= spec.low && rho < spec.high) ? 0.0 : 1.0;
                    break;
                case TargetKind::random: {
                    index_t b = static_cast<index_t>(rho * static_cast<double>(spec.bands));
                    if (b >= spec.bands) b = spec.bands - 1;
                    value = shell_values[static_cast<std::size_t>(b)];
                    break;
                }
            }
            target.magnitude(i, j) = value;
        }
    }
    return target;
}

index_t FitParams::layer_count() const {
    const index_t n = static_cast<index_t>(values.size());
    return mode == FitMode::attinv ? n / 2 : n;
}

void FitParams::pair(index_t i, double& sbar, double& shat) const {
    if (mode == FitMode::attinv) {
        const index_t layers = layer_count();
        sbar = values[static_cast<std::size_t>(i)];
        shat = values[static_cast<std::size_t>(layers + i)];
    } else {
        sbar = std::exp(values[static_cast<std::size_t>(i)]);
        shat = 0.0;
    }
}

FitParams initial_fit_params(FitMode mode, index_t layers) {
    require(layers >= 1, "initial_fit_params: need at least one layer");
    FitParams p;
    p.mode = mode;
    if (mode == FitMode::attinv) {
        p.values.assign(static_cast<std::size_t>(2 * layers), 0.0);
        for (index_t i = 0; i < layers; ++i) {
            p.values[static_cast<std::size_t>(i)] = 1.0;
            p.values[static_cast<std::size_t>(layers + i)] = 0.1;
        }
    } else {
        p.values.assign(static_cast<std::size_t>(layers), 0.0);  // exp(0) = 1 gains
    }
    return p;
}

namespace {

constexpr double kZeroResponse = 1e-12;

struct Workspace {
    index_t layers = 0;
    index_t h = 0, w = 0;
    Tensor target_natural;  // ifftshift of the centered target
};

Workspace make_workspace(const std::vector<LayerSpectrumPair>& spectra, const FitTarget& target) {
    require(!spectra.empty(), "fit: need at least one layer spectrum");
    Workspace ws;
    ws.layers = static_cast<index_t>(spectra.size());
    const ComplexTensor& first = spectra.front().plain;
    require(first.rank() == 2, "fit: layer spectra must be rank-2");
    ws.h = first.dim(0);
    ws.w = first.dim(1);
    for (const LayerSpectrumPair& pair : spectra) {
        require(pair.plain.same_shape(first) && pair.inverted.same_shape(first),
                "fit: layer spectra shapes disagree");
    }
    require(target.magnitude.rank() == 2 && target.magnitude.dim(0) == ws.h &&
                target.magnitude.dim(1) == ws.w,
            "fit: target shape disagrees with layer spectra");
    ws.target_natural = ifftshift2(target.magnitude);
    return ws;
}

void check_param_count(const FitParams& params, index_t layers) {
    const index_t expected = params.mode == FitMode::attinv ? 2 * layers : layers;
    require(static_cast<index_t>(params.values.size()) == expected,
            "fit: parameter count disagrees with layer count");
}

double loss_impl(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra,
                 const Workspace& ws) {
    const index_t layers = ws.layers, bins = ws.h * ws.w;
    double acc = 0.0;
    for (index_t k = 0; k < bins; ++k) {
        cdouble r{1.0, 0.0};
        for (index_t i = 0; i < layers; ++i) {
            double sbar, shat;
            params.pair(i, sbar, shat);
            const LayerSpectrumPair& sp = spectra[static_cast<std::size_t>(i)];
            r *= sbar * sp.plain[k] + shat * sp.inverted[k];
        }
        const double d = std::abs(r) - ws.target_natural[k];
        acc += d * d;
    }
    return acc / static_cast<double>(bins);
}

std::vector<double> grad_impl(const FitParams& params,
                              const std::vector<LayerSpectrumPair>& spectra, const Workspace& ws) {
    const index_t layers = ws.layers, bins = ws.h * ws.w;
    std::vector<double> grad(params.values.size(), 0.0);
    std::vector<cdouble> factor(static_cast<std::size_t>(layers));
    std::vector<cdouble> prefix(static_cast<std::size_t>(layers) + 1);
    std::vector<cdouble> suffix(static_cast<std::size_t>(layers) + 1);

    for (index_t k = 0; k < bins; ++k) {
        for (index_t i = 0; i < layers; ++i) {
            double sbar, shat;
            params.pair(i, sbar, shat);
            const LayerSpectrumPair& sp = spectra[static_cast<std::size_t>(i)];
            factor[static_cast<std::size_t>(i)] = sbar * sp.plain[k] + shat * sp.inverted[k];
        }
        prefix[0] = cdouble{1.0, 0.0};
        for (index_t i = 0; i < layers; ++i)
            prefix[static_cast<std::size_t>(i) + 1] =
                prefix[static_cast<std::size_t>(i)] * factor[static_cast<std::size_t>(i)];
        suffix[static_cast<std::size_t>(layers)] = cdouble{1.0, 0.0};
        for (index_t i = layers - 1; i >= 0; --i)
            suffix[static_cast<std::size_t>(i)] =
                factor[static_cast<std::size_t>(i)] * suffix[static_cast<std::size_t>(i) + 1];

        const cdouble r = prefix[static_cast<std::size_t>(layers)];
        const double mag = std::abs(r);
        if (mag < kZeroResponse) continue;  // subgradient 0 at the |.| kink
        const double coef =
            2.0 * (mag - ws.target_natural[k]) / (mag * static_cast<double>(bins));

        for (index_t i = 0; i < layers; ++i) {
            const cdouble others =
                prefix[static_cast<std::size_t>(i)] * suffix[static_cast<std::size_t>(i) + 1];
            const LayerSpectrumPair& sp = spectra[static_cast<std::size_t>(i)];
            // d|R|/dtheta = Re(conj(R) * dR/dtheta) / |R|
            const double d_sbar = std::real(std::conj(r) * (sp.plain[k] * others));
            if (params.mode == FitMode::attinv) {
                const double d_shat = std::real(std::conj(r) * (sp.inverted[k] * others));
                grad[static_cast<std::size_t>(i)] += coef * d_sbar;
                grad[static_cast<std::size_t>(layers + i)] += coef * d_shat;
            } else {
                // chain through sbar = exp(g)
                grad[static_cast<std::size_t>(i)] +=
                    coef * d_sbar * std::exp(params.values[static_cast<std::size_t>(i)]);
            }
        }
    }
    return grad;
}

}  // namespace

double fit_loss(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra,
                const FitTarget& target) {
    const Workspace ws = make_workspace(spectra, target);
    check_param_count(params, ws.layers);
    return loss_impl(params, spectra, ws);
}

std::vector<double> fit_grad(const FitParams& params,
                             const std::vector<LayerSpectrumPair>& spectra,
                             const FitTarget& target) {
    const Workspace ws = make_workspace(spectra, target);
    check_param_count(params, ws.layers);
    return grad_impl(params, spectra, ws);
}

double check_fit_gradient(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra,
                          const FitTarget& target, double h) {
    const Workspace ws = make_workspace(spectra, target);
    check_param_count(params, ws.layers);
    const std::vector<double> analytic = grad_impl(params, spectra, ws);
    double worst = 0.0;
    FitParams probe = params;
    for (std::size_t i = 0; i < params.values.size(); ++i) {
        probe.values[i] = params.values[i] + h;
        const double up = loss_impl(probe, spectra, ws);
        probe.values[i] = params.values[i] - h;
        const double down = loss_impl(probe, spectra, ws);
        probe.values[i] = params.values[i];
        const double numeric = (up - down) / (2.0 * h);
        const double err = std::abs(analytic[i] - numeric);
        const double rel =
            std::abs(analytic[i]) < 1e-8 ? err / 1e-8 : err / std::abs(analytic[i]);
        if (rel > worst) worst = rel;
    }
    return worst;
}

Tensor composed_magnitude(const FitParams& params, const std::vector<LayerSpectrumPair>& spectra) {
    require(!spectra.empty(), "composed_magnitude: need at least one layer spectrum");
    const index_t layers = static_cast<index_t>(spectra.size());
    check_param_count(params, layers);
    const index_t h = spectra.front().plain.dim(0), w = spectra.front().plain.dim(1);
    Tensor natural({h, w});
    for (index_t k = 0; k < h * w; ++k) {
        cdouble r{1.0, 0.0};
        for (index_t i = 0; i < layers; ++i) {
            double sbar, shat;
            params.pair(i, sbar, shat);
            const LayerSpectrumPair& sp = spectra[static_cast<std::size_t>(i)];
            r *= sbar * sp.plain[k] + shat * sp.inverted[k];
        }
        natural[k] = std::abs(r);
    }
    return fftshift2(natural);
}

FitReport fit(FitMode mode, const std::vector<LayerSpectrumPair>& spectra,
              const FitTarget& target, const FitSettings& settings) {
    const auto t0 = std::chrono::steady_clock::now();
    const Workspace ws = make_workspace(spectra, target);

    FitReport report;
    report.mode = mode;
    report.params = initial_fit_params(mode, ws.layers);

    constexpr double kArmijo = 1e-4;
    constexpr double kMinStep = 1e-18;

    double loss = loss_impl(report.params, spectra, ws);
    if (!std::isfinite(loss)) throw std::runtime_error("fit: non-finite loss at init");
    report.loss_trace.push_back(loss);

    for (index_t iter = 0; iter < settings.max_iterations; ++iter) {
        const std::vector<double> grad = grad_impl(report.params, spectra, ws);
        double gnorm2 = 0.0;
        for (double g : grad) gnorm2 += g * g;
        if (std::sqrt(gnorm2) < settings.grad_tolerance) {
            report.converged = true;
            break;
        }

        double step = settings.initial_step;
        FitParams probe = report.params;
        double probe_loss = 0.0;
        bool accepted = false;
        while (step >= kMinStep) {
            for (std::size_t i = 0; i < probe.values.size(); ++i)
                probe.values[i] = report.params.values[i] - step * grad[i];
            probe_loss = loss_impl(probe, spectra, ws);
            if (!std::isfinite(probe_loss)) throw std::runtime_error("fit: non-finite loss");
            if (probe_loss <= loss - kArmijo * step * gnorm2) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        // Stop when no step descends, or the accepted step makes no
        // representable progress (the Armijo margin rounded to zero).
        if (!accepted || probe_loss >= loss) break;

        report.params = probe;
        loss = probe_loss;
        report.loss_trace.push_back(loss);
        report.iterations = iter + 1;
    }

    report.final_loss = loss;
    report.wall_clock_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace fdam
