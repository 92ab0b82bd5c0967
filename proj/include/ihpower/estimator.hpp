#pragma once

// Multi-component frequency/amplitude/phase estimation from a single DFT
// window. Each spectral cluster of 2q bins is modeled as a superposition of q
// rational single-tone terms alpha/(beta - k); the unknown poles and residues
// are obtained from one 2q x 2q linear solve followed by a q x q companion
// eigenproblem, so no iterative search is involved. Near-real poles are then
// projected onto the real axis and their residues refit against the window
// data before the candidate sieve.
//
// To keep the Vandermonde-style powers well scaled, the cluster system is
// assembled in bin coordinates shifted by k_shift (normally the peak bin);
// poles come out in the shifted frame and are translated back afterwards.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <complex>
#include <optional>
#include <vector>

#include "ihpower/spectrum.hpp"

namespace ihpower {

struct EstimatorConfig {
    int q = 5;                     // tones modeled per cluster
    double mu = 0.01;              // sieve threshold factor against a_ref
    double a_ref = 0.0;            // <= 0: use the largest recovered amplitude
    double peak_threshold = 0.01;  // find_peaks relative magnitude floor
    double dedup_tol_hz = 0.0;     // <= 0: delta_f / 4
    double pole_eps = 1e-9;        // bins; bin-centered degeneracy guard
    double max_im_beta = 0.5;      // bins; poles within this of the real axis are tones
    double min_beta_sep = 0.15;    // bins; realified poles closer than this merge
    double onbin_neighbor_ratio = 1e-6;
};

struct LinearSystem {
    Eigen::MatrixXcd a;     // 2q x 2q
    Eigen::VectorXcd rhs;   // 2q
    double k_shift = 0.0;
};

// Builds the cluster equations. Row r, with kappa = k_r - k_shift and
// S = spectrum at bin k_r, states
//   sum_m eta_m * (-(-kappa)^(m-1)) + sum_m eta_{q+m} * S*(-kappa)^(m-1)
//     = -(-kappa)^q * S,
// whose solution stacks the q numerator coefficients (residue data) on top of
// the q elementary-symmetric coefficients of the poles.
inline LinearSystem assemble_system(const Spectrum& spectrum, const PeakCluster& cluster,
                                    int q, double k_shift) {
    if (q < 1) throw std::invalid_argument("assemble_system: q must be >= 1");
    if (static_cast<int>(cluster.k_indices.size()) != 2 * q)
        throw std::invalid_argument("assemble_system: cluster window must hold exactly 2q bins");

    const int rows = 2 * q;
    LinearSystem sys;
    sys.k_shift = k_shift;
    sys.a.resize(rows, rows);
    sys.rhs.resize(rows);
    for (int r = 0; r < rows; ++r) {
        const int k = cluster.k_indices[static_cast<std::size_t>(r)];
        if (k < 0 || k >= static_cast<int>(spectrum.size()))
            throw std::out_of_range("assemble_system: cluster bin outside the spectrum");
        const cdouble s = spectrum.bins[static_cast<std::size_t>(k)];
        const double kappa = static_cast<double>(k) - k_shift;
        double p = 1.0;   // (-kappa)^m
        for (int m = 0; m < q; ++m) {
            sys.a(r, m) = cdouble{-p, 0.0};
            sys.a(r, q + m) = s * p;
            p *= -kappa;
        }
        sys.rhs(r) = -p * s;
    }
    return sys;
}

inline LinearSystem assemble_system(const Spectrum& spectrum, const PeakCluster& cluster, int q) {
    return assemble_system(spectrum, cluster, q, static_cast<double>(cluster.k_peak));
}

// Rank-revealing minimum-norm solve. A window holding fewer than q genuine
// tones leaves the system consistent but rank-deficient (surplus poles factor
// freely), so a plain LU is meaningless there; the minimum-norm solution
// still interpolates the window exactly, and the surplus poles it picks carry
// vanishing residues, which the downstream gates discard. The numerator
// variables are rescaled by the window's data magnitude before the solve so
// the tie-break among rank-deficient solutions is scale-invariant. Throws
// std::domain_error for a window with no signal content at all. rcond_out,
// when given, receives min/max |R diagonal| of the balanced system.
inline Eigen::VectorXcd solve_eta(const LinearSystem& sys, double* rcond_out = nullptr) {
    if (sys.a.rows() != sys.a.cols() || sys.a.rows() != sys.rhs.size() || sys.a.rows() % 2 != 0)
        throw std::invalid_argument("solve_eta: malformed system");
    const Eigen::Index q = sys.a.rows() / 2;
    const double scale =
        std::max(sys.a.rightCols(q).cwiseAbs().maxCoeff(), sys.rhs.cwiseAbs().maxCoeff());
    if (rcond_out) *rcond_out = 0.0;
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw std::domain_error("solve_eta: cluster window carries no signal");

    Eigen::MatrixXcd a = sys.a;
    a.leftCols(q) *= scale;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(a);
    if (rcond_out) {
        const auto diag = cod.matrixQTZ().diagonal();
        double dmin = 1e300, dmax = 0.0;
        for (Eigen::Index i = 0; i < diag.size(); ++i) {
            dmin = std::min(dmin, std::abs(diag(i)));
            dmax = std::max(dmax, std::abs(diag(i)));
        }
        *rcond_out = dmax > 0.0 ? dmin / dmax : 0.0;
    }
    Eigen::VectorXcd eta = cod.solve(sys.rhs);
    eta.head(q) *= scale;
    return eta;
}

// The poles solve the monic polynomial whose coefficient of x^j is
// (-1)^(q-j) * eta_{q+1+j}; they are read off as eigenvalues of its companion
// matrix (ones on the superdiagonal, coefficients across the bottom row).
// Returned in the same (shifted) frame as the system, sorted by real part.
inline std::vector<cdouble> roots_from_eta(const Eigen::VectorXcd& eta, int q) {
    if (q < 1 || eta.size() != 2 * q)
        throw std::invalid_argument("roots_from_eta: eta must hold 2q entries");
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(q, q);
    for (int i = 0; i + 1 < q; ++i) companion(i, i + 1) = cdouble{1.0, 0.0};
    for (int j = 0; j < q; ++j) {
        const double sign = ((q - j) % 2 == 0) ? 1.0 : -1.0;
        companion(q - 1, j) = -sign * eta(q + j);
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("roots_from_eta: eigenvalue iteration failed");
    std::vector<cdouble> roots(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) roots[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    std::sort(roots.begin(), roots.end(), [](const cdouble& x, const cdouble& y) {
        return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
    });
    return roots;
}

// Recovers the residues: the numerator coefficients eta_1..q equal Lambda *
// alpha where Lambda(i, p) is the (q-1-i)-th elementary symmetric function of
// the poles excluding pole p. Solved in the minimum-norm least-squares sense
// so nearly coincident poles degrade gracefully instead of blowing up.
inline std::vector<cdouble> alphas_from_eta(const Eigen::VectorXcd& eta,
                                            const std::vector<cdouble>& betas) {
    const int q = static_cast<int>(betas.size());
    if (q < 1 || eta.size() != 2 * q)
        throw std::invalid_argument("alphas_from_eta: eta/beta size mismatch");

    Eigen::MatrixXcd lambda(q, q);
    for (int p = 0; p < q; ++p) {
        // Expand prod_{y != p} (beta_y + u); the u^i coefficient is e_{q-1-i}.
        std::vector<cdouble> coef{cdouble{1.0, 0.0}};
        for (int y = 0; y < q; ++y) {
            if (y == p) continue;
            std::vector<cdouble> next(coef.size() + 1, cdouble{0.0, 0.0});
            for (std::size_t i = 0; i < coef.size(); ++i) {
                next[i + 1] += coef[i];
                next[i] += betas[static_cast<std::size_t>(y)] * coef[i];
            }
            coef = std::move(next);
        }
        for (int i = 0; i < q; ++i) lambda(i, p) = coef[static_cast<std::size_t>(i)];
    }
    const Eigen::VectorXcd d = eta.head(q);
    const Eigen::VectorXcd alpha = lambda.completeOrthogonalDecomposition().solve(d);
    std::vector<cdouble> out(static_cast<std::size_t>(q));
    for (int i = 0; i < q; ++i) out[static_cast<std::size_t>(i)] = alpha(i);
    return out;
}

// Converts one (alpha, beta) pair to sine-convention parameters. A pole within
// pole_eps of an integer bin is the exactly-coherent case: the rational model
// degenerates there and the envelope must be supplied from the bin readout.
inline RecoveredComponent recover_params(cdouble alpha, double beta, double delta_f,
                                         double pole_eps = 1e-9,
                                         std::optional<cdouble> onbin_envelope = {}) {
    if (!(delta_f > 0.0)) throw std::invalid_argument("recover_params: delta_f must be positive");
    const double snapped = std::round(beta);
    if (std::abs(beta - snapped) <= pole_eps) {
        if (!onbin_envelope)
            throw std::domain_error("recover_params: bin-centered pole needs the bin envelope");
        return sine_from_envelope(*onbin_envelope, snapped * delta_f);
    }
    return sine_from_envelope(envelope_from_alpha(alpha, beta, pole_eps), beta * delta_f);
}

enum class SieveOutcome { pass, below_threshold, not_unimodal };

// Amplitude-and-shape test on one candidate's reconstructed window magnitudes:
// the maximum must exceed mu * a_ref and must sit strictly inside the window
// with magnitudes non-increasing away from it (ties allowed). Leakage from a
// genuine in-window tone has exactly this profile; misfit artifacts almost
// never do.
inline SieveOutcome sieve_check(const std::vector<double>& magnitudes, double mu, double a_ref) {
    if (magnitudes.size() < 3) return SieveOutcome::not_unimodal;
    std::size_t r_max = 0;
    for (std::size_t r = 1; r < magnitudes.size(); ++r)
        if (magnitudes[r] > magnitudes[r_max]) r_max = r;
    if (!(magnitudes[r_max] > mu * a_ref)) return SieveOutcome::below_threshold;
    if (r_max == 0 || r_max + 1 == magnitudes.size()) return SieveOutcome::not_unimodal;
    for (std::size_t r = 0; r < r_max; ++r)
        if (magnitudes[r] > magnitudes[r + 1]) return SieveOutcome::not_unimodal;
    for (std::size_t r = r_max; r + 1 < magnitudes.size(); ++r)
        if (magnitudes[r] < magnitudes[r + 1]) return SieveOutcome::not_unimodal;
    return SieveOutcome::pass;
}

enum class RejectReason {
    none,
    complex_pole,      // |Im beta| over the plausibility gate
    out_of_band,       // real pole outside this cluster's window interior
    below_threshold,   // sieve magnitude test
    not_unimodal,      // sieve shape test
    duplicate          // same component surfaced from another cluster
};

inline const char* to_string(RejectReason r) {
    switch (r) {
        case RejectReason::none: return "none";
        case RejectReason::complex_pole: return "complex_pole";
        case RejectReason::out_of_band: return "out_of_band";
        case RejectReason::below_threshold: return "below_threshold";
        case RejectReason::not_unimodal: return "not_unimodal";
        case RejectReason::duplicate: return "duplicate";
    }
    return "unknown";
}

struct CandidateComponent {
    cdouble beta{0.0, 0.0};
    cdouble alpha{0.0, 0.0};
    std::vector<cdouble> bin_values;   // model reconstruction on the window bins
    int k_peak = 0;
    bool onbin = false;
    bool plausible = false;            // passed the pole gates; params populated
    bool accepted = false;
    RejectReason reject = RejectReason::none;
    RecoveredComponent params;
};

// Filters a candidate list by the sieve alone (gating flags untouched).
inline std::vector<CandidateComponent> sieve(const std::vector<CandidateComponent>& candidates,
                                             double mu, double a_ref) {
    std::vector<CandidateComponent> kept;
    for (const auto& c : candidates) {
        std::vector<double> mags(c.bin_values.size());
        std::transform(c.bin_values.begin(), c.bin_values.end(), mags.begin(),
                       [](const cdouble& v) { return std::abs(v); });
        if (sieve_check(mags, mu, a_ref) == SieveOutcome::pass) kept.push_back(c);
    }
    return kept;
}

enum class ClusterStatus { solved, onbin_readout, skipped_ill_conditioned };

inline const char* to_string(ClusterStatus s) {
    switch (s) {
        case ClusterStatus::solved: return "solved";
        case ClusterStatus::onbin_readout: return "onbin_readout";
        case ClusterStatus::skipped_ill_conditioned: return "skipped_ill_conditioned";
    }
    return "unknown";
}

struct ClusterReport {
    PeakCluster cluster;
    ClusterStatus status = ClusterStatus::solved;
    double rcond = 0.0;
};

struct EstimationResult {
    std::vector<RecoveredComponent> components;    // accepted, ascending frequency
    std::vector<CandidateComponent> candidates;    // every pole, flags included
    std::vector<ClusterReport> clusters;
    double mu = 0.0;
    double a_ref = 0.0;
};

namespace detail {

inline void validate(const EstimatorConfig& cfg) {
    if (cfg.q < 1) throw std::invalid_argument("estimator config: q must be >= 1");
    if (!(cfg.mu > 0.0)) throw std::invalid_argument("estimator config: mu must be positive");
    if (!(cfg.pole_eps > 0.0) || !(cfg.max_im_beta > 0.0) || !(cfg.min_beta_sep >= 0.0))
        throw std::invalid_argument("estimator config: non-positive tolerance");
    if (!(cfg.onbin_neighbor_ratio >= 0.0))
        throw std::invalid_argument("estimator config: negative on-bin neighbor ratio");
}

}  // namespace detail

// Full pipeline: transform, cluster, solve each cluster, gate poles, recover
// parameters, sieve against the record-wide reference amplitude, deduplicate
// across clusters. Deterministic for a given record and config; per-cluster
// numerical failures are reported in the result, never thrown.
inline EstimationResult estimate_components(const SampledSignal& signal,
                                            const EstimatorConfig& cfg = {}) {
    detail::validate(cfg);
    EstimationResult res;
    res.mu = cfg.mu;

    const Spectrum spectrum = dft(signal);
    const double dedup_tol =
        cfg.dedup_tol_hz > 0.0 ? cfg.dedup_tol_hz : spectrum.delta_f / 4.0;

    const auto clusters = find_peaks(spectrum, cfg.peak_threshold, cfg.q);
    for (const auto& cluster : clusters) {
        ClusterReport rep{cluster, ClusterStatus::solved, 0.0};
        const auto kp = static_cast<std::size_t>(cluster.k_peak);
        const double peak_mag = spectrum.magnitude(kp);
        const double neighbors = spectrum.magnitude(kp - 1) + spectrum.magnitude(kp + 1);

        if (neighbors < cfg.onbin_neighbor_ratio * peak_mag) {
            // Exactly coherent isolated tone: no leakage, cluster system
            // singular, envelope sits verbatim in the peak bin. Its modeled
            // window contribution is that bin alone, so the fp noise in the
            // other bins never reaches the sieve.
            CandidateComponent cand;
            cand.beta = cdouble{static_cast<double>(cluster.k_peak), 0.0};
            cand.k_peak = cluster.k_peak;
            cand.onbin = true;
            cand.plausible = true;
            cand.bin_values.reserve(cluster.k_indices.size());
            for (int k : cluster.k_indices)
                cand.bin_values.push_back(k == cluster.k_peak ? spectrum.bins[kp]
                                                              : cdouble{0.0, 0.0});
            cand.params = recover_params(cand.alpha, static_cast<double>(cluster.k_peak),
                                         spectrum.delta_f, cfg.pole_eps, spectrum.bins[kp]);
            res.candidates.push_back(std::move(cand));
            rep.status = ClusterStatus::onbin_readout;
            res.clusters.push_back(std::move(rep));
            continue;
        }

        const LinearSystem sys = assemble_system(spectrum, cluster, cfg.q);
        Eigen::VectorXcd eta;
        try {
            eta = solve_eta(sys, &rep.rcond);
        } catch (const std::domain_error&) {
            rep.status = ClusterStatus::skipped_ill_conditioned;
            res.clusters.push_back(std::move(rep));
            continue;
        }

        auto betas = roots_from_eta(eta, cfg.q);
        const auto joint = alphas_from_eta(eta, betas);
        for (auto& b : betas) b += sys.k_shift;

        // Noise perturbs nearly coincident real poles into conjugate-ish
        // pairs with modest imaginary parts, but their real parts still
        // localize the tones. Poles near the real axis and interior to this
        // cluster's window are realified into tone candidates; the rest stay
        // as absorbers soaking up images, linearization error, and noise.
        // (An exterior pole cannot pass the sieve's interior-peak test, but
        // realifying it would corrupt the reference amplitude: near-integer
        // exterior poles blow up the sine-parameter conversion.) Realified
        // poles inside the separation floor cannot be told apart at this
        // window length and collapse into their energy-weighted centroid.
        struct ToneGroup {
            double wsum = 0.0;   // |residue| mass
            double wbeta = 0.0;  // |residue|-weighted beta
            double bsum = 0.0;   // plain sums as the zero-mass fallback
            int n = 0;
            double last = 0.0;   // rightmost member, the chaining anchor
        };
        std::vector<double> tone_poles;
        std::vector<std::size_t> junk;
        {
            const double lo = static_cast<double>(cluster.k_indices.front()) + 0.5;
            const double hi = static_cast<double>(cluster.k_indices.back()) - 0.5;
            std::vector<std::pair<double, double>> tones;  // (beta, |residue|)
            for (std::size_t i = 0; i < betas.size(); ++i) {
                if (std::abs(betas[i].imag()) <= cfg.max_im_beta && betas[i].real() > lo &&
                    betas[i].real() < hi)
                    tones.emplace_back(betas[i].real(), std::abs(joint[i]));
                else
                    junk.push_back(i);
            }
            std::sort(tones.begin(), tones.end());
            ToneGroup g;
            auto flush = [&]() {
                if (g.n > 0)
                    tone_poles.push_back(g.wsum > 0.0 ? g.wbeta / g.wsum : g.bsum / g.n);
            };
            for (const auto& [b, w] : tones) {
                if (g.n > 0 && b - g.last >= cfg.min_beta_sep) {
                    flush();
                    g = ToneGroup{};
                }
                g.wsum += w;
                g.wbeta += w * b;
                g.bsum += b;
                g.n += 1;
                g.last = b;
            }
            flush();
        }

        // Residues refit against the window data with tone and absorber
        // poles as a joint rational basis, column-equilibrated least
        // squares. Energy explained by the absorbers stays out of the
        // reported tones, and a realified pole keeps a physical residue
        // instead of inheriting the complex root's distorted one.
        const auto n_bins = static_cast<Eigen::Index>(cluster.k_indices.size());
        const auto n_tones = static_cast<Eigen::Index>(tone_poles.size());
        const auto n_cols = n_tones + static_cast<Eigen::Index>(junk.size());
        Eigen::MatrixXcd basis(n_bins, n_cols);
        Eigen::VectorXcd data(n_bins);
        for (Eigen::Index r = 0; r < n_bins; ++r)
            data(r) = spectrum.bins[static_cast<std::size_t>(
                cluster.k_indices[static_cast<std::size_t>(r)])];
        auto pole_of = [&](Eigen::Index j) {
            return j < n_tones ? cdouble{tone_poles[static_cast<std::size_t>(j)], 0.0}
                               : betas[junk[static_cast<std::size_t>(j - n_tones)]];
        };
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            const cdouble b = pole_of(j);
            for (Eigen::Index r = 0; r < n_bins; ++r) {
                cdouble denom = b - static_cast<double>(
                                        cluster.k_indices[static_cast<std::size_t>(r)]);
                if (std::abs(denom) < cfg.pole_eps) denom = cdouble{cfg.pole_eps, 0.0};
                basis(r, j) = 1.0 / denom;
            }
        }
        Eigen::VectorXd colnorm = Eigen::VectorXd::Ones(n_cols);
        for (Eigen::Index j = 0; j < n_cols; ++j) {
            const double n = basis.col(j).norm();
            if (n > 0.0) {
                basis.col(j) /= n;
                colnorm(j) = n;
            }
        }
        const Eigen::VectorXcd fitted =
            basis.completeOrthogonalDecomposition().solve(data);

        for (Eigen::Index j = 0; j < n_cols; ++j) {
            CandidateComponent cand;
            cand.beta = pole_of(j);
            cand.alpha = fitted(j) / colnorm(j);
            cand.k_peak = cluster.k_peak;
            cand.bin_values.reserve(cluster.k_indices.size());
            for (int k : cluster.k_indices) {
                cdouble denom = cand.beta - static_cast<double>(k);
                if (std::abs(denom) < cfg.pole_eps) denom = cdouble{cfg.pole_eps, 0.0};
                cand.bin_values.push_back(cand.alpha / denom);
            }
            if (j >= n_tones) {
                cand.reject = std::abs(cand.beta.imag()) > cfg.max_im_beta
                                  ? RejectReason::complex_pole
                                  : RejectReason::out_of_band;
            } else {
                cand.plausible = true;
                const double br = cand.beta.real();
                std::optional<cdouble> onbin;
                if (std::abs(br - std::round(br)) <= cfg.pole_eps) {
                    const auto kb = static_cast<std::size_t>(std::llround(br));
                    if (kb < spectrum.size()) onbin = spectrum.bins[kb];
                }
                cand.params = recover_params(cand.alpha, br, spectrum.delta_f, cfg.pole_eps, onbin);
            }
            res.candidates.push_back(std::move(cand));
        }
        res.clusters.push_back(std::move(rep));
    }

    double a_ref = cfg.a_ref;
    if (a_ref <= 0.0)
        for (const auto& c : res.candidates)
            if (c.plausible) a_ref = std::max(a_ref, c.params.amp);
    res.a_ref = a_ref;

    for (auto& cand : res.candidates) {
        if (!cand.plausible) continue;
        std::vector<double> mags(cand.bin_values.size());
        std::transform(cand.bin_values.begin(), cand.bin_values.end(), mags.begin(),
                       [](const cdouble& v) { return std::abs(v); });
        switch (sieve_check(mags, cfg.mu, a_ref)) {
            case SieveOutcome::pass: cand.accepted = true; break;
            case SieveOutcome::below_threshold: cand.reject = RejectReason::below_threshold; break;
            case SieveOutcome::not_unimodal: cand.reject = RejectReason::not_unimodal; break;
        }
    }

    // The same physical tone can surface from two windows; keep the stronger
    // reconstruction. Candidates from one window are distinct by the
    // separation floor and are never merged.
    std::vector<CandidateComponent*> accepted;
    for (auto& c : res.candidates)
        if (c.accepted) accepted.push_back(&c);
    std::sort(accepted.begin(), accepted.end(), [](const auto* x, const auto* y) {
        return x->params.freq_hz < y->params.freq_hz;
    });
    auto peak_recon = [](const CandidateComponent& c) {
        double m = 0.0;
        for (const auto& v : c.bin_values) m = std::max(m, std::abs(v));
        return m;
    };
    for (std::size_t i = 0; i + 1 < accepted.size();) {
        auto* cur = accepted[i];
        auto* nxt = accepted[i + 1];
        if (cur->k_peak != nxt->k_peak &&
            std::abs(cur->params.freq_hz - nxt->params.freq_hz) < dedup_tol) {
            auto* loser = peak_recon(*cur) >= peak_recon(*nxt) ? nxt : cur;
            loser->accepted = false;
            loser->reject = RejectReason::duplicate;
            accepted.erase(accepted.begin() + static_cast<std::ptrdiff_t>(
                                                  loser == nxt ? i + 1 : i));
        } else {
            ++i;
        }
    }

    for (const auto* c : accepted) res.components.push_back(c->params);
    std::sort(res.components.begin(), res.components.end(),
              [](const RecoveredComponent& x, const RecoveredComponent& y) {
                  return x.freq_hz < y.freq_hz;
              });
    return res;
}

inline EstimationResult estimate_components(const SignalSpec& spec,
                                            const EstimatorConfig& cfg = {}) {
    return estimate_components(synthesize(spec), cfg);
}

}  // namespace ihpower
