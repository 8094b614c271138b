#include "psalink/gordon_holevo.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace psalink {

namespace {

constexpr double kResidTol = 1e-10;
constexpr int kMaxBisect = 200;
constexpr int kScanPoints = 4000;

// Intermediate quantities of the below-threshold evaluation at a trial
// input squeezing omega_in. The same expressions evaluated at omega_in = 1
// give the coherent-modulation value.
struct BelowQuants {
    double d, e, f;
    double w_out, wbar_out;
    double m_out, mbar_out;
};

// Analytic zeros of the symplectic offsets (e.g. pure loss at omega = 1)
// land a few ulps below zero in floating point; snap those back.
inline double clamp_eps0(double x) {
    return x < 0.0 && x > -1e-9 ? 0.0 : x;
}

BelowQuants below_quants(const FiducialParams& fd, double nbar, double win) {
    const double t = std::fabs(fd.tau);
    BelowQuants q;
    q.d = t / (2.0 * win) + fd.y / fd.omega;
    q.e = t * win / 2.0 + fd.y * fd.omega;
    q.f = t * (2.0 * nbar + 1.0 - 1.0 / (2.0 * win)) + fd.y * fd.omega;
    q.w_out = std::sqrt(q.e / q.d);
    q.wbar_out = std::sqrt(q.f / q.d);
    q.m_out = clamp_eps0(-0.5 + std::sqrt(q.d * q.e));
    q.mbar_out = clamp_eps0(-0.5 + std::sqrt(q.d * q.f));
    return q;
}

// Residual of the stationarity condition for omega_in. Trial points where
// the implied modulated state is unphysical (m or mbar nonpositive) return
// NaN and are skipped by the bracket scan.
double below_residual(const FiducialParams& fd, double nbar, double win) {
    const BelowQuants q = below_quants(fd, nbar, win);
    if (!(q.m_out > 0.0) || !(q.mbar_out > 0.0))
        return std::numeric_limits<double>::quiet_NaN();
    const double lhs = g_prime(q.mbar_out) * M_LN2 / q.wbar_out * (1.0 - q.wbar_out * q.wbar_out);
    const double rhs = g_prime(q.m_out) * M_LN2 / q.w_out * (win * win - q.w_out * q.w_out);
    return lhs - rhs;
}

void check_fiducial(const FiducialParams& f) {
    if (!(std::fabs(f.tau) > 0.0))
        throw std::domain_error("fiducial: tau must be nonzero");
    if (!(f.y >= 0.0) || !(f.omega > 0.0))
        throw std::domain_error("fiducial: require y >= 0 and omega > 0");
}

}  // namespace

double g_function(double x) {
    if (!(x >= 0.0))
        throw std::domain_error("g_function: argument must be >= 0");
    if (x == 0.0)
        return 0.0;
    if (x < 1e-12)
        return x * (std::log2(M_E) - std::log2(x));  // series limit, avoids log(0)
    return ((x + 1.0) * std::log1p(x) - x * std::log(x)) * M_LOG2E;
}

double g_prime(double x) {
    if (!(x > 0.0))
        throw std::domain_error("g_prime: argument must be > 0");
    return std::log2((x + 1.0) / x);
}

ChannelMatrices channel_of_link(const LinkPlan& plan) {
    plan.validate();
    double tau_tot = 1.0, g_tot = 1.0;
    for (double t : detail::span_transmittances(plan)) tau_tot *= t;
    for (double g : plan.amp_gains) g_tot *= g;
    const auto [nq, ni] = additive_noise_of_link(plan);
    return ChannelMatrices{std::sqrt(tau_tot * g_tot), std::sqrt(tau_tot / g_tot), nq, ni};
}

FiducialParams compute_fiducial(const ChannelMatrices& ch) {
    if (!(ch.x1 > 0.0) || !(ch.x2 > 0.0))
        throw std::domain_error("compute_fiducial: x factors must be > 0");
    if (!(ch.y_q >= 0.0) || !(ch.y_i >= 0.0))
        throw std::domain_error("compute_fiducial: additive noise must be >= 0");
    const bool zq = ch.y_q == 0.0, zi = ch.y_i == 0.0;
    if (zq != zi)
        throw degenerate_channel_error(
            "compute_fiducial: additive noise vanishes in exactly one quadrature");
    FiducialParams f;
    f.tau = ch.x1 * ch.x2;
    if (zq && zi) {
        f.y = 0.0;
        f.omega = 1.0;  // noiseless channel, asymmetry parameter immaterial
        return f;
    }
    f.y = std::sqrt(ch.y_q * ch.y_i);
    f.omega = (ch.x1 / ch.x2) * std::sqrt(ch.y_i / ch.y_q);
    return f;
}

double threshold_energy(const FiducialParams& f) {
    check_fiducial(f);
    const double t = std::fabs(f.tau);
    const double w = f.omega;
    return (1.0 + (f.y / t) * std::fabs(1.0 - w * w)) / (2.0 * w) - 0.5;
}

GhResult capacity_above_threshold(const FiducialParams& f, double nbar) {
    check_fiducial(f);
    if (!(nbar >= threshold_energy(f)))
        throw std::invalid_argument("capacity_above_threshold: nbar below threshold");
    const double t = std::fabs(f.tau);
    const double w = f.omega;
    GhResult r;
    r.regime = GhRegime::above_threshold;
    r.omega_in = w;
    r.m_out = clamp_eps0(t / 2.0 + f.y - 0.5);
    r.mbar_out = clamp_eps0(t * (nbar + 0.5) + 0.5 * (f.y * (1.0 / w + w) - 1.0));
    r.capacity = g_function(r.mbar_out) - g_function(r.m_out);
    const double asym = f.y * (1.0 / w - w);
    const double den = t * (2.0 * nbar + 1.0) - asym;
    const double num = t * (2.0 * nbar + 1.0) + asym;
    r.wbar_in = (den > 0.0 && num >= 0.0) ? std::sqrt(num / den)
                                          : std::numeric_limits<double>::quiet_NaN();
    return r;
}

GhResult capacity_below_threshold(const FiducialParams& f, double nbar) {
    check_fiducial(f);
    if (!(nbar >= 0.0) || !(nbar < threshold_energy(f)))
        throw std::invalid_argument("capacity_below_threshold: nbar not in [0, threshold)");

    // Bracket: omega_in >= 1/(2(2nbar+1)) keeps the modulation parameter
    // real; unphysical trial points inside the scan yield NaN residuals and
    // are skipped. Geometric scan, then bisection.
    const double wmin = 1.0 / (2.0 * (2.0 * nbar + 1.0));
    const double lo = wmin * (1.0 + 1e-12);
    const double hi = 1.0;
    const double llo = std::log(lo), lhi = std::log(hi);

    double a = 0.0, b = 0.0, fa = 0.0, fb = 0.0;
    bool bracketed = false;
    double prev_x = 0.0, prev_r = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < kScanPoints; ++i) {
        const double x = std::exp(llo + (lhi - llo) * i / (kScanPoints - 1));
        const double rv = below_residual(f, nbar, x);
        if (std::isnan(rv)) {
            prev_r = rv;
            continue;
        }
        if (rv == 0.0) {
            a = b = x;
            fa = fb = 0.0;
            bracketed = true;
            break;
        }
        if (!std::isnan(prev_r) && prev_r * rv < 0.0) {
            a = prev_x;
            b = x;
            fa = prev_r;
            fb = rv;
            bracketed = true;
            break;
        }
        prev_x = x;
        prev_r = rv;
    }
    if (!bracketed) {
        std::ostringstream os;
        os << "capacity_below_threshold: no sign change in omega_in bracket ["
           << lo << ", " << hi << "]";
        throw solve_error(os.str(), lo, hi);
    }

    double root = 0.5 * (a + b);
    if (a != b) {
        for (int it = 0; it < kMaxBisect; ++it) {
            root = 0.5 * (a + b);
            const double fm = below_residual(f, nbar, root);
            if (std::isnan(fm) || fm == 0.0 || std::fabs(fm) < kResidTol)
                break;
            if (fa * fm < 0.0) {
                b = root;
                fb = fm;
            } else {
                a = root;
                fa = fm;
            }
            if (b - a < 1e-16 * b)
                break;
        }
        (void)fb;
    }

    const BelowQuants q = below_quants(f, nbar, root);
    GhResult r;
    r.regime = GhRegime::below_threshold;
    r.omega_in = root;
    r.wbar_in = std::sqrt(2.0 * (2.0 * nbar + 1.0) * root - 1.0);
    r.m_out = q.m_out;
    r.mbar_out = q.mbar_out;
    r.capacity = g_function(q.mbar_out) - g_function(q.m_out);
    return r;
}

double capacity_coherent(const FiducialParams& f, double nbar) {
    check_fiducial(f);
    if (!(nbar >= 0.0))
        throw std::invalid_argument("capacity_coherent: nbar must be >= 0");
    const BelowQuants q = below_quants(f, nbar, 1.0);
    return g_function(q.mbar_out) - g_function(q.m_out);
}

GhResult gh_capacity(const ChannelMatrices& ch, double nbar, GhMode mode) {
    if (!(nbar >= 0.0))
        throw std::invalid_argument("gh_capacity: nbar must be >= 0");

    if (ch.y_q == 0.0 && ch.y_i == 0.0) {
        // Noiseless rescaling channel: thermal-entropy bound, no fiducial
        // machinery needed (and omega would be 0/0).
        GhResult r;
        r.capacity = g_function(nbar);
        r.regime = mode == GhMode::coherent ? GhRegime::coherent_forced
                                            : GhRegime::above_threshold;
        r.omega_in = 1.0;
        r.wbar_in = std::sqrt(4.0 * nbar + 1.0);
        r.m_out = 0.0;
        r.mbar_out = nbar;
        return r;
    }

    FiducialParams f = compute_fiducial(ch);
    // Relabeling the quadratures maps omega -> 1/omega and leaves the
    // capacity unchanged; work in the orientation with omega <= 1 so the
    // modulated quadrature is the favourable one.
    if (f.omega > 1.0)
        f.omega = 1.0 / f.omega;

    if (mode == GhMode::coherent) {
        GhResult r;
        r.capacity = capacity_coherent(f, nbar);
        r.regime = GhRegime::coherent_forced;
        r.omega_in = 1.0;
        r.wbar_in = std::sqrt(4.0 * nbar + 1.0);
        const BelowQuants q = below_quants(f, nbar, 1.0);
        r.m_out = q.m_out;
        r.mbar_out = q.mbar_out;
        return r;
    }

    if (nbar == 0.0) {
        GhResult r;
        r.regime = GhRegime::above_threshold;
        r.omega_in = f.omega;
        const BelowQuants q = below_quants(f, 0.0, 1.0);
        r.m_out = q.m_out;
        r.mbar_out = q.m_out;
        r.capacity = 0.0;
        r.wbar_in = 1.0;
        return r;
    }

    const double thr = threshold_energy(f);
    if (nbar >= thr)
        return capacity_above_threshold(f, nbar);
    return capacity_below_threshold(f, nbar);
}

}  // namespace psalink
