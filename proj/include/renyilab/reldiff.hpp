#pragma once

#include <vector>

#include "renyilab/channels.hpp"
#include "renyilab/entropy.hpp"

namespace renyi {

// Positive-definite pair plus a strict CPTP map: the data of a relative
// entropy difference D(rho||sigma) - D(N(rho)||N(sigma)).
struct RelDiffInstance {
    DensityOperator rho;
    DensityOperator sigma;
    QuantumChannel channel;
    Mat n_rho;   // cached N(rho)
    Mat n_sigma; // cached N(sigma)

    RelDiffInstance(DensityOperator r, DensityOperator s, QuantumChannel n,
                    double strict_tol = kSpectralCutoff);
};

double delta_vn(const RelDiffInstance& inst);

// Single-relative-entropy rewrite D(rho || exp{log sigma + N^dag(log N(rho)
// - log N(sigma))}); agrees with delta_vn on strict instances.
double delta_vn_rewrite(const RelDiffInstance& inst);

double delta_alpha(const RelDiffInstance& inst, double alpha);
double delta_tilde_alpha(const RelDiffInstance& inst, double alpha);

struct LieTrotterRow {
    double p = 0.0;
    double frobenius_distance = 0.0;
};

// Distance of [sigma^(p/2) N^dag(N(sigma)^(-p/2) N(rho)^p N(sigma)^(-p/2))
// sigma^(p/2)]^(1/p) from the exp{...} limit point, per grid value.
std::vector<LieTrotterRow> lie_trotter_limit_check(const RelDiffInstance& inst,
                                                   const std::vector<double>& p_grid);

// Relative entropy difference variance; nonnegative (Kadison-Schwarz plus the
// scalar variance bound).
double variance_v(const RelDiffInstance& inst);

struct SlopeCheck {
    double finite_difference = 0.0;
    double half_variance = 0.0;
};

// Central finite difference of Delta_alpha (or the sandwiched variant) at
// alpha = 1 against V/2.
SlopeCheck alpha_slope_check(const RelDiffInstance& inst, double h = 1e-4,
                             bool sandwiched_variant = false);

// delta_vn + log F(rho, T(N(rho))) with T the Petz recovery channel for
// (sigma, N); conjectured nonnegative, recorded not asserted.
double monotonicity_remainder(const RelDiffInstance& inst);

struct JointConvexityResult {
    double margin = 0.0;          // remainder-term margin
    double equivalence_gap = 0.0; // |margin - flagged monotonicity margin|
};

JointConvexityResult joint_convexity_remainder(const std::vector<double>& probs,
                                               const std::vector<DensityOperator>& rhos,
                                               const std::vector<DensityOperator>& sigmas);

struct HolevoRemainderResult {
    double holevo_gap = 0.0; // I(X;B) - I(X;Y), nonnegative (Holevo bound)
    double margin = 0.0;     // gap + 2 log sum_x p sqrt(F)
};

HolevoRemainderResult holevo_remainder(const std::vector<double>& probs,
                                       const std::vector<DensityOperator>& rho_bs,
                                       const Povm& rank_one_on_b);

// vn CMI I(E;B|X) of the measurement dilation plus log F(rho, (E_A (x) id)(rho)).
double discord_remainder(const DensityOperator& rho_ab, const Povm& rank_one_on_a);

// Proven monotonicity margins for unitary channels: Delta_beta - Delta_alpha
// for alpha + beta = 2 (plain) or 1/alpha + 1/beta = 2 (sandwiched).
double unitary_exact_mono_margin(const RelDiffInstance& inst, double alpha, double beta,
                                 bool sandwiched_variant);

} // namespace renyi
