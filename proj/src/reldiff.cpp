#include "renyilab/reldiff.hpp"

#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

namespace {

void require_strict(const Mat& m, double tol, const char* what) {
    EigH eig = eig_hermitian(m);
    double lmax = std::max(eig.values.maxCoeff(), 0.0);
    if (eig.values.minCoeff() <= tol * std::max(lmax, 1e-300))
        throw SingularSigma(std::string("reldiff: ") + what + " is not positive definite");
}

} // namespace

RelDiffInstance::RelDiffInstance(DensityOperator r, DensityOperator s, QuantumChannel n,
                                 double strict_tol)
    : rho(std::move(r)), sigma(std::move(s)), channel(std::move(n)) {
    if (rho.dim() != sigma.dim() || rho.dim() != channel.d_in)
        throw ShapeMismatch("reldiff: dimensions do not match the channel input");
    n_rho = hermitize(channel.apply(rho.rho));
    n_sigma = hermitize(channel.apply(sigma.rho));
    require_strict(rho.rho, strict_tol, "rho");
    require_strict(sigma.rho, strict_tol, "sigma");
    require_strict(n_rho, strict_tol, "N(rho)");
    require_strict(n_sigma, strict_tol, "N(sigma)");
}

double delta_vn(const RelDiffInstance& inst) {
    return vn_relative_entropy(inst.rho.rho, inst.sigma.rho) -
           vn_relative_entropy(inst.n_rho, inst.n_sigma);
}

double delta_vn_rewrite(const RelDiffInstance& inst) {
    Mat arg = matrix_log(inst.sigma.rho) +
              inst.channel.adjoint_apply(matrix_log(inst.n_rho) - matrix_log(inst.n_sigma));
    Mat omega = matrix_exp(hermitize(arg));
    return (inst.rho.rho * (matrix_log(inst.rho.rho) - matrix_log(omega))).trace().real();
}

double delta_alpha(const RelDiffInstance& inst, double alpha) {
    if (std::abs(alpha - 1.0) < 1e-9) return delta_vn(inst);
    Mat ns_pow = psd_power(inst.n_sigma, (alpha - 1.0) / 2.0);
    Mat inner = ns_pow * psd_power(inst.n_rho, 1.0 - alpha) * ns_pow;
    Mat s_pow = psd_power(inst.sigma.rho, (1.0 - alpha) / 2.0);
    Mat sandwich = s_pow * inst.channel.adjoint_apply(inner) * s_pow;
    double t = (psd_power(inst.rho.rho, alpha) * sandwich).trace().real();
    if (t <= 0.0) return infinite_value();
    return std::log(t) / (alpha - 1.0);
}

double delta_tilde_alpha(const RelDiffInstance& inst, double alpha) {
    if (std::abs(alpha - 1.0) < 1e-9) return delta_vn(inst);
    double ex = (alpha - 1.0) / (2.0 * alpha);
    Mat ns_pow = psd_power(inst.n_sigma, ex);
    Mat inner = ns_pow * psd_power(inst.n_rho, (1.0 - alpha) / alpha) * ns_pow;
    Mat s_pow = psd_power(inst.sigma.rho, (1.0 - alpha) / (2.0 * alpha));
    Mat r_half = psd_power(inst.rho.rho, 0.5);
    Mat w = hermitize(r_half * s_pow * inst.channel.adjoint_apply(inner) * s_pow * r_half);
    double nrm = alpha_norm(w, alpha);
    if (nrm <= 0.0) return infinite_value();
    return (alpha / (alpha - 1.0)) * std::log(nrm);
}

std::vector<LieTrotterRow> lie_trotter_limit_check(const RelDiffInstance& inst,
                                                   const std::vector<double>& p_grid) {
    Mat target = matrix_exp(hermitize(
        matrix_log(inst.sigma.rho) +
        inst.channel.adjoint_apply(matrix_log(inst.n_rho) - matrix_log(inst.n_sigma))));
    std::vector<LieTrotterRow> rows;
    for (double p : p_grid) {
        Mat ns = psd_power(inst.n_sigma, -p / 2.0);
        Mat inner = ns * psd_power(inst.n_rho, p) * ns;
        Mat s = psd_power(inst.sigma.rho, p / 2.0);
        Mat g = psd_power(hermitize(s * inst.channel.adjoint_apply(inner) * s), 1.0 / p);
        rows.push_back({p, (g - target).norm()});
    }
    return rows;
}

double variance_v(const RelDiffInstance& inst) {
    Mat a = matrix_log(inst.n_rho) - matrix_log(inst.n_sigma);
    Mat adj_a = inst.channel.adjoint_apply(a);
    Mat h = matrix_log(inst.rho.rho) - matrix_log(inst.sigma.rho) - adj_a;
    double delta = (inst.rho.rho * h).trace().real();
    Mat centered = h - delta * Mat::Identity(h.rows(), h.cols());
    double term1 = (inst.rho.rho * centered * centered).trace().real();
    double term2 = (inst.rho.rho *
                    (inst.channel.adjoint_apply(a * a) - adj_a * adj_a))
                       .trace()
                       .real();
    return term1 + term2;
}

SlopeCheck alpha_slope_check(const RelDiffInstance& inst, double h,
                             bool sandwiched_variant) {
    auto eval = [&](double a) {
        return sandwiched_variant ? delta_tilde_alpha(inst, a) : delta_alpha(inst, a);
    };
    SlopeCheck out;
    out.finite_difference = (eval(1.0 + h) - eval(1.0 - h)) / (2.0 * h);
    out.half_variance = 0.5 * variance_v(inst);
    return out;
}

double monotonicity_remainder(const RelDiffInstance& inst) {
    QuantumChannel t = petz_map(inst.sigma, inst.channel);
    Mat recovered = hermitize(t.apply(inst.n_rho));
    return delta_vn(inst) + std::log(std::max(fidelity(inst.rho.rho, recovered), 1e-300));
}

JointConvexityResult joint_convexity_remainder(const std::vector<double>& probs,
                                               const std::vector<DensityOperator>& rhos,
                                               const std::vector<DensityOperator>& sigmas) {
    if (probs.size() != rhos.size() || probs.size() != sigmas.size() || probs.empty())
        throw ShapeMismatch("joint_convexity_remainder: ensemble sizes differ");
    const long d = rhos.front().dim();
    Mat rho_bar = Mat::Zero(d, d), sigma_bar = Mat::Zero(d, d);
    for (std::size_t x = 0; x < probs.size(); ++x) {
        rho_bar += probs[x] * rhos[x].rho;
        sigma_bar += probs[x] * sigmas[x].rho;
    }
    Mat sb_inv_half = psd_power(hermitize(sigma_bar), -0.5);
    Mat core = sb_inv_half * rho_bar * sb_inv_half;

    double avg_rel = 0.0, fid_sum = 0.0;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        avg_rel += probs[x] * vn_relative_entropy(rhos[x].rho, sigmas[x].rho);
        Mat sx_half = psd_power(sigmas[x].rho, 0.5);
        Mat recov = hermitize(sx_half * core * sx_half);
        fid_sum += probs[x] * std::sqrt(std::max(fidelity(rhos[x].rho, recov), 0.0));
    }
    double bar_rel = vn_relative_entropy(hermitize(rho_bar), hermitize(sigma_bar));

    JointConvexityResult out;
    out.margin = avg_rel - bar_rel + 2.0 * std::log(std::max(fid_sum, 1e-300));

    // flag-state equivalence: the same margin from the monotonicity remainder
    // of the classically flagged pair under the trace-out channel
    const int n = static_cast<int>(probs.size());
    DensityOperator rho_xb = cq_state(probs, rhos);
    DensityOperator sigma_xb = cq_state(probs, sigmas);
    QuantumChannel trace_x =
        QuantumChannel::trace_out_first(n, static_cast<int>(d));
    RelDiffInstance flagged(rho_xb, sigma_xb, trace_x);
    out.equivalence_gap = std::abs(out.margin - monotonicity_remainder(flagged));
    return out;
}

HolevoRemainderResult holevo_remainder(const std::vector<double>& probs,
                                       const std::vector<DensityOperator>& rho_bs,
                                       const Povm& rank_one_on_b) {
    if (probs.size() != rho_bs.size() || probs.empty())
        throw ShapeMismatch("holevo_remainder: ensemble sizes differ");
    DensityOperator rho_xb = cq_state(probs, rho_bs);
    const std::string b_label = rho_xb.shape.labels[1];
    double i_xb = vn_mutual_info(rho_xb, {"X"}, {b_label});

    QuantumChannel meas = measurement_channel(rank_one_on_b);
    DensityOperator omega_xy = apply_channel(meas, rho_xb, b_label);
    double i_xy = vn_mutual_info(omega_xy, {"X"}, {b_label});

    Mat rho_b = Mat::Zero(rho_bs.front().dim(), rho_bs.front().dim());
    for (std::size_t x = 0; x < probs.size(); ++x) rho_b += probs[x] * rho_bs[x].rho;
    QuantumChannel eb =
        measure_reprepare_channel(hermitize(rho_b), rank_one_on_b);

    double fid_sum = 0.0;
    for (std::size_t x = 0; x < probs.size(); ++x) {
        Mat mapped = hermitize(eb.apply(rho_bs[x].rho));
        fid_sum += probs[x] * std::sqrt(std::max(fidelity(rho_bs[x].rho, mapped), 0.0));
    }
    HolevoRemainderResult out;
    out.holevo_gap = i_xb - i_xy;
    out.margin = out.holevo_gap + 2.0 * std::log(std::max(fid_sum, 1e-300));
    return out;
}

double discord_remainder(const DensityOperator& rho_ab, const Povm& rank_one_on_a) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("discord_remainder: need a bipartite state");
    Isometry u = measurement_dilation(rank_one_on_a);
    DensityOperator omega = isometry_apply(u, rho_ab, rho_ab.shape.labels[0]);
    double left = vn_cmi(omega, {"E"}, {rho_ab.shape.labels[1]}, {"X"});

    QuantumChannel eb = discord_eb_channel(rho_ab, rank_one_on_a);
    DensityOperator mapped = apply_channel(eb, rho_ab, rho_ab.shape.labels[0]);
    return left + std::log(std::max(fidelity(rho_ab, mapped), 1e-300));
}

double unitary_exact_mono_margin(const RelDiffInstance& inst, double alpha, double beta,
                                 bool sandwiched_variant) {
    if (sandwiched_variant)
        return delta_tilde_alpha(inst, beta) - delta_tilde_alpha(inst, alpha);
    return delta_alpha(inst, beta) - delta_alpha(inst, alpha);
}

} // namespace renyi
