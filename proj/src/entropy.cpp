#include "renyilab/entropy.hpp"

#include <algorithm>
#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

namespace {

constexpr double kOneWindow = 1e-6;
constexpr double kSupportTol = 1e-9;

Labels ordered_union(const SubsystemShape& shape,
                     std::initializer_list<const Labels*> groups) {
    for (const Labels* g : groups)
        for (const auto& l : *g) (void)shape.position(l);
    Labels out;
    for (const auto& l : shape.labels) {
        int hits = 0;
        for (const Labels* g : groups)
            if (std::find(g->begin(), g->end(), l) != g->end()) ++hits;
        if (hits > 1) throw ShapeMismatch("entropy: overlapping system groups");
        if (hits == 1) out.push_back(l);
    }
    return out;
}

DensityOperator reduce_to(const DensityOperator& rho, const Labels& keep) {
    if (keep == rho.shape.labels) return rho;
    return rho.reduce(keep);
}

double log_trace_power(const Mat& psd, double p) {
    Mat m = psd_power(hermitize(psd), p);
    return std::log(std::max(m.trace().real(), 0.0));
}

bool support_contained(const Mat& rho, const Mat& sigma) {
    Mat p = support_projector(sigma);
    double outside = rho.trace().real() - (p * rho).trace().real();
    return std::abs(outside) <= kSupportTol * std::max(rho.trace().real(), 1.0);
}

bool supports_orthogonal(const Mat& rho, const Mat& sigma) {
    Mat pr = support_projector(rho);
    Mat ps = support_projector(sigma);
    return (pr * ps).trace().real() <= kSupportTol;
}

} // namespace

RenyiOrder RenyiOrder::of(double alpha) {
    if (!(alpha > 0.0)) throw Error("RenyiOrder: alpha must be positive");
    RenyiOrder o;
    o.alpha = alpha;
    if (std::abs(alpha - 1.0) < kOneWindow)
        o.regime = Regime::One;
    else if (alpha < 1.0)
        o.regime = Regime::Below1;
    else if (alpha <= 2.0)
        o.regime = Regime::OneToTwo;
    else
        o.regime = Regime::AboveTwo;
    return o;
}

double vn_entropy(const Mat& rho) {
    EigH eig = eig_hermitian(rho);
    double cut = 1e-12 * std::max(eig.values.maxCoeff(), 0.0);
    double h = 0.0;
    for (int i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) > cut) h -= eig.values(i) * std::log(eig.values(i));
    return h;
}

double vn_entropy(const DensityOperator& rho) { return vn_entropy(rho.rho); }

double renyi_entropy(const Mat& rho, double alpha) {
    RenyiOrder o = RenyiOrder::of(alpha);
    if (o.is_one()) return vn_entropy(rho);
    return log_trace_power(rho, alpha) / (1.0 - alpha);
}

double renyi_entropy(const DensityOperator& rho, double alpha) {
    return renyi_entropy(rho.rho, alpha);
}

double vn_relative_entropy(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows())
        throw ShapeMismatch("vn_relative_entropy: dimension mismatch");
    if (!support_contained(rho, sigma)) return infinite_value();
    Mat lr = matrix_log(hermitize(rho));
    Mat ls = matrix_log(hermitize(sigma));
    return (rho * (lr - ls)).trace().real();
}

double vn_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma) {
    return vn_relative_entropy(rho.rho, sigma.rho);
}

double renyi_relative_entropy(const Mat& rho, const Mat& sigma, double alpha) {
    if (rho.rows() != sigma.rows())
        throw ShapeMismatch("renyi_relative_entropy: dimension mismatch");
    if (alpha < 0.0 || alpha == 1.0)
        throw Error("renyi_relative_entropy: alpha must lie in [0,1) u (1,inf)");
    if (alpha > 0.0 && std::abs(alpha - 1.0) < kOneWindow)
        return vn_relative_entropy(rho, sigma);
    if (alpha > 1.0) {
        if (!support_contained(rho, sigma)) return infinite_value();
    } else if (supports_orthogonal(rho, sigma)) {
        return infinite_value();
    }
    double t = (psd_power(hermitize(rho), alpha) * psd_power(hermitize(sigma), 1.0 - alpha))
                   .trace()
                   .real();
    if (t <= 0.0) return infinite_value();
    double tr = std::max(rho.trace().real(), 1e-300);
    return (std::log(t) - std::log(tr)) / (alpha - 1.0);
}

double renyi_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                              double alpha) {
    return renyi_relative_entropy(rho.rho, sigma.rho, alpha);
}

double sandwiched_relative_entropy(const Mat& rho, const Mat& sigma, double alpha) {
    if (rho.rows() != sigma.rows())
        throw ShapeMismatch("sandwiched_relative_entropy: dimension mismatch");
    if (alpha <= 0.0) throw Error("sandwiched_relative_entropy: alpha must be positive");
    if (std::abs(alpha - 1.0) < kOneWindow) return vn_relative_entropy(rho, sigma);
    if (alpha > 1.0) {
        if (!support_contained(rho, sigma)) return infinite_value();
    } else if (supports_orthogonal(rho, sigma)) {
        return infinite_value();
    }
    Mat g = psd_power(hermitize(sigma), (1.0 - alpha) / (2.0 * alpha));
    Mat m = hermitize(g * rho * g);
    double t = psd_power(m, alpha).trace().real();
    if (t <= 0.0) return infinite_value();
    double tr = std::max(rho.trace().real(), 1e-300);
    return (std::log(t) - std::log(tr)) / (alpha - 1.0);
}

double sandwiched_relative_entropy(const DensityOperator& rho,
                                   const DensityOperator& sigma, double alpha) {
    return sandwiched_relative_entropy(rho.rho, sigma.rho, alpha);
}

double vn_conditional_entropy(const DensityOperator& rho, const Labels& sys_a) {
    Labels rest = rho.shape.complement(sys_a);
    double h_ab = vn_entropy(rho.rho);
    if (rest.empty()) return h_ab;
    return h_ab - vn_entropy(partial_trace(rho.rho, rho.shape, rest));
}

double renyi_conditional_entropy(const DensityOperator& rho, const Labels& sys_a,
                                 double alpha) {
    RenyiOrder o = RenyiOrder::of(alpha);
    if (o.is_one()) return vn_conditional_entropy(rho, sys_a);
    Labels rest = rho.shape.complement(ordered_union(rho.shape, {&sys_a}));
    Mat ra = psd_power(rho.rho, alpha);
    Mat y = partial_trace(ra, rho.shape, rest);
    return (alpha / (1.0 - alpha)) * log_trace_power(y, 1.0 / alpha);
}

double vn_cmi(const DensityOperator& rho, const Labels& sys_a, const Labels& sys_b,
              const Labels& sys_e) {
    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    Labels ae = ordered_union(r.shape, {&sys_a, &sys_e});
    Labels be = ordered_union(r.shape, {&sys_b, &sys_e});
    double h = vn_entropy(partial_trace(r.rho, r.shape, ae)) +
               vn_entropy(partial_trace(r.rho, r.shape, be)) - vn_entropy(r.rho);
    if (!sys_e.empty()) {
        Labels e = ordered_union(r.shape, {&sys_e});
        h -= vn_entropy(partial_trace(r.rho, r.shape, e));
    }
    return h;
}

double vn_mutual_info(const DensityOperator& rho, const Labels& sys_a,
                      const Labels& sys_b) {
    return vn_cmi(rho, sys_a, sys_b, {});
}

double renyi_cmi(const DensityOperator& rho, const Labels& sys_a, const Labels& sys_b,
                 const Labels& sys_e, double alpha) {
    RenyiOrder o = RenyiOrder::of(alpha);
    if (o.is_one()) return vn_cmi(rho, sys_a, sys_b, sys_e);

    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    const SubsystemShape& shape = r.shape;

    Labels ae = ordered_union(shape, {&sys_a, &sys_e});
    Mat rho_ae = hermitize(partial_trace(r.rho, shape, ae));
    Mat p_full = embed(psd_power(rho_ae, (1.0 - alpha) / 2.0), shape, ae);

    Mat x = p_full * psd_power(r.rho, alpha) * p_full;
    Labels be = ordered_union(shape, {&sys_b, &sys_e});
    Mat y = partial_trace(x, shape, be);

    Mat z;
    if (sys_e.empty()) {
        z = hermitize(y);
    } else {
        SubsystemShape be_shape = shape.subshape(be);
        Labels e = ordered_union(shape, {&sys_e});
        Mat rho_e = hermitize(partial_trace(r.rho, shape, e));
        Mat q_full = embed(psd_power(rho_e, (alpha - 1.0) / 2.0), be_shape, e);
        z = hermitize(q_full * y * q_full);
    }
    double t = psd_power(z, 1.0 / alpha).trace().real();
    if (t <= 0.0) return infinite_value();
    return (alpha / (alpha - 1.0)) * std::log(t);
}

double renyi_mutual_info(const DensityOperator& rho, const Labels& sys_a,
                         const Labels& sys_b, double alpha) {
    return renyi_cmi(rho, sys_a, sys_b, {}, alpha);
}

double renyi_cmi_objective(const DensityOperator& rho, const Labels& sys_a,
                           const Labels& sys_b, const Labels& sys_e,
                           const Mat& sigma_be, double alpha) {
    RenyiOrder o = RenyiOrder::of(alpha);
    if (o.is_one()) throw Error("renyi_cmi_objective: alpha too close to 1");

    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    const SubsystemShape& shape = r.shape;

    Labels ae = ordered_union(shape, {&sys_a, &sys_e});
    Labels be = ordered_union(shape, {&sys_b, &sys_e});
    if (sigma_be.rows() != shape.dim_of_set(be))
        throw ShapeMismatch("renyi_cmi_objective: sigma_BE dimension mismatch");

    Mat p_full = embed(psd_power(hermitize(partial_trace(r.rho, shape, ae)),
                                 (1.0 - alpha) / 2.0),
                       shape, ae);
    Mat t_full = embed(psd_power(hermitize(sigma_be), 1.0 - alpha), shape, be);
    Mat middle = t_full;
    if (!sys_e.empty()) {
        Labels e = ordered_union(shape, {&sys_e});
        Mat q_full = embed(psd_power(hermitize(partial_trace(r.rho, shape, e)),
                                     (alpha - 1.0) / 2.0),
                           shape, e);
        middle = q_full * t_full * q_full;
    }
    double t = (psd_power(r.rho, alpha) * p_full * middle * p_full).trace().real();
    if (t <= 0.0) return infinite_value();
    return std::log(t) / (alpha - 1.0);
}

double renyi_cmi_direct(const DensityOperator& rho, const Labels& sys_a,
                        const Labels& sys_b, const Labels& sys_e, double alpha) {
    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    Labels be = ordered_union(r.shape, {&sys_b, &sys_e});
    Mat rho_be = hermitize(partial_trace(r.rho, r.shape, be));
    return renyi_cmi_objective(r, sys_a, sys_b, sys_e, rho_be, alpha);
}

double sandwiched_cmi(const DensityOperator& rho, const Labels& sys_a,
                      const Labels& sys_b, const Labels& sys_e, double alpha) {
    RenyiOrder o = RenyiOrder::of(alpha);
    if (o.is_one()) return vn_cmi(rho, sys_a, sys_b, sys_e);

    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    const SubsystemShape& shape = r.shape;

    Labels ae = ordered_union(shape, {&sys_a, &sys_e});
    Labels be = ordered_union(shape, {&sys_b, &sys_e});
    double ex = (1.0 - alpha) / (2.0 * alpha);

    Mat m = psd_power(r.rho, 0.5) *
            embed(psd_power(hermitize(partial_trace(r.rho, shape, ae)), ex), shape, ae);
    if (!sys_e.empty()) {
        Labels e = ordered_union(shape, {&sys_e});
        m = m * embed(psd_power(hermitize(partial_trace(r.rho, shape, e)), -ex), shape, e);
    }
    m = m * embed(psd_power(hermitize(partial_trace(r.rho, shape, be)), ex), shape, be);

    double nrm = alpha_norm(m, 2.0 * alpha);
    if (nrm <= 0.0) return infinite_value();
    return (2.0 * alpha / (alpha - 1.0)) * std::log(nrm);
}

CmiOptimizedResult renyi_cmi_optimized_check(const DensityOperator& rho,
                                             const Labels& sys_a, const Labels& sys_b,
                                             const Labels& sys_e, double alpha,
                                             const OptimizerConfig& cfg) {
    Labels all = ordered_union(rho.shape, {&sys_a, &sys_b, &sys_e});
    DensityOperator r = reduce_to(rho, all);
    Labels be = ordered_union(r.shape, {&sys_b, &sys_e});
    const int d = static_cast<int>(r.shape.dim_of_set(be));

    auto sigma_of = [d](const Eigen::VectorXd& x) {
        Mat l = unpack_complex(x, d, d);
        Mat s = hermitize(l * l.adjoint());
        double tr = s.trace().real();
        if (tr <= 1e-300) return Mat(Mat::Identity(d, d) / d);
        return Mat(s / tr);
    };
    Objective f = [&](const Eigen::VectorXd& x) {
        double v = renyi_cmi_objective(r, sys_a, sys_b, sys_e, sigma_of(x), alpha);
        return std::isfinite(v) ? v : 1e6;
    };

    Mat rho_be = hermitize(partial_trace(r.rho, r.shape, be));
    Eigen::VectorXd warm = pack_complex(psd_power(rho_be, 0.5));
    OptimResult res = minimize(f, 2 * d * d, cfg, &warm);

    CmiOptimizedResult out;
    out.value = res.value;
    out.closed_form = renyi_cmi(r, sys_a, sys_b, sys_e, alpha);
    out.evaluations = res.evaluations;
    out.converged = res.converged;
    return out;
}

} // namespace renyi
