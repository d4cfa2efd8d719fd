#include "renyilab/measures.hpp"

#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

namespace {

std::string unique_label(const SubsystemShape& shape, std::string base) {
    while (shape.has_label(base)) base += "'";
    return base;
}

struct PurificationData {
    RVec weights;  // descending eigenvalues above cutoff
    Mat vectors;   // matching columns
    Mat psi;       // D x r matrix, column i = sqrt(l_i) |v_i>
    int rank = 0;
};

PurificationData purification_data(const DensityOperator& rho) {
    EigH eig = eig_hermitian(rho.rho);
    double cut = kSpectralCutoff * std::max(eig.values.maxCoeff(), 0.0);
    std::vector<int> kept;
    for (int i = static_cast<int>(eig.values.size()) - 1; i >= 0; --i)
        if (eig.values(i) > cut) kept.push_back(i);
    PurificationData out;
    out.rank = static_cast<int>(kept.size());
    out.weights = RVec(out.rank);
    out.vectors = Mat(rho.dim(), out.rank);
    out.psi = Mat(rho.dim(), out.rank);
    for (int k = 0; k < out.rank; ++k) {
        out.weights(k) = eig.values(kept[k]);
        out.vectors.col(k) = eig.vectors.col(kept[k]);
        out.psi.col(k) = std::sqrt(eig.values(kept[k])) * eig.vectors.col(kept[k]);
    }
    return out;
}

} // namespace

BipartiteSplit default_split(const SubsystemShape& shape) {
    if (shape.factor_count() != 2)
        throw ShapeMismatch("measure: state is not bipartite; pass an explicit split");
    return BipartiteSplit{{shape.labels[0]}, {shape.labels[1]}};
}

DensityOperator flag_extension(const DensityOperator& rho,
                               const std::vector<double>& probs,
                               const std::vector<Vec>& pure_terms,
                               const std::string& ext_label) {
    const int n = static_cast<int>(probs.size());
    const long d = rho.dim();
    Mat flag = Mat::Zero(d * n, d * n);
    for (int x = 0; x < n; ++x) {
        Mat term = probs[x] * (pure_terms[x] * pure_terms[x].adjoint());
        for (long r = 0; r < d; ++r)
            for (long c = 0; c < d; ++c) flag(r * n + x, c * n + x) += term(r, c);
    }
    SubsystemShape shape = rho.shape.tensor_with(SubsystemShape::single(n, ext_label));
    return DensityOperator(hermitize(flag), shape);
}

Mat extension_warm_start(const DensityOperator& rho, const DensityOperator& omega,
                         const Labels& ext_labels, int env_dim) {
    // arrange omega as (rho labels ..., ext labels ...) and purify with F last
    std::vector<std::string> order = rho.shape.labels;
    Labels ext_ordered = omega.shape.subshape(ext_labels).labels;
    order.insert(order.end(), ext_ordered.begin(), ext_ordered.end());
    DensityOperator om = omega.permuted(order);

    PurificationData om_data = purification_data(om);
    const int f = std::max(env_dim, om_data.rank);
    const long d_ab = rho.dim();
    const long d_e = om.shape.dim_of_set(ext_ordered);

    PurificationData rho_data = purification_data(rho);
    const int r = rho_data.rank;

    // |Omega> = sum_k sqrt(m_k) |w_k>|k>_F ;  V|i>_R = (<i|_AB (x) I)|Omega>/sqrt(l_i)
    Mat v = Mat::Zero(d_e * f, r);
    for (int k = 0; k < om_data.rank; ++k) {
        // column k of om_data.psi is sqrt(m_k)|w_k> on (AB, E)
        for (long ab = 0; ab < d_ab; ++ab)
            for (long e = 0; e < d_e; ++e) {
                cxd w = om_data.psi(ab * d_e + e, k);
                if (w == cxd(0.0, 0.0)) continue;
                for (int i = 0; i < r; ++i)
                    v(e * f + k, i) += std::conj(rho_data.vectors(ab, i)) * w /
                                       std::sqrt(rho_data.weights(i));
            }
    }
    double defect = (v.adjoint() * v - Mat::Identity(r, r)).cwiseAbs().maxCoeff();
    if (defect > 1e-6)
        throw InvalidState("extension_warm_start: omega is not an extension of rho");
    return v;
}

MeasureResult squashed_entanglement(const DensityOperator& rho_ab, double alpha,
                                    int ext_dim, const OptimizerConfig& cfg,
                                    const Mat* warm_start, const BipartiteSplit* split,
                                    int env_dim) {
    BipartiteSplit sp = split ? *split : default_split(rho_ab.shape);
    PurificationData pd = purification_data(rho_ab);
    const int r = pd.rank;
    const long d_ab = rho_ab.dim();
    if (ext_dim < 1) ext_dim = static_cast<int>(d_ab);
    if (env_dim < 1) env_dim = ext_dim;
    if (warm_start) {
        if (warm_start->cols() != r || warm_start->rows() % ext_dim != 0)
            throw ShapeMismatch("squashed_entanglement: warm start dimensions");
        env_dim = static_cast<int>(warm_start->rows()) / ext_dim;
    }

    const std::string e_label = unique_label(rho_ab.shape, "E");
    SubsystemShape full =
        rho_ab.shape.tensor_with(SubsystemShape::single(ext_dim, e_label));
    Labels e_group{e_label};

    const bool use_vn = RenyiOrder::of(alpha).is_one();
    auto objective_of = [&](const Mat& m) {
        Mat v = polar_retraction(m); // (ext*env) x r
        // amplitude matrix B[(ab,e), f] of (I (x) V)|psi>
        Mat amp = pd.psi * v.transpose(); // d_ab x (ext*env)
        Mat b(d_ab * ext_dim, env_dim);
        for (long ab = 0; ab < d_ab; ++ab)
            for (int e = 0; e < ext_dim; ++e)
                for (int f = 0; f < env_dim; ++f)
                    b(ab * ext_dim + e, f) = amp(ab, static_cast<long>(e) * env_dim + f);
        Mat omega = b * b.adjoint();
        DensityOperator w(hermitize(omega / std::max(omega.trace().real(), 1e-300)), full);
        double val = use_vn ? vn_cmi(w, sp.part_a, sp.part_b, e_group)
                            : renyi_cmi(w, sp.part_a, sp.part_b, e_group, alpha);
        return std::isfinite(val) ? val : 1e6;
    };

    Objective f = [&](const Eigen::VectorXd& x) {
        return objective_of(unpack_complex(x, ext_dim * env_dim, r));
    };

    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    if (warm_start) {
        warm = pack_complex(*warm_start);
        warm_ptr = &warm;
    }
    OptimResult res = minimize(f, 2 * ext_dim * env_dim * r, cfg, warm_ptr);

    MeasureResult out;
    Mat v = polar_retraction(unpack_complex(res.x, ext_dim * env_dim, r));
    out.value = 0.5 * res.value;
    out.converged = res.converged;
    out.evaluations = res.evaluations;
    out.extension_isometry = v;

    Mat amp = pd.psi * v.transpose();
    Mat b(d_ab * ext_dim, env_dim);
    for (long ab = 0; ab < d_ab; ++ab)
        for (int e = 0; e < ext_dim; ++e)
            for (int f2 = 0; f2 < env_dim; ++f2)
                b(ab * ext_dim + e, f2) = amp(ab, static_cast<long>(e) * env_dim + f2);
    Mat omega = b * b.adjoint();
    Mat marg = partial_trace(hermitize(omega), full, rho_ab.shape.labels);
    out.feasibility_residual = trace_norm(marg - rho_ab.rho);
    return out;
}

Mat eof_steering_warm_start(const DensityOperator& rho_ab,
                            const std::vector<double>& probs,
                            const std::vector<Vec>& pure_terms, int n_terms) {
    PurificationData pd = purification_data(rho_ab);
    const int r = pd.rank;
    if (n_terms < static_cast<int>(probs.size()))
        throw ShapeMismatch("eof_steering_warm_start: n_terms too small");
    Mat w = Mat::Zero(n_terms, r);
    for (std::size_t x = 0; x < probs.size(); ++x)
        for (int i = 0; i < r; ++i) {
            cxd ov = (pd.vectors.col(i).adjoint() * pure_terms[x])(0, 0);
            w(static_cast<long>(x), i) = std::sqrt(probs[x]) * ov / std::sqrt(pd.weights(i));
        }
    return w;
}

MeasureResult eof_renyi(const DensityOperator& rho_ab, double alpha, int n_terms,
                        const OptimizerConfig& cfg, const Mat* warm_start) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("eof_renyi: need a bipartite state");
    PurificationData pd = purification_data(rho_ab);
    const int r = pd.rank;
    if (n_terms < r) throw ShapeMismatch("eof_renyi: n_terms below the state rank");
    const int d_a = rho_ab.shape.dims[0];
    const int d_b = rho_ab.shape.dims[1];

    const bool use_vn = RenyiOrder::of(alpha).is_one();
    auto objective_of = [&](const Mat& m) {
        Mat w = polar_retraction(m); // n x r
        double acc = 0.0;            // sum_x p Tr{(psi_A^x)^a}^(1/a), or vn average
        for (int x = 0; x < n_terms; ++x) {
            Vec term = pd.psi * w.row(x).transpose(); // subnormalized |w_x>
            double p = term.squaredNorm();
            if (p < 1e-14) continue;
            Mat resh(d_a, d_b);
            for (int a = 0; a < d_a; ++a)
                for (int b = 0; b < d_b; ++b) resh(a, b) = term(a * d_b + b);
            Mat red = resh * resh.adjoint() / p; // psi_A^x
            EigH eig = eig_hermitian(hermitize(red));
            if (use_vn) {
                double h = 0.0;
                for (int i = 0; i < eig.values.size(); ++i)
                    if (eig.values(i) > 1e-15) h -= eig.values(i) * std::log(eig.values(i));
                acc += p * h;
            } else {
                double tr = 0.0;
                for (int i = 0; i < eig.values.size(); ++i)
                    if (eig.values(i) > 0.0) tr += std::pow(eig.values(i), alpha);
                acc += p * std::pow(tr, 1.0 / alpha);
            }
        }
        if (use_vn) return acc;
        double v = (alpha / (1.0 - alpha)) * std::log(std::max(acc, 1e-300));
        return std::isfinite(v) ? v : 1e6;
    };

    Objective f = [&](const Eigen::VectorXd& x) {
        return objective_of(unpack_complex(x, n_terms, r));
    };
    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    if (warm_start) {
        if (warm_start->rows() != n_terms || warm_start->cols() != r)
            throw ShapeMismatch("eof_renyi: warm start dimensions");
        warm = pack_complex(*warm_start);
        warm_ptr = &warm;
    }
    OptimResult res = minimize(f, 2 * n_terms * r, cfg, warm_ptr);

    MeasureResult out;
    out.value = res.value;
    out.converged = res.converged;
    out.evaluations = res.evaluations;

    Mat w = polar_retraction(unpack_complex(res.x, n_terms, r));
    PureDecomposition dec;
    Mat recon = Mat::Zero(rho_ab.dim(), rho_ab.dim());
    for (int x = 0; x < n_terms; ++x) {
        Vec term = pd.psi * w.row(x).transpose();
        double p = term.squaredNorm();
        recon += term * term.adjoint();
        if (p < 1e-14) continue;
        dec.probs.push_back(p);
        dec.vectors.push_back(term / std::sqrt(p));
    }
    out.ensemble = std::move(dec);
    out.feasibility_residual = trace_norm(recon - rho_ab.rho);
    return out;
}

double eof_bound_check(const DensityOperator& rho_ab, double alpha,
                       const OptimizerConfig& cfg) {
    double beta = (2.0 - alpha) / alpha;
    PurificationData pd = purification_data(rho_ab);
    int n_terms = std::max(pd.rank * pd.rank, 4);
    MeasureResult eof = eof_renyi(rho_ab, beta, n_terms, cfg);

    const std::string e_label = unique_label(rho_ab.shape, "E");
    DensityOperator ext =
        flag_extension(rho_ab, eof.ensemble->probs, eof.ensemble->vectors, e_label);
    Mat warm = extension_warm_start(rho_ab, ext, {e_label});
    int ext_dim = static_cast<int>(eof.ensemble->probs.size());
    MeasureResult sq =
        squashed_entanglement(rho_ab, alpha, ext_dim, cfg, &warm, nullptr,
                              static_cast<int>(warm.rows()) / ext_dim);
    return eof.value - sq.value;
}

namespace {

// omega = U rho U^dag for the compact rank-one dilation U = sum |x>|x><v_x|
DensityOperator rank_one_dilated_state(const DensityOperator& rho_ab, const Mat& v_rows,
                                       const std::string& x_label,
                                       const std::string& e_label) {
    const int n = static_cast<int>(v_rows.rows());
    const int d_a = rho_ab.shape.dims[0];
    const int d_b = rho_ab.shape.dims[1];
    Mat u = Mat::Zero(static_cast<long>(n) * n, d_a);
    for (int x = 0; x < n; ++x)
        for (int a = 0; a < d_a; ++a) u(static_cast<long>(x) * n + x, a) = v_rows(x, a);
    Mat f = tensor(u, Mat::Identity(d_b, d_b));
    Mat omega = f * rho_ab.rho * f.adjoint();
    SubsystemShape shape({n, n, d_b}, {x_label, e_label, rho_ab.shape.labels[1]});
    return DensityOperator(hermitize(omega), shape);
}

} // namespace

MeasureResult discord_renyi(const DensityOperator& rho_ab, double alpha,
                            int n_outcomes, const OptimizerConfig& cfg,
                            const Povm* warm_start) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("discord_renyi: need a bipartite state");
    const int d_a = rho_ab.shape.dims[0];
    if (n_outcomes < d_a) n_outcomes = d_a * d_a;
    const std::string x_label = unique_label(rho_ab.shape, "X");
    const std::string e_label = unique_label(rho_ab.shape, "E");

    const bool use_vn = RenyiOrder::of(alpha).is_one();
    auto objective_of = [&](const Mat& m) {
        Mat v = polar_retraction(m); // rows <v_x|
        DensityOperator omega = rank_one_dilated_state(rho_ab, v, x_label, e_label);
        double val =
            use_vn ? vn_cmi(omega, {e_label}, {rho_ab.shape.labels[1]}, {x_label})
                   : renyi_cmi(omega, {e_label}, {rho_ab.shape.labels[1]}, {x_label},
                               alpha);
        return std::isfinite(val) ? val : 1e6;
    };
    Objective f = [&](const Eigen::VectorXd& x) {
        return objective_of(unpack_complex(x, n_outcomes, d_a));
    };

    Eigen::VectorXd warm;
    const Eigen::VectorXd* warm_ptr = nullptr;
    if (warm_start) {
        std::vector<Vec> vs = warm_start->vectors();
        if (static_cast<int>(vs.size()) > n_outcomes)
            throw ShapeMismatch("discord_renyi: warm start has too many outcomes");
        Mat m0 = Mat::Zero(n_outcomes, d_a);
        for (std::size_t x = 0; x < vs.size(); ++x) m0.row(x) = vs[x].adjoint();
        warm = pack_complex(m0);
        warm_ptr = &warm;
    }
    OptimResult res = minimize(f, 2 * n_outcomes * d_a, cfg, warm_ptr);

    MeasureResult out;
    out.value = res.value;
    out.converged = res.converged;
    out.evaluations = res.evaluations;
    Mat v = polar_retraction(unpack_complex(res.x, n_outcomes, d_a));
    std::vector<Vec> vs;
    for (int x = 0; x < n_outcomes; ++x) vs.push_back(v.row(x).adjoint());
    out.measurement = Povm::from_vectors(vs);
    Mat comp = Mat::Zero(d_a, d_a);
    for (const Vec& vx : vs) comp += vx * vx.adjoint();
    out.feasibility_residual = (comp - Mat::Identity(d_a, d_a)).cwiseAbs().maxCoeff();
    return out;
}

double discord_pure_objective(const PureState& psi_ab, const Povm& rank_one,
                              double alpha) {
    if (psi_ab.shape.factor_count() != 2)
        throw ShapeMismatch("discord_pure_objective: need a bipartite state");
    const int d_a = psi_ab.shape.dims[0];
    const int d_b = psi_ab.shape.dims[1];
    Mat resh(d_a, d_b);
    for (int a = 0; a < d_a; ++a)
        for (int b = 0; b < d_b; ++b) resh(a, b) = psi_ab.amplitudes(a * d_b + b);
    Mat rho_b = hermitize(resh.transpose() * resh.conjugate());
    Mat rho_b_pow = psd_power(rho_b, 1.0 - alpha);

    double acc = 0.0;
    for (const Vec& v : rank_one.vectors()) {
        Vec xi = (v.adjoint() * resh).transpose(); // subnormalized <v|psi> on B
        double p = xi.squaredNorm();
        if (p < 1e-15) continue;
        double inner = ((xi.adjoint() * rho_b_pow * xi)(0, 0).real()) / p;
        acc += p * std::pow(inner, 1.0 / alpha);
    }
    return (alpha / (alpha - 1.0)) * std::log(std::max(acc, 1e-300));
}

namespace {

// min over product comparison states of the Renyi relative entropy to tau,
// by alternating the closed-form single-marginal optimum.
double min_product_relative_entropy(const DensityOperator& tau, double alpha,
                                    int max_rounds = 80) {
    const auto& shape = tau.shape;
    const std::string la = shape.labels[0], lb = shape.labels[1];
    Mat sa = hermitize(partial_trace(tau.rho, shape, {la}));
    Mat sb = hermitize(partial_trace(tau.rho, shape, {lb}));
    Mat ta = psd_power(tau.rho, alpha);
    double prev = infinite_value();
    double val = prev;
    for (int round = 0; round < max_rounds; ++round) {
        Mat qa = hermitize(partial_trace(
            ta * embed(psd_power(sb, 1.0 - alpha), shape, {lb}), shape, {la}));
        Mat pa = psd_power(qa, 1.0 / alpha);
        sa = pa / std::max(pa.trace().real(), 1e-300);
        Mat qb = hermitize(partial_trace(
            ta * embed(psd_power(sa, 1.0 - alpha), shape, {la}), shape, {lb}));
        Mat pb = psd_power(qb, 1.0 / alpha);
        sb = pb / std::max(pb.trace().real(), 1e-300);
        double t = (ta * embed(psd_power(sa, 1.0 - alpha), shape, {la}) *
                    embed(psd_power(sb, 1.0 - alpha), shape, {lb}))
                       .trace()
                       .real();
        val = std::log(std::max(t, 1e-300)) / (alpha - 1.0);
        if (std::abs(val - prev) < 1e-13) break;
        prev = val;
    }
    return val;
}

} // namespace

MeasureResult discord_mbpds(const DensityOperator& rho_ab, double alpha,
                            const OptimizerConfig& cfg) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("discord_mbpds: need a bipartite state");
    const int d_a = rho_ab.shape.dims[0];
    const int d_b = rho_ab.shape.dims[1];
    const int n = d_a * d_a;

    double term1 = min_product_relative_entropy(rho_ab, alpha);

    auto measured_value = [&](const Mat& m) {
        Mat v = polar_retraction(m);
        std::vector<Mat> raw;
        for (int x = 0; x < n; ++x) {
            // <v_x|_A rho |v_x>_A as a B block
            Mat block = Mat::Zero(d_b, d_b);
            for (int a = 0; a < d_a; ++a)
                for (int ap = 0; ap < d_a; ++ap)
                    block += v(x, a) * std::conj(v(x, ap)) *
                             rho_ab.rho.block(a * d_b, ap * d_b, d_b, d_b);
            raw.push_back(hermitize(block));
        }
        Mat cq = Mat::Zero(static_cast<long>(n) * d_b, static_cast<long>(n) * d_b);
        for (int x = 0; x < n; ++x)
            cq.block(static_cast<long>(x) * d_b, static_cast<long>(x) * d_b, d_b, d_b) =
                raw[x];
        double tr = cq.trace().real();
        DensityOperator tau(hermitize(cq / tr),
                            SubsystemShape({n, d_b}, {"#X", "#B"}));
        return min_product_relative_entropy(tau, alpha);
    };

    Objective f = [&](const Eigen::VectorXd& x) {
        return -measured_value(unpack_complex(x, n, d_a)); // maximize
    };
    OptimResult res = minimize(f, 2 * n * d_a, cfg);

    MeasureResult out;
    out.value = term1 + res.value; // term1 - max(...)
    out.converged = res.converged;
    out.evaluations = res.evaluations;
    Mat v = polar_retraction(unpack_complex(res.x, n, d_a));
    std::vector<Vec> vs;
    for (int x = 0; x < n; ++x) vs.push_back(v.row(x).adjoint());
    out.measurement = Povm::from_vectors(vs);
    return out;
}

double rank_one_refinement_test(const DensityOperator& rho_ab, const Povm& coarse,
                                double alpha) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("rank_one_refinement_test: need a bipartite state");
    Isometry u = measurement_dilation_refined(coarse);
    DensityOperator omega = isometry_apply(u, rho_ab, rho_ab.shape.labels[0]);
    const std::string b = rho_ab.shape.labels[1];
    double coarse_obj = renyi_cmi(omega, {"E", "XE", "Y"}, {b}, {"X"}, alpha);
    double refined_obj = renyi_cmi(omega, {"E", "XE"}, {b}, {"X", "Y"}, alpha);
    return coarse_obj - refined_obj;
}

CcInvarianceResult cc_invariance_test(const DensityOperator& rho_flagged, double alpha,
                                      const OptimizerConfig& cfg) {
    const auto& ls = rho_flagged.shape.labels;
    if (ls.size() != 4)
        throw ShapeMismatch("cc_invariance_test: expect labels (XA, XB, A, B)");
    const std::string xa = ls[0], xb = ls[1], a = ls[2], b = ls[3];

    // restricted extension dimension: the values are recorded upper bounds
    const int ext = rho_flagged.shape.dim_of(a) * rho_flagged.shape.dim_of(b);
    auto run = [&](const DensityOperator& st, const Labels& pa, const Labels& pb) {
        BipartiteSplit sp{pa, pb};
        return squashed_entanglement(st, alpha, ext, cfg, nullptr, &sp).value;
    };
    CcInvarianceResult out;
    out.with_flag_a = run(rho_flagged.trace_out({xb}), {a, xa}, {b});
    out.with_both_flags = run(rho_flagged, {a, xa}, {b, xb});
    out.with_flag_b = run(rho_flagged.trace_out({xa}), {a}, {b, xb});
    return out;
}

} // namespace renyi
