#include "renyilab/channels.hpp"

#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

Mat CpMap::apply(const Mat& x) const {
    Mat out = Mat::Zero(d_out, d_out);
    for (const Mat& k : kraus) out += k * x * k.adjoint();
    return out;
}

QuantumChannel::QuantumChannel(std::vector<Mat> ks, bool allow_subnormalized)
    : kraus(std::move(ks)) {
    if (kraus.empty()) throw InvalidChannel("channel: empty Kraus family");
    d_out = static_cast<int>(kraus.front().rows());
    d_in = static_cast<int>(kraus.front().cols());
    Mat acc = Mat::Zero(d_in, d_in);
    for (const Mat& k : kraus) {
        if (k.rows() != d_out || k.cols() != d_in)
            throw InvalidChannel("channel: inconsistent Kraus dimensions");
        acc += k.adjoint() * k;
    }
    double defect = (acc - Mat::Identity(d_in, d_in)).cwiseAbs().maxCoeff();
    if (allow_subnormalized) {
        // accept sum K^dag K <= I (equality on a subspace)
        EigH eig = eig_hermitian(hermitize(acc));
        if (eig.values.maxCoeff() > 1.0 + 1e-8)
            throw InvalidChannel("channel: Kraus sum exceeds identity");
    } else if (defect > 1e-10) {
        throw InvalidChannel("channel: not trace preserving, defect " +
                             std::to_string(defect));
    }
}

QuantumChannel QuantumChannel::identity(int d) {
    return QuantumChannel({Mat::Identity(d, d)});
}

QuantumChannel QuantumChannel::unitary(const Mat& u) {
    return QuantumChannel({u});
}

QuantumChannel QuantumChannel::depolarizing(int d, double p) {
    // rho -> (1-p) rho + p I/d, via the Heisenberg-Weyl family
    std::vector<Mat> ks;
    ks.push_back(std::sqrt(1.0 - p + p / (d * d)) * Mat::Identity(d, d));
    Mat x = Mat::Zero(d, d), z = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        x(i, (i + 1) % d) = 1.0;
        z(i, i) = std::polar(1.0, 2.0 * M_PI * i / d);
    }
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
            if (a == 0 && b == 0) continue;
            Mat xa = Mat::Identity(d, d), zb = Mat::Identity(d, d);
            for (int t = 0; t < a; ++t) xa = xa * x;
            for (int t = 0; t < b; ++t) zb = zb * z;
            ks.push_back(std::sqrt(p / (d * d)) * xa * zb);
        }
    return QuantumChannel(std::move(ks));
}

QuantumChannel QuantumChannel::trace_out_first(int d_drop, int d_keep) {
    std::vector<Mat> ks;
    for (int x = 0; x < d_drop; ++x) {
        Mat k = Mat::Zero(d_keep, d_drop * d_keep);
        k.block(0, x * d_keep, d_keep, d_keep) = Mat::Identity(d_keep, d_keep);
        ks.push_back(std::move(k));
    }
    return QuantumChannel(std::move(ks));
}

Mat QuantumChannel::apply(const Mat& x) const {
    Mat out = Mat::Zero(d_out, d_out);
    for (const Mat& k : kraus) out += k * x * k.adjoint();
    return out;
}

Mat QuantumChannel::adjoint_apply(const Mat& x) const {
    Mat out = Mat::Zero(d_in, d_in);
    for (const Mat& k : kraus) out += k.adjoint() * x * k;
    return out;
}

CpMap QuantumChannel::adjoint() const {
    CpMap m;
    m.d_in = d_out;
    m.d_out = d_in;
    for (const Mat& k : kraus) m.kraus.push_back(k.adjoint());
    return m;
}

Povm::Povm(std::vector<Mat> es, bool expect_rank_one) : effects(std::move(es)) {
    if (effects.empty()) throw InvalidPovm("povm: no effects");
    dim = static_cast<int>(effects.front().rows());
    Mat acc = Mat::Zero(dim, dim);
    for (const Mat& e : effects) {
        if (e.rows() != dim || e.cols() != dim)
            throw InvalidPovm("povm: inconsistent effect dimensions");
        EigH eig = eig_hermitian(hermitize(e));
        double lmax = std::max(eig.values.maxCoeff(), 0.0);
        if (eig.values.minCoeff() < -1e-10 * std::max(lmax, 1.0))
            throw InvalidPovm("povm: effect not PSD");
        acc += e;
    }
    if ((acc - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidPovm("povm: effects do not sum to identity");
    rank_one = true;
    for (const Mat& e : effects)
        if (support_rank(hermitize(e), 1e-9) > 1) rank_one = false;
    if (expect_rank_one && !rank_one)
        throw InvalidPovm("povm: rank-one flag requested but an effect has rank > 1");
}

Povm Povm::computational_basis(int d, int n_outcomes) {
    if (n_outcomes < d) n_outcomes = d;
    std::vector<Mat> es;
    for (int x = 0; x < n_outcomes; ++x) {
        Mat e = Mat::Zero(d, d);
        if (x < d) e(x, x) = 1.0;
        es.push_back(std::move(e));
    }
    return Povm(std::move(es), true);
}

Povm Povm::from_vectors(const std::vector<Vec>& vs) {
    std::vector<Mat> es;
    for (const Vec& v : vs) es.push_back(v * v.adjoint());
    return Povm(std::move(es), true);
}

std::vector<Vec> Povm::vectors() const {
    if (!rank_one) throw InvalidPovm("povm: vectors() requires rank-one effects");
    std::vector<Vec> vs;
    for (const Mat& e : effects) {
        EigH eig = eig_hermitian(hermitize(e));
        const int top = static_cast<int>(eig.values.size()) - 1;
        double l = std::max(eig.values(top), 0.0);
        vs.push_back(std::sqrt(l) * eig.vectors.col(top));
    }
    return vs;
}

Isometry::Isometry(Mat v, SubsystemShape out_shape)
    : matrix(std::move(v)), output_shape(std::move(out_shape)) {
    if (matrix.rows() != output_shape.total_dim())
        throw ShapeMismatch("isometry: output shape mismatch");
    Mat g = matrix.adjoint() * matrix;
    if ((g - Mat::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidChannel("isometry: V^dag V != I");
}

namespace {

// Lift an operator acting on one labeled factor to the full space; the factor
// dimension may change (rows != cols), producing a map between shapes.
Mat lift_on_label(const Mat& k, const SubsystemShape& shape, const std::string& label) {
    Mat acc = Mat::Identity(1, 1);
    for (int i = 0; i < shape.factor_count(); ++i) {
        if (shape.labels[i] == label)
            acc = tensor(acc, k);
        else
            acc = tensor(acc, Mat::Identity(shape.dims[i], shape.dims[i]));
    }
    return acc;
}

} // namespace

DensityOperator apply_channel(const QuantumChannel& n, const DensityOperator& rho,
                              const std::string& target_label) {
    if (rho.shape.dim_of(target_label) != n.d_in)
        throw ShapeMismatch("apply_channel: channel input does not match factor '" +
                            target_label + "'");
    std::vector<int> dims = rho.shape.dims;
    dims[rho.shape.position(target_label)] = n.d_out;
    SubsystemShape out_shape(dims, rho.shape.labels);

    Mat out = Mat::Zero(out_shape.total_dim(), out_shape.total_dim());
    for (const Mat& k : n.kraus) {
        Mat f = lift_on_label(k, rho.shape, target_label);
        out += f * rho.rho * f.adjoint();
    }
    return DensityOperator(hermitize(out), std::move(out_shape));
}

Isometry stinespring(const QuantumChannel& n, const std::string& out_label,
                     const std::string& env_label) {
    const int ne = static_cast<int>(n.kraus.size());
    Mat v = Mat::Zero(static_cast<long>(n.d_out) * ne, n.d_in);
    for (int k = 0; k < ne; ++k)
        for (int b = 0; b < n.d_out; ++b)
            for (int a = 0; a < n.d_in; ++a)
                v(static_cast<long>(b) * ne + k, a) = n.kraus[k](b, a);
    return Isometry(std::move(v),
                    SubsystemShape({n.d_out, ne}, {out_label, env_label}));
}

QuantumChannel measurement_channel(const Povm& povm) {
    const int n = povm.outcomes();
    std::vector<Mat> ks;
    for (int x = 0; x < n; ++x) {
        EigH eig = eig_hermitian(hermitize(povm.effects[x]));
        double cut = kSpectralCutoff * std::max(eig.values.maxCoeff(), 0.0);
        for (int i = 0; i < eig.values.size(); ++i) {
            if (eig.values(i) <= cut) continue;
            Mat k = Mat::Zero(n, povm.dim);
            k.row(x) = std::sqrt(eig.values(i)) * eig.vectors.col(i).adjoint();
            ks.push_back(std::move(k));
        }
    }
    return QuantumChannel(std::move(ks));
}

Isometry measurement_dilation(const Povm& povm, const std::string& out_label,
                              const std::string& env_label) {
    const int n = povm.outcomes();
    const int d = povm.dim;
    if (povm.rank_one) {
        std::vector<Vec> vs = povm.vectors();
        Mat u = Mat::Zero(static_cast<long>(n) * n, d);
        for (int x = 0; x < n; ++x)
            for (int a = 0; a < d; ++a)
                u(static_cast<long>(x) * n + x, a) = std::conj(vs[x](a));
        return Isometry(std::move(u), SubsystemShape({n, n}, {out_label, env_label}));
    }
    // |psi> -> sum_x |x>_X (sqrt(L_x)|psi>) |x>_flag, E = (system, flag)
    Mat u = Mat::Zero(static_cast<long>(n) * d * n, d);
    for (int x = 0; x < n; ++x) {
        Mat root = psd_power(hermitize(povm.effects[x]), 0.5);
        for (int ap = 0; ap < d; ++ap)
            for (int a = 0; a < d; ++a)
                u((static_cast<long>(x) * d + ap) * n + x, a) = root(ap, a);
    }
    return Isometry(std::move(u),
                    SubsystemShape({n, d * n}, {out_label, env_label}));
}

Isometry measurement_dilation_refined(const Povm& povm) {
    const int n = povm.outcomes();
    const int d = povm.dim;
    // per-effect spectral pieces, padded to a common rank so Y is one factor
    std::vector<std::vector<std::pair<double, Vec>>> pieces(n);
    int rmax = 1;
    for (int x = 0; x < n; ++x) {
        EigH eig = eig_hermitian(hermitize(povm.effects[x]));
        double cut = kSpectralCutoff * std::max(eig.values.maxCoeff(), 0.0);
        for (int i = 0; i < eig.values.size(); ++i)
            if (eig.values(i) > cut)
                pieces[x].push_back({eig.values(i), eig.vectors.col(i)});
        rmax = std::max(rmax, static_cast<int>(pieces[x].size()));
    }
    // output factors (E, XE, Y, X) with dims (d, n, rmax, n)
    SubsystemShape out({d, n, rmax, n}, {"E", "XE", "Y", "X"});
    Mat u = Mat::Zero(out.total_dim(), d);
    for (int x = 0; x < n; ++x)
        for (std::size_t y = 0; y < pieces[x].size(); ++y) {
            double mu = pieces[x][y].first;
            const Vec& phi = pieces[x][y].second;
            for (int e = 0; e < d; ++e)
                for (int a = 0; a < d; ++a) {
                    long row = ((static_cast<long>(e) * n + x) * rmax +
                                static_cast<long>(y)) * n + x;
                    u(row, a) += std::sqrt(mu) * phi(e) * std::conj(phi(a));
                }
        }
    return Isometry(std::move(u), std::move(out));
}

DensityOperator isometry_apply(const Isometry& v, const DensityOperator& rho,
                               const std::string& target_label) {
    if (rho.shape.dim_of(target_label) != v.matrix.cols())
        throw ShapeMismatch("isometry_apply: input dimension mismatch");
    Mat f = lift_on_label(v.matrix, rho.shape, target_label);
    const int pos = rho.shape.position(target_label);
    std::vector<int> dims;
    std::vector<std::string> labels;
    for (int i = 0; i < rho.shape.factor_count(); ++i) {
        if (i == pos) {
            for (int j = 0; j < v.output_shape.factor_count(); ++j) {
                dims.push_back(v.output_shape.dims[j]);
                labels.push_back(v.output_shape.labels[j]);
            }
        } else {
            dims.push_back(rho.shape.dims[i]);
            labels.push_back(rho.shape.labels[i]);
        }
    }
    return DensityOperator(hermitize(f * rho.rho * f.adjoint()),
                           SubsystemShape(std::move(dims), std::move(labels)));
}

QuantumChannel petz_map(const DensityOperator& sigma, const QuantumChannel& n,
                        bool allow_singular) {
    if (sigma.dim() != n.d_in) throw ShapeMismatch("petz_map: sigma does not match channel");
    Mat ns = hermitize(n.apply(sigma.rho));
    if (!allow_singular) {
        EigH eig = eig_hermitian(sigma.rho);
        double lmax = std::max(eig.values.maxCoeff(), 0.0);
        if (eig.values.minCoeff() <= kSpectralCutoff * lmax)
            throw SingularSigma("petz_map: sigma is singular; pass allow_singular");
        EigH eig2 = eig_hermitian(ns);
        if (eig2.values.minCoeff() <= kSpectralCutoff * std::max(eig2.values.maxCoeff(), 0.0))
            throw SingularSigma("petz_map: N(sigma) is singular; pass allow_singular");
    }
    Mat s_half = psd_power(sigma.rho, 0.5);
    Mat ns_inv_half = psd_power(ns, -0.5);
    std::vector<Mat> ks;
    for (const Mat& k : n.kraus) ks.push_back(s_half * k.adjoint() * ns_inv_half);
    return QuantumChannel(std::move(ks), allow_singular);
}

DensityOperator petz_conditional_extend(const DensityOperator& rho_abc,
                                        PetzDirection direction) {
    if (rho_abc.shape.factor_count() != 3)
        throw ShapeMismatch("petz_conditional_extend: need exactly three factors");
    const auto& ls = rho_abc.shape.labels;
    const std::string a = ls[0], b = ls[1], c = ls[2];
    const std::string& recov = direction == PetzDirection::CtoAC ? a : b;
    const std::string& other = direction == PetzDirection::CtoAC ? b : a;

    Mat rho_rc = partial_trace(rho_abc.rho, rho_abc.shape, {recov, c});
    Mat rho_oc = partial_trace(rho_abc.rho, rho_abc.shape, {other, c});
    Mat rho_c = partial_trace(rho_abc.rho, rho_abc.shape, {c});

    SubsystemShape rc_shape = rho_abc.shape.subshape({recov, c});
    Mat rc_half = embed(psd_power(hermitize(rho_rc), 0.5), rho_abc.shape, rc_shape.labels);
    Mat c_ihalf = embed(psd_power(hermitize(rho_c), -0.5), rho_abc.shape, {c});
    SubsystemShape oc_shape = rho_abc.shape.subshape({other, c});
    Mat oc_emb = embed(hermitize(rho_oc), rho_abc.shape, oc_shape.labels);

    Mat out = rc_half * c_ihalf * oc_emb * c_ihalf * rc_half;
    out = hermitize(out);
    double tr = out.trace().real();
    if (tr <= 0.0) throw SingularSigma("petz_conditional_extend: vanishing trace");
    return DensityOperator(out / tr, rho_abc.shape);
}

QuantumChannel measure_reprepare_channel(const Mat& reference_state, const Povm& rank_one) {
    if (!rank_one.rank_one)
        throw InvalidPovm("measure_reprepare_channel: need a rank-one POVM");
    Mat r_half = psd_power(reference_state, 0.5);
    std::vector<Mat> ks;
    for (const Vec& v : rank_one.vectors()) {
        double w = (v.adjoint() * reference_state * v)(0, 0).real();
        if (w <= 1e-14) continue; // effect orthogonal to the reference support
        Vec prep = r_half * v;
        ks.push_back(prep * v.adjoint() / std::sqrt(w));
    }
    if (ks.empty()) throw InvalidPovm("measure_reprepare_channel: no usable effects");
    return QuantumChannel(std::move(ks), true);
}

QuantumChannel discord_eb_channel(const DensityOperator& rho_ab, const Povm& rank_one_on_a) {
    if (rho_ab.shape.factor_count() != 2)
        throw ShapeMismatch("discord_eb_channel: need a bipartite state");
    Mat rho_a = partial_trace(rho_ab.rho, rho_ab.shape, {rho_ab.shape.labels[0]});
    return measure_reprepare_channel(hermitize(rho_a), rank_one_on_a);
}

QuantumChannel holevo_eb_channel(const DensityOperator& rho_b, const Povm& rank_one_on_b) {
    return measure_reprepare_channel(rho_b.rho, rank_one_on_b);
}

Mat choi_matrix(const QuantumChannel& n) {
    const int d = n.d_in;
    Mat choi = Mat::Zero(static_cast<long>(d) * n.d_out, static_cast<long>(d) * n.d_out);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            Mat eij = Mat::Zero(d, d);
            eij(i, j) = 1.0;
            Mat nij = n.apply(eij);
            for (int a = 0; a < n.d_out; ++a)
                for (int b = 0; b < n.d_out; ++b)
                    choi(static_cast<long>(i) * n.d_out + a,
                         static_cast<long>(j) * n.d_out + b) = nij(a, b) / double(d);
        }
    return choi;
}

} // namespace renyi
