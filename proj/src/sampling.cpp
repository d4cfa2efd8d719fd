#include "renyilab/sampling.hpp"

#include <Eigen/QR>
#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

namespace {

Mat ginibre(int rows, int cols, SplitRng& rng) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_gaussian();
    return g;
}

} // namespace

Mat random_unitary(int d, SplitRng& rng) {
    Mat g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < d; ++i) {
        cxd rii = r(i, i);
        double m = std::abs(rii);
        q.col(i) *= (m > 0.0 ? rii / m : cxd(1.0, 0.0));
    }
    return q;
}

Mat random_isometry(int n_rows, int n_cols, SplitRng& rng) {
    if (n_rows < n_cols) throw ShapeMismatch("random_isometry: n_rows < n_cols");
    return random_unitary(n_rows, rng).leftCols(n_cols);
}

PureState random_pure(const SubsystemShape& shape, SplitRng& rng) {
    Vec v(shape.total_dim());
    for (long i = 0; i < v.size(); ++i) v(i) = rng.complex_gaussian();
    v /= v.norm();
    return PureState(std::move(v), shape);
}

DensityOperator random_density(const SubsystemShape& shape, int rank, SplitRng& rng) {
    const long d = shape.total_dim();
    if (rank < 1 || rank > d) throw ShapeMismatch("random_density: invalid rank");
    SubsystemShape big = shape.tensor_with(SubsystemShape::single(rank, "#purifier"));
    PureState psi = random_pure(big, rng);
    Mat reduced = partial_trace(psi.amplitudes * psi.amplitudes.adjoint(), big, shape.labels);
    return DensityOperator(hermitize(reduced), shape);
}

DensityOperator random_density(int dim, int rank, SplitRng& rng, const std::string& label) {
    return random_density(SubsystemShape::single(dim, label), rank, rng);
}

DensityOperator random_full_rank(const SubsystemShape& shape, SplitRng& rng,
                                 double min_eig, int max_tries) {
    const long d = shape.total_dim();
    for (int t = 0; t < max_tries; ++t) {
        DensityOperator rho = random_density(shape, static_cast<int>(d), rng);
        EigH eig = eig_hermitian(rho.rho);
        if (eig.values.minCoeff() >= min_eig) return rho;
    }
    throw Error("random_full_rank: rejection sampling exhausted");
}

QuantumChannel random_channel(int d_in, int d_out, int d_env, SplitRng& rng) {
    const long big = static_cast<long>(d_out) * d_env;
    if (big < d_in) throw ShapeMismatch("random_channel: d_out*d_env < d_in");
    Mat v = random_isometry(static_cast<int>(big), d_in, rng);
    std::vector<Mat> ks(d_env, Mat::Zero(d_out, d_in));
    for (int b = 0; b < d_out; ++b)
        for (int k = 0; k < d_env; ++k)
            for (int a = 0; a < d_in; ++a)
                ks[k](b, a) = v(static_cast<long>(b) * d_env + k, a);
    return QuantumChannel(std::move(ks));
}

Povm random_rank_one_povm(int d, int n, SplitRng& rng) {
    if (n < d) throw InvalidPovm("random_rank_one_povm: need n >= d outcomes");
    Mat w = random_isometry(n, d, rng);
    std::vector<Vec> vs;
    for (int x = 0; x < n; ++x) vs.push_back(w.row(x).adjoint());
    return Povm::from_vectors(vs);
}

Povm random_mixed_rank_povm(int d, int n, SplitRng& rng) {
    std::vector<Mat> blocks;
    Mat total = Mat::Zero(d, d);
    for (int x = 0; x < n; ++x) {
        int r = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(d)));
        Mat g = ginibre(d, r, rng);
        Mat w = g * g.adjoint();
        blocks.push_back(w);
        total += w;
    }
    Mat s_inv_half = psd_power(hermitize(total), -0.5);
    std::vector<Mat> effects;
    for (const Mat& w : blocks) effects.push_back(hermitize(s_inv_half * w * s_inv_half));
    return Povm(std::move(effects));
}

std::vector<double> random_probs(int n, SplitRng& rng) {
    std::vector<double> p(n);
    double sum = 0.0;
    for (double& v : p) {
        v = rng.exponential();
        sum += v;
    }
    for (double& v : p) v /= sum;
    return p;
}

SeparableSample random_separable(int d_a, int d_b, int n_terms, SplitRng& rng) {
    SeparableSample out;
    out.probs = random_probs(n_terms, rng);
    SubsystemShape shape({d_a, d_b}, {"A", "B"});
    Mat acc = Mat::Zero(shape.total_dim(), shape.total_dim());
    for (int t = 0; t < n_terms; ++t) {
        PureState a = random_pure(SubsystemShape::single(d_a, "A"), rng);
        PureState b = random_pure(SubsystemShape::single(d_b, "B"), rng);
        Vec amp(shape.total_dim());
        for (int i = 0; i < d_a; ++i)
            for (int j = 0; j < d_b; ++j)
                amp(static_cast<long>(i) * d_b + j) = a.amplitudes(i) * b.amplitudes(j);
        PureState prod(std::move(amp), shape);
        acc += out.probs[t] * (prod.amplitudes * prod.amplitudes.adjoint());
        out.terms.push_back(std::move(prod));
    }
    out.state = DensityOperator(hermitize(acc), shape);
    return out;
}

CqSample random_cq(int n_flags, int d_b, int rank, SplitRng& rng) {
    CqSample out;
    out.probs = random_probs(n_flags, rng);
    for (int x = 0; x < n_flags; ++x)
        out.conditionals.push_back(random_density(d_b, rank, rng, "B"));
    out.state = cq_state(out.probs, out.conditionals, "X");
    return out;
}

} // namespace renyi
