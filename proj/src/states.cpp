#include "renyilab/states.hpp"

#include <Eigen/SVD>
#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

DensityOperator::DensityOperator(Mat m, SubsystemShape s)
    : rho(std::move(m)), shape(std::move(s)) {
    if (rho.rows() != rho.cols() || rho.rows() != shape.total_dim())
        throw ShapeMismatch("density operator: matrix does not match shape");
    double scale = 1.0 + rho.cwiseAbs().maxCoeff();
    if (hermiticity_defect(rho) > 1e-10 * scale)
        throw InvalidState("density operator: not Hermitian");
    double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > 1e-8)
        throw InvalidState("density operator: trace " + std::to_string(tr));
    EigH eig = eig_hermitian(rho);
    double lmax = std::max(eig.values.maxCoeff(), 0.0);
    if (eig.values.minCoeff() < -1e-8 * std::max(lmax, 1e-300))
        throw InvalidState("density operator: negative eigenvalue " +
                           std::to_string(eig.values.minCoeff()));
}

DensityOperator DensityOperator::reduce(const std::vector<std::string>& keep) const {
    return DensityOperator(hermitize(partial_trace(rho, shape, keep)), shape.subshape(keep));
}

DensityOperator DensityOperator::trace_out(const std::vector<std::string>& drop) const {
    return reduce(shape.complement(drop));
}

DensityOperator DensityOperator::permuted(const std::vector<std::string>& new_order) const {
    Mat m = permute_systems(rho, shape, new_order);
    std::vector<int> d;
    for (const auto& l : new_order) d.push_back(shape.dim_of(l));
    return DensityOperator(std::move(m), SubsystemShape(std::move(d), new_order));
}

DensityOperator DensityOperator::merge_labels(const std::vector<std::string>& group,
                                              const std::string& new_label) const {
    // move the group to the back, then fuse it into one factor
    std::vector<std::string> order = shape.complement(group);
    std::vector<std::string> ordered_group = shape.subshape(group).labels;
    order.insert(order.end(), ordered_group.begin(), ordered_group.end());
    DensityOperator p = permuted(order);

    std::vector<int> dims;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i + group.size() < order.size(); ++i) {
        dims.push_back(p.shape.dims[i]);
        labels.push_back(p.shape.labels[i]);
    }
    int fused = 1;
    for (std::size_t i = order.size() - group.size(); i < order.size(); ++i)
        fused *= p.shape.dims[i];
    dims.push_back(fused);
    labels.push_back(new_label);
    return DensityOperator(p.rho, SubsystemShape(std::move(dims), std::move(labels)));
}

PureState::PureState(Vec a, SubsystemShape s) : amplitudes(std::move(a)), shape(std::move(s)) {
    if (amplitudes.size() != shape.total_dim())
        throw ShapeMismatch("pure state: amplitude size does not match shape");
    if (std::abs(amplitudes.norm() - 1.0) > 1e-12)
        throw InvalidState("pure state: norm " + std::to_string(amplitudes.norm()));
}

DensityOperator PureState::density() const {
    return DensityOperator(amplitudes * amplitudes.adjoint(), shape);
}

void Ensemble::validate() const {
    if (probs.size() != states.size() || probs.empty())
        throw InvalidState("ensemble: probs/states size mismatch");
    double sum = 0.0;
    for (double p : probs) {
        if (p < -1e-12) throw InvalidState("ensemble: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw InvalidState("ensemble: probabilities sum to " + std::to_string(sum));
    for (const auto& s : states)
        if (!(s.shape == states.front().shape))
            throw ShapeMismatch("ensemble: states on different shapes");
}

DensityOperator Ensemble::average() const {
    validate();
    Mat acc = Mat::Zero(states.front().dim(), states.front().dim());
    for (std::size_t i = 0; i < probs.size(); ++i) acc += probs[i] * states[i].rho;
    return DensityOperator(acc, states.front().shape);
}

SchmidtDecomposition schmidt(const PureState& psi) {
    if (psi.shape.factor_count() != 2)
        throw ShapeMismatch("schmidt: state must have exactly two factors");
    const int da = psi.shape.dims[0], db = psi.shape.dims[1];
    Mat m(da, db);
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b) m(a, b) = psi.amplitudes(a * db + b);
    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtDecomposition out;
    out.coeffs = svd.singularValues();
    out.basis_a = svd.matrixU();
    out.basis_b = svd.matrixV().conjugate();
    return out;
}

PureState purify(const DensityOperator& rho, const std::string& ref_label) {
    EigH eig = eig_hermitian(rho.rho);
    double cut = kSpectralCutoff * std::max(eig.values.maxCoeff(), 0.0);
    std::vector<int> kept;
    for (int i = static_cast<int>(eig.values.size()) - 1; i >= 0; --i)
        if (eig.values(i) > cut) kept.push_back(i); // descending
    const int r = static_cast<int>(kept.size());
    const long d = rho.dim();
    Vec amp = Vec::Zero(d * r);
    double norm2 = 0.0;
    for (int k = 0; k < r; ++k) norm2 += eig.values(kept[k]);
    for (int k = 0; k < r; ++k) {
        double w = std::sqrt(eig.values(kept[k]) / norm2);
        for (long i = 0; i < d; ++i) amp(i * r + k) = w * eig.vectors(i, kept[k]);
    }
    SubsystemShape shape = rho.shape.tensor_with(SubsystemShape::single(r, ref_label));
    return PureState(std::move(amp), std::move(shape));
}

double fidelity(const Mat& rho, const Mat& sigma) {
    if (rho.rows() != sigma.rows()) throw ShapeMismatch("fidelity: dimension mismatch");
    Mat s = psd_power(sigma, 0.5);
    EigH eig = eig_hermitian(hermitize(s * rho * s));
    double acc = 0.0;
    for (int i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) > 0.0) acc += std::sqrt(eig.values(i));
    double f = acc * acc;
    return f < 0.0 ? 0.0 : (f > 1.0 + 1e-9 ? f : std::min(f, 1.0));
}

double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    return fidelity(rho.rho, sigma.rho);
}

double trace_norm(const Mat& a) {
    EigH eig = eig_hermitian(hermitize(a));
    return eig.values.cwiseAbs().sum();
}

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dim() != sigma.dim()) throw ShapeMismatch("trace_distance: dimension mismatch");
    return trace_norm(rho.rho - sigma.rho);
}

PureState maximally_entangled(int d, const std::string& label_a, const std::string& label_b) {
    Vec amp = Vec::Zero(static_cast<long>(d) * d);
    double w = 1.0 / std::sqrt(static_cast<double>(d));
    for (int i = 0; i < d; ++i) amp(static_cast<long>(i) * d + i) = w;
    return PureState(std::move(amp), SubsystemShape({d, d}, {label_a, label_b}));
}

DensityOperator cq_state(const std::vector<double>& probs,
                         const std::vector<DensityOperator>& conditionals,
                         const std::string& flag_label) {
    if (probs.size() != conditionals.size() || probs.empty())
        throw InvalidState("cq_state: probs/states mismatch");
    const int n = static_cast<int>(probs.size());
    const long d = conditionals.front().dim();
    Mat out = Mat::Zero(n * d, n * d);
    for (int x = 0; x < n; ++x) {
        if (!(conditionals[x].shape == conditionals.front().shape))
            throw ShapeMismatch("cq_state: conditional shapes differ");
        out.block(x * d, x * d, d, d) = probs[x] * conditionals[x].rho;
    }
    SubsystemShape shape =
        SubsystemShape::single(n, flag_label).tensor_with(conditionals.front().shape);
    return DensityOperator(std::move(out), std::move(shape));
}

} // namespace renyi
