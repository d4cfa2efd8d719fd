#include "renyilab/linop.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "renyilab/errors.hpp"

namespace renyi {

double hermiticity_defect(const Mat& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("hermiticity_defect: non-square matrix");
    return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

Mat hermitize(const Mat& a) { return 0.5 * (a + a.adjoint()); }

HermitianOperator HermitianOperator::make(const Mat& a) {
    double defect = renyi::hermiticity_defect(a);
    double scale = 1.0 + a.cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw NonHermitianInput("hermitian operator: defect " + std::to_string(defect));
    return HermitianOperator{hermitize(a), defect};
}

EigH eig_hermitian(const Mat& a) {
    if (a.rows() != a.cols()) throw ShapeMismatch("eig_hermitian: non-square matrix");
    double defect = hermiticity_defect(a);
    double scale = 1.0 + a.cwiseAbs().maxCoeff();
    if (defect > 1e-12 * scale)
        throw NonHermitianInput("eig_hermitian: defect " + std::to_string(defect));
    Eigen::SelfAdjointEigenSolver<Mat> solver(hermitize(a));
    if (solver.info() != Eigen::Success)
        throw Error("eig_hermitian: eigensolver failed");
    return EigH{solver.eigenvalues(), solver.eigenvectors()};
}

Mat spectral_apply(const EigH& eig, const std::function<double(double)>& f,
                   double rel_cutoff) {
    const int n = static_cast<int>(eig.values.size());
    double lmax = std::max(eig.values.maxCoeff(), 0.0);
    double cut = rel_cutoff * lmax;
    RVec fv(n);
    for (int i = 0; i < n; ++i) fv(i) = eig.values(i) > cut ? f(eig.values(i)) : 0.0;
    return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

namespace {

Mat power_impl(const Mat& a, double p, double rel_cutoff, bool check_negative) {
    EigH eig = eig_hermitian(a);
    double lmax = std::max(eig.values.maxCoeff(), 0.0);
    if (check_negative && eig.values.minCoeff() < -rel_cutoff * std::max(lmax, 1e-300))
        throw NegativeEigenvalue("matrix_power: eigenvalue " +
                                 std::to_string(eig.values.minCoeff()) +
                                 " below -tau*lambda_max");
    // Positive powers are continuous at zero, so the kernel only needs to be
    // cut at the eigensolver noise floor; cutting higher would clip genuinely
    // small eigenvalues whose fractional powers still matter. The support
    // cutoff applies in full where the generalized inverse needs it (p <= 0,
    // where f blows up or jumps at the kernel).
    double cut = p > 0.0 ? std::min(rel_cutoff, 1e-14) : rel_cutoff;
    return spectral_apply(eig, [p](double x) { return p == 0.0 ? 1.0 : std::pow(x, p); },
                          cut);
}

} // namespace

Mat matrix_power(const Mat& a, double p, double rel_cutoff) {
    return power_impl(a, p, rel_cutoff, true);
}

Mat psd_power(const Mat& a, double p, double rel_cutoff) {
    return power_impl(a, p, rel_cutoff, false);
}

Mat matrix_log(const Mat& a, double rel_cutoff) {
    EigH eig = eig_hermitian(a);
    double lmax = std::max(eig.values.maxCoeff(), 0.0);
    if (eig.values.minCoeff() < -rel_cutoff * std::max(lmax, 1e-300))
        throw NegativeEigenvalue("matrix_log: negative eigenvalue");
    return spectral_apply(eig, [](double x) { return std::log(x); }, rel_cutoff);
}

Mat matrix_exp(const Mat& a) {
    EigH eig = eig_hermitian(a);
    const int n = static_cast<int>(eig.values.size());
    RVec fv(n);
    for (int i = 0; i < n; ++i) fv(i) = std::exp(eig.values(i));
    return eig.vectors * fv.asDiagonal() * eig.vectors.adjoint();
}

Mat support_projector(const Mat& a, double rel_cutoff) {
    return psd_power(a, 0.0, rel_cutoff);
}

int support_rank(const Mat& a, double rel_cutoff) {
    EigH eig = eig_hermitian(a);
    double cut = rel_cutoff * std::max(eig.values.maxCoeff(), 0.0);
    int r = 0;
    for (int i = 0; i < eig.values.size(); ++i)
        if (eig.values(i) > cut) ++r;
    return r;
}

double alpha_norm(const Mat& x, double alpha) {
    if (alpha <= 0.0) throw Error("alpha_norm: alpha must be positive");
    Eigen::JacobiSVD<Mat> svd(x);
    RVec sv = svd.singularValues();
    double smax = sv.size() ? sv.maxCoeff() : 0.0;
    if (smax <= 0.0) return 0.0;
    // Singular values at roundoff level are dropped; for alpha < 1 they would
    // otherwise leak amplified noise into the quasi-norm.
    double cut = 1e-12 * smax;
    double sum = 0.0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut) sum += std::pow(sv(i), alpha);
    return std::pow(sum, 1.0 / alpha);
}

Mat tensor(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (long i = 0; i < a.rows(); ++i)
        for (long j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

std::vector<long> subsystem_offsets(const SubsystemShape& shape,
                                    const std::vector<std::string>& subset) {
    const int k = shape.factor_count();
    std::vector<long> strides(k, 1);
    for (int i = k - 2; i >= 0; --i) strides[i] = strides[i + 1] * shape.dims[i + 1];

    std::vector<int> positions;
    for (const auto& l : subset) positions.push_back(shape.position(l));

    long total = 1;
    for (int p : positions) total *= shape.dims[p];

    std::vector<long> offsets(total, 0);
    long repeat = total;
    for (std::size_t s = 0; s < positions.size(); ++s) {
        const int p = positions[s];
        const int d = shape.dims[p];
        repeat /= d;
        long block = repeat;
        long idx = 0;
        while (idx < total) {
            for (int v = 0; v < d; ++v)
                for (long r = 0; r < block; ++r) offsets[idx++] += v * strides[p];
        }
    }
    return offsets;
}

Mat partial_trace(const Mat& m, const SubsystemShape& shape,
                  const std::vector<std::string>& keep) {
    if (m.rows() != shape.total_dim() || m.cols() != shape.total_dim())
        throw ShapeMismatch("partial_trace: matrix does not match shape");
    std::vector<std::string> drop = shape.complement(keep);
    // keep in shape order
    std::vector<std::string> keep_ordered = shape.subshape(keep).labels;
    if (keep_ordered.size() != keep.size())
        throw ShapeMismatch("partial_trace: unknown keep label");

    std::vector<long> keep_off = subsystem_offsets(shape, keep_ordered);
    std::vector<long> drop_off = subsystem_offsets(shape, drop);

    const long dk = static_cast<long>(keep_off.size());
    Mat out = Mat::Zero(dk, dk);
    for (long r = 0; r < dk; ++r)
        for (long c = 0; c < dk; ++c) {
            cxd acc(0.0, 0.0);
            for (long t : drop_off) acc += m(keep_off[r] + t, keep_off[c] + t);
            out(r, c) = acc;
        }
    return out;
}

Mat partial_trace_out(const Mat& m, const SubsystemShape& shape,
                      const std::vector<std::string>& drop) {
    return partial_trace(m, shape, shape.complement(drop));
}

Mat embed(const Mat& op, const SubsystemShape& full,
          const std::vector<std::string>& op_labels) {
    std::vector<std::string> sub_ordered = full.subshape(op_labels).labels;
    if (sub_ordered.size() != op_labels.size())
        throw ShapeMismatch("embed: unknown label");
    if (sub_ordered != op_labels)
        throw ShapeMismatch("embed: labels must follow the shape's factor order");
    long ds = full.dim_of_set(op_labels);
    if (op.rows() != ds || op.cols() != ds)
        throw ShapeMismatch("embed: operator does not match sub-shape dimension");

    std::vector<long> sub_off = subsystem_offsets(full, sub_ordered);
    std::vector<long> rest_off = subsystem_offsets(full, full.complement(op_labels));

    const long d = full.total_dim();
    Mat out = Mat::Zero(d, d);
    for (long r = 0; r < static_cast<long>(sub_off.size()); ++r)
        for (long c = 0; c < static_cast<long>(sub_off.size()); ++c) {
            const cxd v = op(r, c);
            if (v == cxd(0.0, 0.0)) continue;
            for (long t : rest_off) out(sub_off[r] + t, sub_off[c] + t) = v;
        }
    return out;
}

Mat permute_systems(const Mat& m, const SubsystemShape& shape,
                    const std::vector<std::string>& new_order) {
    if (static_cast<int>(new_order.size()) != shape.factor_count())
        throw ShapeMismatch("permute_systems: order must list every label");
    SubsystemShape target(
        [&] {
            std::vector<int> d;
            for (const auto& l : new_order) d.push_back(shape.dim_of(l));
            return d;
        }(),
        new_order);

    // map each basis index of the target layout to the source layout
    std::vector<long> src_of(shape.total_dim());
    const int k = shape.factor_count();
    std::vector<long> src_strides(k, 1), tgt_strides(k, 1);
    for (int i = k - 2; i >= 0; --i) {
        src_strides[i] = src_strides[i + 1] * shape.dims[i + 1];
        tgt_strides[i] = tgt_strides[i + 1] * target.dims[i + 1];
    }
    std::vector<int> src_pos;
    for (const auto& l : new_order) src_pos.push_back(shape.position(l));

    for (long t = 0; t < target.total_dim(); ++t) {
        long rem = t, s = 0;
        for (int i = 0; i < k; ++i) {
            long v = rem / tgt_strides[i];
            rem %= tgt_strides[i];
            s += v * src_strides[src_pos[i]];
        }
        src_of[t] = s;
    }

    const long d = shape.total_dim();
    Mat out(d, d);
    for (long r = 0; r < d; ++r)
        for (long c = 0; c < d; ++c) out(r, c) = m(src_of[r], src_of[c]);
    return out;
}

} // namespace renyi
