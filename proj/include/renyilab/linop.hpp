#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "renyilab/shape.hpp"

namespace renyi {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using cxd = std::complex<double>;

// Relative spectral cutoff: eigenvalues in (-tau*lambda_max, tau*lambda_max]
// are treated as exact zeros by every matrix function.
inline constexpr double kSpectralCutoff = 1e-10;

// Validated Hermitian operator; the defect is max_ij |A - A^dag|.
struct HermitianOperator {
    Mat entries;
    double hermiticity_defect = 0.0;

    static HermitianOperator make(const Mat& a);
    int dim() const { return static_cast<int>(entries.rows()); }
};

struct EigH {
    RVec values; // ascending
    Mat vectors; // columns
};

double hermiticity_defect(const Mat& a);
Mat hermitize(const Mat& a);

// Eigendecomposition of a Hermitian matrix; throws NonHermitianInput when the
// defect exceeds 1e-12 * (1 + max entry magnitude).
EigH eig_hermitian(const Mat& a);

// f applied to the spectrum above the cutoff; eigenvalues at or below the
// cutoff are mapped to zero (generalized-inverse convention).
Mat spectral_apply(const EigH& eig, const std::function<double(double)>& f,
                   double rel_cutoff = kSpectralCutoff);

// A^p with the generalized-inverse convention. p = 0 returns the support
// projector. Throws NegativeEigenvalue if an eigenvalue < -tau*lambda_max.
Mat matrix_power(const Mat& a, double p, double rel_cutoff = kSpectralCutoff);

// Same convention as matrix_power, but silently clamps small negative
// eigenvalues to zero. Evaluation pipelines use this on operators that are PSD
// by construction so that roundoff never aborts a computation.
Mat psd_power(const Mat& a, double p, double rel_cutoff = kSpectralCutoff);

// log restricted to the positive spectrum (log 0 -> 0 on the kernel).
Mat matrix_log(const Mat& a, double rel_cutoff = kSpectralCutoff);

// Ordinary Hermitian exponential (the full spectrum; indefinite inputs are
// fine, which the relative-entropy rewrites need).
Mat matrix_exp(const Mat& a);

Mat support_projector(const Mat& a, double rel_cutoff = kSpectralCutoff);
int support_rank(const Mat& a, double rel_cutoff = kSpectralCutoff);

// (Tr |X|^alpha)^(1/alpha) with |X| = sqrt(X^dag X); a quasi-norm for
// alpha < 1. Computed from singular values.
double alpha_norm(const Mat& x, double alpha);

Mat tensor(const Mat& a, const Mat& b);

// Trace out everything not in `keep`; remaining labels keep their order.
Mat partial_trace(const Mat& m, const SubsystemShape& shape,
                  const std::vector<std::string>& keep);

Mat partial_trace_out(const Mat& m, const SubsystemShape& shape,
                      const std::vector<std::string>& drop);

// Pad an operator on a label subset with identities on the absent labels,
// in the full shape's factor order.
Mat embed(const Mat& op, const SubsystemShape& full,
          const std::vector<std::string>& op_labels);

// Reorder tensor factors; returns the matrix in the new label order.
Mat permute_systems(const Mat& m, const SubsystemShape& shape,
                    const std::vector<std::string>& new_order);

// Flat offsets of the sub-index multi-indices within the full index space;
// the building block for partial_trace / embed.
std::vector<long> subsystem_offsets(const SubsystemShape& shape,
                                    const std::vector<std::string>& subset);

} // namespace renyi
