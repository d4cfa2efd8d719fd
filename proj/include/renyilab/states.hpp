#pragma once

#include <string>
#include <vector>

#include "renyilab/linop.hpp"

namespace renyi {

// Hermitian PSD unit-trace matrix with subsystem bookkeeping.
struct DensityOperator {
    Mat rho;
    SubsystemShape shape;

    DensityOperator() = default;
    DensityOperator(Mat m, SubsystemShape s);

    long dim() const { return rho.rows(); }

    DensityOperator reduce(const std::vector<std::string>& keep) const;
    DensityOperator trace_out(const std::vector<std::string>& drop) const;
    DensityOperator permuted(const std::vector<std::string>& new_order) const;

    // Fuse `group` (contiguous after permutation) into a single labeled factor.
    DensityOperator merge_labels(const std::vector<std::string>& group,
                                 const std::string& new_label) const;
};

struct PureState {
    Vec amplitudes;
    SubsystemShape shape;

    PureState() = default;
    PureState(Vec a, SubsystemShape s);

    DensityOperator density() const;
};

struct Ensemble {
    std::vector<double> probs;
    std::vector<DensityOperator> states;

    void validate() const;
    DensityOperator average() const;
};

struct SchmidtDecomposition {
    RVec coeffs;  // nonnegative, descending, squares sum to 1
    Mat basis_a;  // columns
    Mat basis_b;  // columns
};

SchmidtDecomposition schmidt(const PureState& psi);

// Canonical purification: rho = sum_i l_i |i><i|  ->  sum_i sqrt(l_i) |i>|i>_R
// with R of dimension rank(rho), appended as the last factor.
PureState purify(const DensityOperator& rho, const std::string& ref_label = "R");

// Uhlmann fidelity, squared convention: (Tr sqrt(sqrt(s) r sqrt(s)))^2.
double fidelity(const DensityOperator& rho, const DensityOperator& sigma);
double fidelity(const Mat& rho, const Mat& sigma);

double trace_distance(const DensityOperator& rho, const DensityOperator& sigma);
double trace_norm(const Mat& a);

PureState maximally_entangled(int d, const std::string& label_a = "A",
                              const std::string& label_b = "B");

// sum_x p(x) |x><x|_X (x) rho^x, with the classical flag as the FIRST factor.
DensityOperator cq_state(const std::vector<double>& probs,
                         const std::vector<DensityOperator>& conditionals,
                         const std::string& flag_label = "X");

} // namespace renyi
