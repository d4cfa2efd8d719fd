#pragma once

#include <optional>

#include "renyilab/channels.hpp"
#include "renyilab/entropy.hpp"
#include "renyilab/optimize.hpp"

namespace renyi {

struct BipartiteSplit {
    Labels part_a;
    Labels part_b;
};

struct PureDecomposition {
    std::vector<double> probs;
    std::vector<Vec> vectors; // normalized, on the AB space
};

// Result of an optimization-defined measure. Values from restricted
// parameterizations are upper bounds on the true infimum; `converged` is
// false when the budget ran out (best-so-far is still returned).
struct MeasureResult {
    double value = 0.0;
    bool converged = false;
    long evaluations = 0;
    double feasibility_residual = 0.0;
    bool upper_bound = true;
    std::optional<Mat> extension_isometry;     // squashed: V from R to E (x) E'
    std::optional<Povm> measurement;            // discord argmin
    std::optional<PureDecomposition> ensemble;  // entanglement of formation argmin
};

BipartiteSplit default_split(const SubsystemShape& shape);

// Isometry R -> E (x) F reproducing a given extension omega of rho through
// (id (x) Lambda)(purification); used to warm-start the squashed optimizer
// with a known-good extension (classical flags, combined argmins, ...).
Mat extension_warm_start(const DensityOperator& rho, const DensityOperator& omega,
                         const Labels& ext_labels, int env_dim = -1);

// Flag extension sum_x p(x) psi_x (x) |x><x|_E of a known pure-state mixture.
DensityOperator flag_extension(const DensityOperator& rho,
                               const std::vector<double>& probs,
                               const std::vector<Vec>& pure_terms,
                               const std::string& ext_label);

// (1/2) inf over parameterized extensions of the Renyi CMI I_a(A;B|E); the
// extension channel acts on the purifying system as a Stiefel-parameterized
// isometry R -> E (x) E'.
MeasureResult squashed_entanglement(const DensityOperator& rho_ab, double alpha,
                                    int ext_dim, const OptimizerConfig& cfg,
                                    const Mat* warm_start = nullptr,
                                    const BipartiteSplit* split = nullptr,
                                    int env_dim = -1);

// min over pure-state decompositions (steered by rank-one POVMs on the
// purifying system) of (a/(1-a)) log sum_x p(x) Tr{(psi_A^x)^a}^(1/a).
MeasureResult eof_renyi(const DensityOperator& rho_ab, double alpha, int n_terms,
                        const OptimizerConfig& cfg, const Mat* warm_start = nullptr);

// Steering matrix reproducing a known pure-state decomposition; rows beyond
// the ensemble size are zero.
Mat eof_steering_warm_start(const DensityOperator& rho_ab,
                            const std::vector<double>& probs,
                            const std::vector<Vec>& pure_terms, int n_terms);

// E^F_{(2-a)/a}(rho) - E^sq_a(rho); the squashed run is warm-started from the
// flag extension of the formation argmin, which keeps the margin nonnegative
// up to numerics.
double eof_bound_check(const DensityOperator& rho_ab, double alpha,
                       const OptimizerConfig& cfg);

// min over rank-one POVMs on A of I_a(E;B|X) of the measurement dilation.
MeasureResult discord_renyi(const DensityOperator& rho_ab, double alpha,
                            int n_outcomes, const OptimizerConfig& cfg,
                            const Povm* warm_start = nullptr);

// Closed-form pure-state discord objective at a fixed rank-one POVM.
double discord_pure_objective(const PureState& psi_ab, const Povm& rank_one,
                              double alpha);

// Difference-of-relative-entropies discord: min over product comparison states
// minus the measured-state counterpart maximized over rank-one POVMs.
// Alternating inner minimization; best-effort heuristic, reported not gated.
MeasureResult discord_mbpds(const DensityOperator& rho_ab, double alpha,
                            const OptimizerConfig& cfg);

// objective(coarse POVM) - objective(rank-one spectral refinement); >= 0 up to
// numerics since discarding the refinement outcome only loses information.
double rank_one_refinement_test(const DensityOperator& rho_ab, const Povm& coarse,
                                double alpha);

struct CcInvarianceResult {
    double with_flag_a = 0.0;
    double with_both_flags = 0.0;
    double with_flag_b = 0.0;
};

// Squashed objectives for (A X_A; B), (A X_A; B X_B), (A; B X_B) on a
// flag-shared state with labels (XA, XB, A, B).
CcInvarianceResult cc_invariance_test(const DensityOperator& rho_flagged, double alpha,
                                      const OptimizerConfig& cfg);

} // namespace renyi
