#pragma once

#include <limits>
#include <string>
#include <vector>

#include "renyilab/optimize.hpp"
#include "renyilab/states.hpp"

namespace renyi {

using Labels = std::vector<std::string>;

// Validated Renyi order; values within 1e-6 of 1 dispatch to the von Neumann
// branch (the closed forms are 0/0 there).
struct RenyiOrder {
    enum class Regime { Below1, One, OneToTwo, AboveTwo };

    double alpha = 1.0;
    Regime regime = Regime::One;

    static RenyiOrder of(double alpha);
    bool is_one() const { return regime == Regime::One; }
};

struct EntropicValue {
    enum class Branch { ClosedForm, Optimized, VonNeumannLimit };
    double value = 0.0;
    RenyiOrder order;
    Branch branch = Branch::ClosedForm;
};

inline double infinite_value() { return std::numeric_limits<double>::infinity(); }

double vn_entropy(const Mat& rho);
double vn_entropy(const DensityOperator& rho);

// (1/(1-alpha)) log Tr rho^alpha; alpha near 1 falls back to vn_entropy.
double renyi_entropy(const Mat& rho, double alpha);
double renyi_entropy(const DensityOperator& rho, double alpha);

// Tr rho (log rho - log sigma), +inf outside the support condition.
double vn_relative_entropy(const Mat& rho, const Mat& sigma);
double vn_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma);

// (1/(alpha-1)) log Tr rho^alpha sigma^(1-alpha) for alpha in [0,1) u (1,inf),
// +inf when supp(rho) !<= supp(sigma) and alpha > 1, or rho _|_ sigma and
// alpha < 1. Never throws on support violations; returns the +inf sentinel.
double renyi_relative_entropy(const Mat& rho, const Mat& sigma, double alpha);
double renyi_relative_entropy(const DensityOperator& rho, const DensityOperator& sigma,
                              double alpha);

// (1/(alpha-1)) log Tr (sigma^((1-alpha)/2a) rho sigma^((1-alpha)/2a))^alpha.
double sandwiched_relative_entropy(const Mat& rho, const Mat& sigma, double alpha);
double sandwiched_relative_entropy(const DensityOperator& rho,
                                   const DensityOperator& sigma, double alpha);

double vn_conditional_entropy(const DensityOperator& rho, const Labels& sys_a);

// Sibson closed form (alpha/(1-alpha)) log Tr (Tr_A rho^alpha)^(1/alpha).
double renyi_conditional_entropy(const DensityOperator& rho, const Labels& sys_a,
                                 double alpha);

double vn_mutual_info(const DensityOperator& rho, const Labels& sys_a,
                      const Labels& sys_b);

// Sibson closed form; zero on product states.
double renyi_mutual_info(const DensityOperator& rho, const Labels& sys_a,
                         const Labels& sys_b, double alpha);

// I(A;B|E) = H(AE) + H(BE) - H(E) - H(ABE).
double vn_cmi(const DensityOperator& rho, const Labels& sys_a, const Labels& sys_b,
              const Labels& sys_e);

// Sibson closed form
//   (a/(a-1)) log Tr ( r_E^((a-1)/2) Tr_A{ r_AE^((1-a)/2) r^a r_AE^((1-a)/2) }
//                      r_E^((a-1)/2) )^(1/a),
// reducing to the mutual information when sys_e is empty.
double renyi_cmi(const DensityOperator& rho, const Labels& sys_a, const Labels& sys_b,
                 const Labels& sys_e, double alpha);

// Minimization objective behind the Sibson form: the Renyi relative entropy
// between rho and the sigma_BE-dependent comparison operator, evaluated at a
// given sigma_BE. At sigma_BE = rho_BE this is the direct (non-optimized)
// Renyi conditional mutual information.
double renyi_cmi_objective(const DensityOperator& rho, const Labels& sys_a,
                           const Labels& sys_b, const Labels& sys_e,
                           const Mat& sigma_be, double alpha);

double renyi_cmi_direct(const DensityOperator& rho, const Labels& sys_a,
                        const Labels& sys_b, const Labels& sys_e, double alpha);

// Norm-based conditional mutual information
//   (1/(a-1)) log || r_ABC^1/2 r_AC^((1-a)/2a) r_C^((a-1)/2a)
//                    r_BC^((1-a)/2a) ||_{2a}^{2a}.
double sandwiched_cmi(const DensityOperator& rho, const Labels& sys_a,
                      const Labels& sys_b, const Labels& sys_e, double alpha);

struct CmiOptimizedResult {
    double value = 0.0;       // numerically minimized objective
    double closed_form = 0.0; // Sibson value
    long evaluations = 0;
    bool converged = false;
};

// Test oracle: minimize renyi_cmi_objective over sigma_BE numerically and
// report the gap to the closed form.
CmiOptimizedResult renyi_cmi_optimized_check(const DensityOperator& rho,
                                             const Labels& sys_a, const Labels& sys_b,
                                             const Labels& sys_e, double alpha,
                                             const OptimizerConfig& cfg);

} // namespace renyi
