#pragma once

#include <cstdint>
#include <functional>

#include "renyilab/linop.hpp"
#include "renyilab/rng.hpp"

namespace renyi {

enum class OptimMethod { NelderMead, PolarRetractionDescent, RandomSearch };

struct OptimizerConfig {
    int restarts = 16;
    long max_evals = 20000; // per restart
    double tol = 1e-7;
    OptimMethod method = OptimMethod::NelderMead;
    std::uint64_t seed = 0;
    int jobs = 1;
    double init_step = 0.5;
};

struct OptimResult {
    Eigen::VectorXd x;
    double value = 0.0;
    bool converged = false;
    long evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

// Minimize over R^dim with `restarts` independent starts (the warm start, when
// given, is restart 0). Reduction is deterministic: min by value, ties broken
// by restart index; restarts may run concurrently.
OptimResult minimize(const Objective& f, int dim, const OptimizerConfig& cfg,
                     const Eigen::VectorXd* warm_start = nullptr);

// Single Nelder-Mead run; best value is non-increasing across iterations.
OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step,
                        double tol, long max_evals,
                        const std::function<void(double)>& on_best = {});

// Stiefel parameterization: W = M (M^dag M)^(-1/2) of an unconstrained M.
Mat polar_retraction(const Mat& m);

Eigen::VectorXd pack_complex(const Mat& m);
Mat unpack_complex(const Eigen::VectorXd& x, int rows, int cols);

} // namespace renyi
