#include <doctest.h>

#include "renyilab/optimize.hpp"
#include "renyilab/rng.hpp"
#include "renyilab/sampling.hpp"

using namespace renyi;

TEST_CASE("nelder-mead minimizes a smooth bowl") {
    Objective f = [](const Eigen::VectorXd& x) {
        double v = 0.0;
        for (long i = 0; i < x.size(); ++i) v += (x(i) - 0.3 * i) * (x(i) - 0.3 * i);
        return v;
    };
    OptimizerConfig cfg;
    cfg.restarts = 2;
    cfg.max_evals = 8000;
    cfg.tol = 1e-12;
    cfg.seed = 3;
    OptimResult res = minimize(f, 6, cfg);
    CHECK(res.value < 1e-8);
    CHECK(res.converged);
}

TEST_CASE("restart reduction is deterministic, serial equals parallel") {
    Objective f = [](const Eigen::VectorXd& x) {
        return std::cos(3.0 * x(0)) + 0.05 * x(0) * x(0) + x(1) * x(1);
    };
    OptimizerConfig cfg;
    cfg.restarts = 6;
    cfg.max_evals = 2000;
    cfg.seed = 11;
    OptimResult serial = minimize(f, 2, cfg);
    OptimResult again = minimize(f, 2, cfg);
    CHECK(serial.value == again.value);
    CHECK((serial.x - again.x).norm() == 0.0);

    OptimizerConfig par = cfg;
    par.jobs = 2;
    OptimResult parallel = minimize(f, 2, par);
    CHECK(serial.value == parallel.value);
    CHECK((serial.x - parallel.x).norm() == 0.0);
}

TEST_CASE("best value is monotone across iterations") {
    Objective f = [](const Eigen::VectorXd& x) { return x.squaredNorm(); };
    std::vector<double> history;
    Eigen::VectorXd x0 = Eigen::VectorXd::Constant(4, 2.0);
    nelder_mead(f, x0, 0.5, 1e-10, 2000, [&](double v) { history.push_back(v); });
    for (std::size_t i = 1; i < history.size(); ++i) CHECK(history[i] <= history[i - 1]);
}

TEST_CASE("alternate methods reach the same basin") {
    Objective f = [](const Eigen::VectorXd& x) { return (x.array() - 1.0).square().sum(); };
    for (OptimMethod m : {OptimMethod::RandomSearch, OptimMethod::PolarRetractionDescent}) {
        OptimizerConfig cfg;
        cfg.method = m;
        cfg.restarts = 2;
        cfg.max_evals = m == OptimMethod::RandomSearch ? 20000 : 5000;
        cfg.seed = 5;
        OptimResult res = minimize(f, 3, cfg);
        CHECK(res.value < (m == OptimMethod::RandomSearch ? 1e-2 : 1e-6));
    }
}

TEST_CASE("polar retraction lands on the Stiefel manifold") {
    SplitRng rng(71);
    for (int t = 0; t < 10; ++t) {
        Mat m(5, 3);
        for (int i = 0; i < 5; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = rng.complex_gaussian();
        Mat v = polar_retraction(m);
        CHECK((v.adjoint() * v - Mat::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
        // already-isometric input is a fixed point
        CHECK((polar_retraction(v) - v).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("complex packing round trip") {
    SplitRng rng(72);
    Mat m(3, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 2; ++j) m(i, j) = rng.complex_gaussian();
    CHECK((unpack_complex(pack_complex(m), 3, 2) - m).cwiseAbs().maxCoeff() == 0.0);
}
