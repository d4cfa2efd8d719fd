#include "renyilab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <vector>

#include "renyilab/errors.hpp"

namespace renyi {

Mat polar_retraction(const Mat& m) {
    Mat gram = hermitize(m.adjoint() * m);
    return m * psd_power(gram, -0.5);
}

Eigen::VectorXd pack_complex(const Mat& m) {
    Eigen::VectorXd x(2 * m.size());
    long idx = 0;
    for (long j = 0; j < m.cols(); ++j)
        for (long i = 0; i < m.rows(); ++i) {
            x(idx++) = m(i, j).real();
            x(idx++) = m(i, j).imag();
        }
    return x;
}

Mat unpack_complex(const Eigen::VectorXd& x, int rows, int cols) {
    if (x.size() != 2L * rows * cols) throw ShapeMismatch("unpack_complex: size mismatch");
    Mat m(rows, cols);
    long idx = 0;
    for (int j = 0; j < cols; ++j)
        for (int i = 0; i < rows; ++i) {
            m(i, j) = cxd(x(idx), x(idx + 1));
            idx += 2;
        }
    return m;
}

OptimResult nelder_mead(const Objective& f, const Eigen::VectorXd& x0, double step,
                        double tol, long max_evals,
                        const std::function<void(double)>& on_best) {
    const int n = static_cast<int>(x0.size());
    const double alpha = 1.0, gamma = 2.0, rho = 0.5, sigma = 0.5;

    std::vector<Eigen::VectorXd> x(n + 1, x0);
    std::vector<double> fx(n + 1);
    long evals = 0;
    for (int i = 0; i < n; ++i) x[i + 1](i) += step;
    for (int i = 0; i <= n; ++i) {
        fx[i] = f(x[i]);
        ++evals;
    }

    auto order = [&] {
        std::vector<int> idx(n + 1);
        for (int i = 0; i <= n; ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](int a, int b) { return fx[a] < fx[b]; });
        std::vector<Eigen::VectorXd> xs(n + 1);
        std::vector<double> fs(n + 1);
        for (int i = 0; i <= n; ++i) {
            xs[i] = x[idx[i]];
            fs[i] = fx[idx[i]];
        }
        x = std::move(xs);
        fx = std::move(fs);
    };
    order();
    double best = fx[0];
    if (on_best) on_best(best);

    bool converged = false;
    while (evals < max_evals) {
        double spread = std::abs(fx[n] - fx[0]);
        if (spread < tol * (1.0 + std::abs(fx[0]))) {
            converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < n; ++i) centroid += x[i];
        centroid /= n;

        Eigen::VectorXd xr = centroid + alpha * (centroid - x[n]);
        double fr = f(xr);
        ++evals;
        if (fr < fx[0]) {
            Eigen::VectorXd xe = centroid + gamma * (centroid - x[n]);
            double fe = f(xe);
            ++evals;
            if (fe < fr) {
                x[n] = xe;
                fx[n] = fe;
            } else {
                x[n] = xr;
                fx[n] = fr;
            }
        } else if (fr < fx[n - 1]) {
            x[n] = xr;
            fx[n] = fr;
        } else {
            Eigen::VectorXd xc = centroid + rho * (x[n] - centroid);
            double fc = f(xc);
            ++evals;
            if (fc < fx[n]) {
                x[n] = xc;
                fx[n] = fc;
            } else {
                for (int i = 1; i <= n; ++i) {
                    x[i] = x[0] + sigma * (x[i] - x[0]);
                    fx[i] = f(x[i]);
                    ++evals;
                }
            }
        }
        order();
        if (fx[0] < best) {
            best = fx[0];
            if (on_best) on_best(best);
        }
    }
    return OptimResult{x[0], fx[0], converged, evals};
}

namespace {

OptimResult random_search(const Objective& f, const Eigen::VectorXd& x0, double step,
                          long max_evals, SplitRng rng) {
    OptimResult best{x0, f(x0), false, 1};
    while (best.evaluations < max_evals) {
        Eigen::VectorXd cand = best.x;
        for (long i = 0; i < cand.size(); ++i) cand(i) += step * rng.gaussian();
        double v = f(cand);
        ++best.evaluations;
        if (v < best.value) {
            best.value = v;
            best.x = cand;
        }
    }
    best.converged = true;
    return best;
}

// Finite-difference gradient descent with backtracking; the workhorse when a
// smoother descent than Nelder-Mead is wanted on retraction coordinates.
OptimResult fd_descent(const Objective& f, const Eigen::VectorXd& x0, double tol,
                       long max_evals) {
    const int n = static_cast<int>(x0.size());
    const double h = 1e-6;
    Eigen::VectorXd x = x0;
    double fx = f(x);
    long evals = 1;
    bool converged = false;
    double lr = 0.5;
    while (evals + n + 1 < max_evals) {
        Eigen::VectorXd g(n);
        for (int i = 0; i < n; ++i) {
            Eigen::VectorXd xp = x;
            xp(i) += h;
            g(i) = (f(xp) - fx) / h;
            ++evals;
        }
        double gn = g.norm();
        if (gn < tol) {
            converged = true;
            break;
        }
        bool improved = false;
        for (int bt = 0; bt < 30 && evals < max_evals; ++bt) {
            Eigen::VectorXd cand = x - lr * g;
            double fc = f(cand);
            ++evals;
            if (fc < fx - 1e-12) {
                x = cand;
                fx = fc;
                lr *= 1.5;
                improved = true;
                break;
            }
            lr *= 0.5;
        }
        if (!improved) {
            converged = gn < std::sqrt(tol);
            break;
        }
    }
    return OptimResult{x, fx, converged, evals};
}

OptimResult run_one(const Objective& f, int dim, const OptimizerConfig& cfg,
                    const Eigen::VectorXd* warm, int restart) {
    SplitRng rng(cfg.seed);
    SplitRng stream = rng.split(0x52535452ull + restart);
    Eigen::VectorXd x0(dim);
    if (restart == 0 && warm != nullptr) {
        x0 = *warm;
    } else {
        for (int i = 0; i < dim; ++i) x0(i) = stream.gaussian();
    }
    switch (cfg.method) {
        case OptimMethod::RandomSearch:
            return random_search(f, x0, cfg.init_step, cfg.max_evals, stream.split(1));
        case OptimMethod::PolarRetractionDescent:
            return fd_descent(f, x0, cfg.tol, cfg.max_evals);
        case OptimMethod::NelderMead:
        default:
            return nelder_mead(f, x0, cfg.init_step, cfg.tol, cfg.max_evals);
    }
}

} // namespace

OptimResult minimize(const Objective& f, int dim, const OptimizerConfig& cfg,
                     const Eigen::VectorXd* warm_start) {
    if (cfg.restarts < 1) throw Error("minimize: restarts must be >= 1");
    std::vector<OptimResult> results(cfg.restarts);
    if (cfg.jobs > 1) {
        std::vector<std::future<OptimResult>> futs;
        for (int r = 0; r < cfg.restarts; ++r)
            futs.push_back(std::async(std::launch::async, [&, r] {
                return run_one(f, dim, cfg, warm_start, r);
            }));
        for (int r = 0; r < cfg.restarts; ++r) results[r] = futs[r].get();
    } else {
        for (int r = 0; r < cfg.restarts; ++r) results[r] = run_one(f, dim, cfg, warm_start, r);
    }
    long total_evals = 0;
    int best = 0;
    for (int r = 0; r < cfg.restarts; ++r) {
        total_evals += results[r].evaluations;
        if (results[r].value < results[best].value) best = r;
    }
    OptimResult out = results[best];
    out.evaluations = total_evals;
    return out;
}

} // namespace renyi
