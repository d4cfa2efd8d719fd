#pragma once

#include <doctest.h>

#include "renyilab/sampling.hpp"
#include "renyilab/states.hpp"

namespace renyi::testing {

inline Mat diag2(double a, double b) {
    Mat m = Mat::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline DensityOperator qubit_diag(double a, double b, const std::string& label = "S") {
    return DensityOperator(diag2(a, b), SubsystemShape::single(2, label));
}

inline DensityOperator pure_ket(const Vec& v, const SubsystemShape& shape) {
    Vec n = v / v.norm();
    return DensityOperator(n * n.adjoint(), shape);
}

// Partial transpose on the second factor of a bipartite state.
inline Mat partial_transpose_b(const Mat& m, int d_a, int d_b) {
    Mat out(m.rows(), m.cols());
    for (int a = 0; a < d_a; ++a)
        for (int ap = 0; ap < d_a; ++ap)
            for (int b = 0; b < d_b; ++b)
                for (int bp = 0; bp < d_b; ++bp)
                    out(a * d_b + bp, ap * d_b + b) = m(a * d_b + b, ap * d_b + bp);
    return out;
}

// Diagonal tripartite state from a joint probability array p[a][b][c].
inline DensityOperator classical_tripartite(
    const std::vector<std::vector<std::vector<double>>>& p) {
    const int da = static_cast<int>(p.size());
    const int db = static_cast<int>(p[0].size());
    const int dc = static_cast<int>(p[0][0].size());
    Mat m = Mat::Zero(da * db * dc, da * db * dc);
    for (int a = 0; a < da; ++a)
        for (int b = 0; b < db; ++b)
            for (int c = 0; c < dc; ++c) {
                long i = (static_cast<long>(a) * db + b) * dc + c;
                m(i, i) = p[a][b][c];
            }
    return DensityOperator(m, SubsystemShape({da, db, dc}, {"A", "B", "C"}));
}

} // namespace renyi::testing
