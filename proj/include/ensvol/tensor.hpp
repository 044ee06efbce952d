#pragma once

// Kronecker product and partial trace over a product of finite factors.

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "ensvol/complex_matrix.hpp"
#include "ensvol/errors.hpp"

namespace ensvol {

// (a (x) b)[i*rb + k][j*cb + l] = a[i][j] * b[k][l].
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix r(a.rows * b.rows, a.cols * b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) {
            const Complex aij = a(i, j);
            if (aij == Complex{}) continue;
            for (std::size_t k = 0; k < b.rows; ++k)
                for (std::size_t l = 0; l < b.cols; ++l)
                    r(i * b.rows + k, j * b.cols + l) = aij * b(k, l);
        }
    return r;
}

// Reduce an operator on (x)_a H_a to the factor `keep`, tracing out all
// other factors.  Trace is preserved.
inline ComplexMatrix partial_trace(const ComplexMatrix& m,
                                   const std::vector<std::size_t>& dims,
                                   std::size_t keep) {
    if (!m.square())
        throw ValidationError("partial_trace: matrix is not square");
    if (dims.empty())
        throw ValidationError("partial_trace: empty dimension list");
    const std::size_t total =
        std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
    if (total != m.rows)
        throw ValidationError("partial_trace: product of factor dimensions does not match matrix dimension");
    if (keep >= dims.size())
        throw ValidationError("partial_trace: kept factor index out of range");

    // Row-major strides: index = sum_a idx[a] * stride[a].
    std::vector<std::size_t> stride(dims.size(), 1);
    for (std::size_t a = dims.size(); a-- > 1;) stride[a - 1] = stride[a] * dims[a];

    const std::size_t dk = dims[keep];
    const std::size_t env = total / dk;
    ComplexMatrix r(dk, dk);
    for (std::size_t e = 0; e < env; ++e) {
        // Decompose e over the non-kept axes to get the shared offset.
        std::size_t rem = e, offset = 0;
        for (std::size_t a = 0; a < dims.size(); ++a) {
            if (a == keep) continue;
            offset += (rem % dims[a]) * stride[a];
            rem /= dims[a];
        }
        for (std::size_t i = 0; i < dk; ++i)
            for (std::size_t j = 0; j < dk; ++j)
                r(i, j) += m(offset + i * stride[keep], offset + j * stride[keep]);
    }
    return r;
}

} // namespace ensvol
