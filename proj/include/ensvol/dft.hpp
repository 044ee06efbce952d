#pragma once

// Unitary discrete Fourier transform (1/sqrt(N) prefactor), naive O(N^2).
// Fine for grids up to a few thousand points; sign picks the direction and
// dft(dft(v, s), -s) == v.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "ensvol/complex_matrix.hpp"
#include "ensvol/errors.hpp"

namespace ensvol {

inline std::vector<Complex> dft(const std::vector<Complex>& v, int sign) {
    if (v.empty())
        throw ValidationError("dft: empty input");
    if (sign != 1 && sign != -1)
        throw ValidationError("dft: sign must be +1 or -1");

    const std::size_t n = v.size();
    std::vector<Complex> twiddle(n);
    for (std::size_t m = 0; m < n; ++m)
        twiddle[m] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n));

    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<Complex> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc = 0.0;
        std::size_t idx = 0;
        for (std::size_t j = 0; j < n; ++j) {
            acc += v[j] * twiddle[idx];
            idx += k;
            if (idx >= n) idx -= n;
        }
        out[k] = scale * acc;
    }
    return out;
}

} // namespace ensvol
