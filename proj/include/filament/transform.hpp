#pragma once

#include <complex>
#include <vector>

namespace filament::transform {

// Smallest N >= n whose prime factors are all in {2,3,5}.
int next_fast_size(int n);

// Unnormalized inverse DFT: grid[i*ns+m] = sum_{j,k} coeff(bin(j),bin(k))
// e^{2 pi i (j i / nt + k m / ns)}. Coefficients are given already packed
// into wrap-around bins (row-major nt x ns).
void backward_2d(std::vector<std::complex<double>>& data, int nt, int ns);

// Forward DFT divided by nt*ns, inverse of backward_2d.
void forward_2d(std::vector<std::complex<double>>& data, int nt, int ns);

void backward_1d(std::vector<std::complex<double>>& data, int n);
void forward_1d(std::vector<std::complex<double>>& data, int n);

}  // namespace filament::transform
