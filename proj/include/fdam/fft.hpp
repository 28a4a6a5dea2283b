#pragma once

#include "fdam/tensor.hpp"

namespace fdam {

// 2D DFT over H×W grids. Convention: forward transform is unnormalized, so
// F(0,0) is the plain sum of the input; the inverse carries the 1/(H*W)
// factor. A real input yields a Hermitian-symmetric spectrum.
ComplexTensor dft2(const Tensor& x);
ComplexTensor dft2(const ComplexTensor& x);
ComplexTensor idft2(const ComplexTensor& f);

// Cyclic shift moving the DC bin to (floor(H/2), floor(W/2)) and back.
// fftshift2 is self-inverse only for even extents; use ifftshift2 otherwise.
ComplexTensor fftshift2(const ComplexTensor& f);
ComplexTensor ifftshift2(const ComplexTensor& f);
Tensor fftshift2(const Tensor& m);
Tensor ifftshift2(const Tensor& m);

// F(u,v) == conj(F((H-u) mod H, (W-v) mod W)) within tol, everywhere.
bool hermitian_symmetric(const ComplexTensor& f, double tol = 1e-9);

namespace reference {
// Serial twins of the transforms above: same arithmetic, no OpenMP. Kept so
// tests can assert bit-identity with the parallel path and the benchmark can
// compare them.
ComplexTensor dft2(const ComplexTensor& x);
ComplexTensor idft2(const ComplexTensor& f);
}  // namespace reference

}  // namespace fdam
