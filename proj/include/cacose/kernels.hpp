#pragma once

#include <cstddef>

namespace cacose::kernels {

// Dense row-major kernels. The OpenMP versions split work by output row, so
// every element is computed by exactly one thread with the same operation
// order as the serial versions; results are bitwise identical for any
// thread count. The serial versions are the reference used by tests and the
// benchmark.

// out[n x m] = a[n x k] * b[k x m]
void matmul(const double* a, const double* b, double* out, int n, int k, int m);

// out[k x m] = a[n x k]^T * b[n x m]   (used by matmul backward)
void matmul_at_b(const double* a, const double* b, double* out, int n, int k, int m);

// out[n x k] = a[n x m] * b[k x m]^T
void matmul_a_bt(const double* a, const double* b, double* out, int n, int m, int k);

namespace serial {
void matmul(const double* a, const double* b, double* out, int n, int k, int m);
}

}  // namespace cacose::kernels
