#include "cacose/kernels.hpp"

namespace cacose::kernels {

namespace {

inline void matmul_row(const double* a, const double* b, double* out, int i, int k, int m) {
  double* out_row = out + static_cast<size_t>(i) * m;
  for (int j = 0; j < m; ++j) out_row[j] = 0.0;
  const double* a_row = a + static_cast<size_t>(i) * k;
  for (int l = 0; l < k; ++l) {
    const double av = a_row[l];
    if (av == 0.0) continue;
    const double* b_row = b + static_cast<size_t>(l) * m;
    for (int j = 0; j < m; ++j) out_row[j] += av * b_row[j];
  }
}

}  // namespace

void matmul(const double* a, const double* b, double* out, int n, int k, int m) {
#pragma omp parallel for schedule(static) if (static_cast<size_t>(n) * k * m > 16384)
  for (int i = 0; i < n; ++i) matmul_row(a, b, out, i, k, m);
}

void matmul_at_b(const double* a, const double* b, double* out, int n, int k, int m) {
#pragma omp parallel for schedule(static) if (static_cast<size_t>(n) * k * m > 16384)
  for (int i = 0; i < k; ++i) {
    double* out_row = out + static_cast<size_t>(i) * m;
    for (int j = 0; j < m; ++j) out_row[j] = 0.0;
    for (int l = 0; l < n; ++l) {
      const double av = a[static_cast<size_t>(l) * k + i];
      if (av == 0.0) continue;
      const double* b_row = b + static_cast<size_t>(l) * m;
      for (int j = 0; j < m; ++j) out_row[j] += av * b_row[j];
    }
  }
}

void matmul_a_bt(const double* a, const double* b, double* out, int n, int m, int k) {
#pragma omp parallel for schedule(static) if (static_cast<size_t>(n) * k * m > 16384)
  for (int i = 0; i < n; ++i) {
    double* out_row = out + static_cast<size_t>(i) * k;
    const double* a_row = a + static_cast<size_t>(i) * m;
    for (int j = 0; j < k; ++j) {
      const double* b_row = b + static_cast<size_t>(j) * m;
      double acc = 0.0;
      for (int l = 0; l < m; ++l) acc += a_row[l] * b_row[l];
      out_row[j] = acc;
    }
  }
}

namespace serial {

void matmul(const double* a, const double* b, double* out, int n, int k, int m) {
  for (int i = 0; i < n; ++i) matmul_row(a, b, out, i, k, m);
}

}  // namespace serial

}  // namespace cacose::kernels
