// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

namespace exprkit {

// Row-major GEMM helpers over raw buffers. Single-threaded Eigen keeps every
// product bitwise reproducible for a fixed set of operand shapes.
template <typename T>
using MatMap = Eigen::Map<Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
template <typename T>
using ConstMatMap =
    Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;

// C[MxN] = A[MxK] * B[KxN]
template <typename T>
void gemm_nn(const T* a, const T* b, T* c, int m, int k, int n) {
  ConstMatMap<T> A(a, m, k), B(b, k, n);
  MatMap<T> C(c, m, n);
  C.noalias() = A * B;
}

// C[MxN] += A[MxK] * B[NxK]^T
template <typename T>
void gemm_nt_acc(const T* a, const T* b, T* c, int m, int k, int n) {
  ConstMatMap<T> A(a, m, k), B(b, n, k);
  MatMap<T> C(c, m, n);
  C.noalias() += A * B.transpose();
}

// C[MxN] = A[KxM]^T * B[KxN]
template <typename T>
void gemm_tn(const T* a, const T* b, T* c, int m, int k, int n) {
  ConstMatMap<T> A(a, k, m), B(b, k, n);
  MatMap<T> C(c, m, n);
  C.noalias() = A.transpose() * B;
}

} // namespace exprkit
