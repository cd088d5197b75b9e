#include <immintrin.h>

#include "kernels_internal.hpp"

// AVX2+FMA statevector kernels. Amplitudes are interleaved (re,im) doubles, so
// one __m256d holds two complex numbers. Complex multiply-accumulate uses the
// usual shuffle + fmaddsub trick:
//   (a+bi)(c+di) = (ac-bd) + (ad+bc)i
// with a vector of duplicated reals, duplicated imags, and a swapped operand.

namespace qts::simd {

namespace {

// acc +her u * v for two packed complex values; u broadcast as (re,re,re,re)/(im,im,im,im)
inline __m256d cmul(__m256d v, __m256d ur, __m256d ui) {
  __m256d vs = _mm256_permute_pd(v, 0x5);  // swap re/im pairs
  return _mm256_fmaddsub_pd(ur, v, _mm256_mul_pd(ui, vs));
}

inline __m256d cmul_acc(__m256d acc, __m256d v, __m256d ur, __m256d ui) {
  return _mm256_add_pd(acc, cmul(v, ur, ui));
}

void apply_1q_avx2(cplx* psi, size_t n, int t, const cplx u[4]) {
  double* p = reinterpret_cast<double*>(psi);
  const __m256d u0r = _mm256_set1_pd(u[0].real()), u0i = _mm256_set1_pd(u[0].imag());
  const __m256d u1r = _mm256_set1_pd(u[1].real()), u1i = _mm256_set1_pd(u[1].imag());
  const __m256d u2r = _mm256_set1_pd(u[2].real()), u2i = _mm256_set1_pd(u[2].imag());
  const __m256d u3r = _mm256_set1_pd(u[3].real()), u3i = _mm256_set1_pd(u[3].imag());

  if (t == 0) {
    // pairs are adjacent: each __m256d holds (a, b) for one pair
    for (size_t i = 0; i < n; i += 2) {
      __m256d ab = _mm256_loadu_pd(p + 2 * i);
      __m256d a = _mm256_permute2f128_pd(ab, ab, 0x00);  // (a, a)
      __m256d b = _mm256_permute2f128_pd(ab, ab, 0x11);  // (b, b)
      // out = (u0*a + u1*b, u2*a + u3*b)
      __m256d lo = cmul_acc(cmul(a, u0r, u0i), b, u1r, u1i);
      __m256d hi = cmul_acc(cmul(a, u2r, u2i), b, u3r, u3i);
      _mm256_storeu_pd(p + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x30));
    }
    return;
  }

  const size_t stride = size_t{1} << t;
  for (size_t base = 0; base < n; base += 2 * stride) {
    for (size_t i = base; i < base + stride; i += 2) {
      double* pa = p + 2 * i;
      double* pb = p + 2 * (i + stride);
      __m256d a = _mm256_loadu_pd(pa);
      __m256d b = _mm256_loadu_pd(pb);
      __m256d na = cmul_acc(cmul(a, u0r, u0i), b, u1r, u1i);
      __m256d nb = cmul_acc(cmul(a, u2r, u2i), b, u3r, u3i);
      _mm256_storeu_pd(pa, na);
      _mm256_storeu_pd(pb, nb);
    }
  }
}

void apply_ctrl_1q_avx2(cplx* psi, size_t n, int c, int t, const cplx u[4]) {
  double* p = reinterpret_cast<double*>(psi);
  const size_t cbit = size_t{1} << c;
  const __m256d u0r = _mm256_set1_pd(u[0].real()), u0i = _mm256_set1_pd(u[0].imag());
  const __m256d u1r = _mm256_set1_pd(u[1].real()), u1i = _mm256_set1_pd(u[1].imag());
  const __m256d u2r = _mm256_set1_pd(u[2].real()), u2i = _mm256_set1_pd(u[2].imag());
  const __m256d u3r = _mm256_set1_pd(u[3].real()), u3i = _mm256_set1_pd(u[3].imag());

  if (t == 0) {
    // adjacent pairs; control bit >= 1 is constant across a pair
    for (size_t i = 0; i < n; i += 2) {
      if (!(i & cbit)) continue;
      __m256d ab = _mm256_loadu_pd(p + 2 * i);
      __m256d a = _mm256_permute2f128_pd(ab, ab, 0x00);
      __m256d b = _mm256_permute2f128_pd(ab, ab, 0x11);
      __m256d lo = cmul_acc(cmul(a, u0r, u0i), b, u1r, u1i);
      __m256d hi = cmul_acc(cmul(a, u2r, u2i), b, u3r, u3i);
      _mm256_storeu_pd(p + 2 * i, _mm256_permute2f128_pd(lo, hi, 0x30));
    }
    return;
  }

  const size_t stride = size_t{1} << t;
  if (c == 0) {
    // control bit varies within a vector of two states: scalar fallback rows
    for (size_t base = 0; base < n; base += 2 * stride) {
      for (size_t i = base; i < base + stride; ++i) {
        if (!(i & 1)) continue;
        const cplx a = psi[i];
        const cplx b = psi[i + stride];
        psi[i] = u[0] * a + u[1] * b;
        psi[i + stride] = u[2] * a + u[3] * b;
      }
    }
    return;
  }

  for (size_t base = 0; base < n; base += 2 * stride) {
    for (size_t i = base; i < base + stride; i += 2) {
      if (!(i & cbit)) continue;
      double* pa = p + 2 * i;
      double* pb = p + 2 * (i + stride);
      __m256d a = _mm256_loadu_pd(pa);
      __m256d b = _mm256_loadu_pd(pb);
      __m256d na = cmul_acc(cmul(a, u0r, u0i), b, u1r, u1i);
      __m256d nb = cmul_acc(cmul(a, u2r, u2i), b, u3r, u3i);
      _mm256_storeu_pd(pa, na);
      _mm256_storeu_pd(pb, nb);
    }
  }
}

double expect_z_avx2(const cplx* psi, size_t n, int t) {
  const double* p = reinterpret_cast<const double*>(psi);
  const size_t stride = size_t{1} << t;
  __m256d acc = _mm256_setzero_pd();
  if (t == 0) {
    // (+|a0|^2, -|a1|^2) per adjacent pair: flip sign on the high lane
    const __m256d sign = _mm256_set_pd(-1.0, -1.0, 1.0, 1.0);
    for (size_t i = 0; i < n; i += 2) {
      __m256d v = _mm256_loadu_pd(p + 2 * i);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(sign, _mm256_mul_pd(v, v)));
    }
  } else {
    for (size_t base = 0; base < n; base += 2 * stride) {
      for (size_t i = base; i < base + stride; i += 2) {
        __m256d a = _mm256_loadu_pd(p + 2 * i);
        __m256d b = _mm256_loadu_pd(p + 2 * (i + stride));
        acc = _mm256_fmadd_pd(a, a, acc);
        acc = _mm256_fnmadd_pd(b, b, acc);
      }
    }
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

double norm_sq_avx2(const cplx* psi, size_t n) {
  const double* p = reinterpret_cast<const double*>(psi);
  __m256d acc = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d v = _mm256_loadu_pd(p + 2 * i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double lanes[4];
  _mm256_storeu_pd(lanes, acc);
  double r = lanes[0] + lanes[1] + lanes[2] + lanes[3];
  for (; i < n; ++i) r += std::norm(psi[i]);
  return r;
}

}  // namespace

namespace detail {
const KernelSet avx2_kernels = {apply_1q_avx2, apply_ctrl_1q_avx2, expect_z_avx2, norm_sq_avx2, "avx2"};
}

}  // namespace qts::simd
