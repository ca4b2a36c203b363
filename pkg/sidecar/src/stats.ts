/**
 * Frechet distance between feature sets:
 *   |mu1 - mu2|^2 + tr(S1 + S2 - 2 sqrt(S1 S2))
 * with tr sqrt(S1 S2) computed as tr sqrt(sqrt(S1) S2 sqrt(S1)), which is
 * symmetric PSD, via a cyclic Jacobi eigensolver.
 */

export interface Moments {
  mean: Float64Array;
  cov: Float64Array; // dim x dim, row-major
  dim: number;
}

export function moments(features: Float64Array[]): Moments {
  const n = features.length;
  const dim = features[0].length;
  const mean = new Float64Array(dim);
  for (const f of features) {
    for (let i = 0; i < dim; i++) {
      mean[i] += f[i];
    }
  }
  for (let i = 0; i < dim; i++) {
    mean[i] /= n;
  }
  const cov = new Float64Array(dim * dim);
  const denom = Math.max(n - 1, 1);
  for (const f of features) {
    for (let i = 0; i < dim; i++) {
      const di = f[i] - mean[i];
      for (let j = i; j < dim; j++) {
        cov[i * dim + j] += (di * (f[j] - mean[j])) / denom;
      }
    }
  }
  for (let i = 0; i < dim; i++) {
    for (let j = 0; j < i; j++) {
      cov[i * dim + j] = cov[j * dim + i];
    }
  }
  return { mean, cov, dim };
}

/** Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations. */
export function symmetricEigenvalues(matrix: Float64Array, dim: number): {
  values: Float64Array;
  vectors: Float64Array;
} {
  const a = Float64Array.from(matrix);
  const v = new Float64Array(dim * dim);
  for (let i = 0; i < dim; i++) {
    v[i * dim + i] = 1;
  }
  const maxSweeps = 64;
  for (let sweep = 0; sweep < maxSweeps; sweep++) {
    let off = 0;
    for (let i = 0; i < dim; i++) {
      for (let j = i + 1; j < dim; j++) {
        off += a[i * dim + j] * a[i * dim + j];
      }
    }
    if (off < 1e-22 * dim * dim) {
      break;
    }
    for (let p = 0; p < dim - 1; p++) {
      for (let q = p + 1; q < dim; q++) {
        const apq = a[p * dim + q];
        if (Math.abs(apq) < 1e-300) {
          continue;
        }
        const app = a[p * dim + p];
        const aqq = a[q * dim + q];
        const theta = (aqq - app) / (2 * apq);
        const t =
          Math.sign(theta || 1) / (Math.abs(theta) + Math.sqrt(theta * theta + 1));
        const c = 1 / Math.sqrt(t * t + 1);
        const s = t * c;
        for (let k = 0; k < dim; k++) {
          const akp = a[k * dim + p];
          const akq = a[k * dim + q];
          a[k * dim + p] = c * akp - s * akq;
          a[k * dim + q] = s * akp + c * akq;
        }
        for (let k = 0; k < dim; k++) {
          const apk = a[p * dim + k];
          const aqk = a[q * dim + k];
          a[p * dim + k] = c * apk - s * aqk;
          a[q * dim + k] = s * apk + c * aqk;
        }
        for (let k = 0; k < dim; k++) {
          const vkp = v[k * dim + p];
          const vkq = v[k * dim + q];
          v[k * dim + p] = c * vkp - s * vkq;
          v[k * dim + q] = s * vkp + c * vkq;
        }
      }
    }
  }
  const values = new Float64Array(dim);
  for (let i = 0; i < dim; i++) {
    values[i] = a[i * dim + i];
  }
  return { values, vectors: v };
}

function matmul(a: Float64Array, b: Float64Array, dim: number): Float64Array {
  const out = new Float64Array(dim * dim);
  for (let i = 0; i < dim; i++) {
    for (let k = 0; k < dim; k++) {
      const aik = a[i * dim + k];
      if (aik === 0) {
        continue;
      }
      for (let j = 0; j < dim; j++) {
        out[i * dim + j] += aik * b[k * dim + j];
      }
    }
  }
  return out;
}

/** Symmetric PSD square root via eigen-decomposition. */
function psdSqrt(matrix: Float64Array, dim: number): Float64Array {
  const { values, vectors } = symmetricEigenvalues(matrix, dim);
  const out = new Float64Array(dim * dim);
  for (let k = 0; k < dim; k++) {
    const lam = Math.sqrt(Math.max(values[k], 0));
    if (lam === 0) {
      continue;
    }
    for (let i = 0; i < dim; i++) {
      const vik = vectors[i * dim + k] * lam;
      if (vik === 0) {
        continue;
      }
      for (let j = 0; j < dim; j++) {
        out[i * dim + j] += vik * vectors[j * dim + k];
      }
    }
  }
  return out;
}

export function frechetDistance(a: Moments, b: Moments): number {
  const dim = a.dim;
  let meanTerm = 0;
  for (let i = 0; i < dim; i++) {
    const d = a.mean[i] - b.mean[i];
    meanTerm += d * d;
  }
  let traceA = 0;
  let traceB = 0;
  for (let i = 0; i < dim; i++) {
    traceA += a.cov[i * dim + i];
    traceB += b.cov[i * dim + i];
  }
  const sqrtA = psdSqrt(a.cov, dim);
  const inner = matmul(matmul(sqrtA, b.cov, dim), sqrtA, dim);
  // inner is symmetric PSD up to roundoff; symmetrize before the eigensolve
  for (let i = 0; i < dim; i++) {
    for (let j = i + 1; j < dim; j++) {
      const m = (inner[i * dim + j] + inner[j * dim + i]) / 2;
      inner[i * dim + j] = m;
      inner[j * dim + i] = m;
    }
  }
  const { values } = symmetricEigenvalues(inner, dim);
  let traceSqrt = 0;
  for (let i = 0; i < dim; i++) {
    traceSqrt += Math.sqrt(Math.max(values[i], 0));
  }
  const fid = meanTerm + traceA + traceB - 2 * traceSqrt;
  return Math.max(fid, 0);
}
