/**
 * Deterministic text embedding: hashed character trigrams projected into a
 * fixed-dimension space.  Serves as the text tower paired with the
 * rpp-clip-image backbone; like the image side, it is a configuration
 * default, identified in reports, and replaceable by a real text encoder.
 */

export const TEXT_BACKBONE_ID = "hashed-trigram-v1";

const DIM = 128;

function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193);
  }
  return hash >>> 0;
}

export function embedText(text: string): Float64Array {
  const out = new Float64Array(DIM);
  const normalized = ` ${text.toLowerCase().trim()} `;
  for (let i = 0; i + 3 <= normalized.length; i++) {
    const gram = normalized.slice(i, i + 3);
    const h = fnv1a(gram);
    const idx = h % DIM;
    const sign = (h >>> 16) & 1 ? 1 : -1;
    out[idx] += sign;
  }
  let norm = 0;
  for (const v of out) {
    norm += v * v;
  }
  norm = Math.sqrt(norm) || 1;
  for (let i = 0; i < DIM; i++) {
    out[i] /= norm;
  }
  return out;
}
