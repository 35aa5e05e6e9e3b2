/**
 * Deterministic offline encoder for tests and dry runs.
 *
 * Tokenization: whitespace words; words longer than six characters split into
 * four-character pieces, so multi-sub-token pooling paths are exercised.
 * Each sub-token's vector is a pure hash of its string, making extraction
 * output reproducible byte-for-byte without any model download.
 *
 * Select it with a model id of the form `stub:<dim>[:<window>]`.
 */

import { Encoder, SentenceEncoding, WordSpan } from './types';

function fnv1a(text: string): number {
  let h = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    h ^= text.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return h >>> 0;
}

function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) >>> 0;
    let t = a;
    t = Math.imul(t ^ (t >>> 15), t | 1);
    t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

export function splitSubTokens(word: string): string[] {
  if (word.length <= 6) {
    return [word];
  }
  const pieces: string[] = [];
  for (let i = 0; i < word.length; i += 4) {
    pieces.push((i === 0 ? '' : '##') + word.slice(i, i + 4));
  }
  return pieces;
}

export class StubEncoder implements Encoder {
  readonly id: string;
  readonly window: number;
  private readonly hiddenSize: number;

  constructor(dim = 16, window = 128) {
    this.id = `stub:${dim}:${window}`;
    this.hiddenSize = dim;
    this.window = window;
  }

  dim(): number {
    return this.hiddenSize;
  }

  private vectorFor(subToken: string): Float32Array {
    const rand = mulberry32(fnv1a(subToken));
    const v = new Float32Array(this.hiddenSize);
    for (let i = 0; i < this.hiddenSize; i++) {
      v[i] = rand() * 2 - 1;
    }
    v[0] = 0.25 + rand() * 0.75; // never a zero-norm row
    return v;
  }

  async encodeBatch(sentences: string[]): Promise<SentenceEncoding[]> {
    return sentences.map((sentence) => {
      const words = sentence.split(/\s+/).filter((w) => w.length > 0);
      const wordSpans: WordSpan[] = [];
      const vectors: Float32Array[] = [];
      for (const word of words) {
        const pieces = splitSubTokens(word);
        wordSpans.push({ word, start: vectors.length, end: vectors.length + pieces.length });
        for (const piece of pieces) {
          vectors.push(this.vectorFor(piece));
        }
      }
      return { wordSpans, vectors };
    });
  }
}

