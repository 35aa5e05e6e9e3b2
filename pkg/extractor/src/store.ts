/**
 * Writer for the embedding-store directory format consumed by the analysis
 * package: manifest.json plus vectors.bin (IEEE-754 binary32, little-endian,
 * row-major, no header). Offsets are float32 element indices; words are
 * sorted by Unicode code point, matching the reader's expectations.
 */

import * as fs from 'node:fs';
import * as path from 'node:path';

import { ExtractionError } from './types';

export interface WordBlock {
  word: string;
  vectors: Float32Array[];
}

export function codePointCompare(a: string, b: string): number {
  const as = Array.from(a);
  const bs = Array.from(b);
  const n = Math.min(as.length, bs.length);
  for (let i = 0; i < n; i++) {
    const d = (as[i].codePointAt(0) as number) - (bs[i].codePointAt(0) as number);
    if (d !== 0) {
      return d;
    }
  }
  return as.length - bs.length;
}

export function writeStore(
  outDir: string,
  language: string,
  period: string,
  dim: number,
  blocks: WordBlock[],
  languageMean: Float32Array | null,
): void {
  if (blocks.length === 0) {
    throw new ExtractionError('store must contain at least one word');
  }
  const sorted = [...blocks].sort((x, y) => codePointCompare(x.word, y.word));
  let elements = 0;
  for (const block of sorted) {
    if (block.vectors.length === 0) {
      throw new ExtractionError(`no occurrences for '${block.word}'`);
    }
    for (const v of block.vectors) {
      if (v.length !== dim) {
        throw new ExtractionError(`dimension mismatch for '${block.word}'`);
      }
      elements += v.length;
    }
  }
  if (languageMean) {
    elements += dim;
  }

  const buffer = Buffer.alloc(elements * 4);
  const entries: { word: string; offset: number; count: number }[] = [];
  let offset = 0;
  const put = (v: Float32Array) => {
    for (let i = 0; i < v.length; i++) {
      buffer.writeFloatLE(v[i], (offset + i) * 4);
    }
    offset += v.length;
  };
  for (const block of sorted) {
    entries.push({ word: block.word, offset, count: block.vectors.length });
    for (const v of block.vectors) {
      put(v);
    }
  }
  let meanOffset: number | null = null;
  if (languageMean) {
    meanOffset = offset;
    put(languageMean);
  }

  const manifest = {
    format_version: 1,
    language,
    period,
    dim,
    language_mean_offset: meanOffset,
    words: entries,
  };
  fs.mkdirSync(outDir, { recursive: true });
  fs.writeFileSync(path.join(outDir, 'vectors.bin'), buffer);
  fs.writeFileSync(path.join(outDir, 'manifest.json'),
                   JSON.stringify(manifest, null, 2) + '\n', 'utf-8');
}
