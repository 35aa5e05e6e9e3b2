/**
 * Extraction core: scan a lemmatized one-sentence-per-line corpus, encode it,
 * and collect one embedding per occurrence of each target lemma.
 *
 * Sentences longer than the encoder window are split at window boundaries
 * into independently encoded chunks, so no target occurrence is ever dropped;
 * a word belongs to the chunk holding its first sub-token. Pooling over a
 * word's sub-tokens is 'first' (default) or 'mean'. The slice-level mean
 * embedding is accumulated over every sub-token of the corpus.
 */

import * as fs from 'node:fs';

import { writeStore, WordBlock } from './store';
import { Encoder, ExtractionError, ExtractionJob, Pooling, SentenceEncoding } from './types';

export interface ExtractionReport {
  occurrences: Map<string, number>;
  omitted: string[];
  sentences: number;
  totalSubTokens: number;
}

export function readLines(filePath: string): string[] {
  let text: string;
  try {
    text = fs.readFileSync(filePath, 'utf-8');
  } catch (err) {
    throw new ExtractionError(`cannot read ${filePath}: ${(err as Error).message}`);
  }
  return text.split('\n').map((s) => s.trim()).filter((s) => s.length > 0);
}

/** Split one encoded sentence into window-sized chunks of sub-tokens. */
export function windowChunks(encoding: SentenceEncoding, window: number): SentenceEncoding[] {
  if (encoding.vectors.length <= window) {
    return [encoding];
  }
  const chunks: SentenceEncoding[] = [];
  for (let base = 0; base < encoding.vectors.length; base += window) {
    const hi = Math.min(base + window, encoding.vectors.length);
    const spans = encoding.wordSpans
      .filter((s) => s.start >= base && s.start < hi)
      .map((s) => ({ word: s.word, start: s.start - base, end: Math.min(s.end, hi) - base }));
    chunks.push({ wordSpans: spans, vectors: encoding.vectors.slice(base, hi) });
  }
  return chunks;
}

function pooled(vectors: Float32Array[], start: number, end: number,
                pooling: Pooling): Float32Array {
  if (pooling === 'first' || end - start === 1) {
    return vectors[start];
  }
  const dim = vectors[start].length;
  const acc = new Float64Array(dim);
  for (let t = start; t < end; t++) {
    for (let i = 0; i < dim; i++) {
      acc[i] += vectors[t][i];
    }
  }
  const n = end - start;
  return Float32Array.from(acc, (x) => x / n);
}

export async function runExtraction(job: ExtractionJob, encoder: Encoder,
                                    warn: (msg: string) => void = console.warn,
                                    ): Promise<ExtractionReport> {
  const sentences = readLines(job.corpusPath);
  const targets = readLines(job.targetsPath);
  if (targets.length === 0) {
    throw new ExtractionError('target list is empty');
  }
  const targetSet = new Set(targets);
  const clouds = new Map<string, Float32Array[]>();
  for (const t of targetSet) {
    clouds.set(t, []);
  }

  let meanAcc: Float64Array | null = null;
  let totalSubTokens = 0;
  for (let base = 0; base < sentences.length; base += job.batchSize) {
    const batch = sentences.slice(base, base + job.batchSize);
    const encodings = await encoder.encodeBatch(batch);
    for (const encoding of encodings) {
      for (const chunk of windowChunks(encoding, encoder.window)) {
        for (const v of chunk.vectors) {
          if (!meanAcc) {
            meanAcc = new Float64Array(v.length);
          }
          for (let i = 0; i < v.length; i++) {
            meanAcc[i] += v[i];
          }
          totalSubTokens += 1;
        }
        for (const span of chunk.wordSpans) {
          if (targetSet.has(span.word)) {
            clouds.get(span.word)!.push(
              pooled(chunk.vectors, span.start, span.end, job.pooling));
          }
        }
      }
    }
  }
  if (!meanAcc || totalSubTokens === 0) {
    throw new ExtractionError('corpus produced no tokens');
  }

  const blocks: WordBlock[] = [];
  const omitted: string[] = [];
  const occurrences = new Map<string, number>();
  for (const target of [...targetSet]) {
    const vectors = clouds.get(target)!;
    occurrences.set(target, vectors.length);
    if (vectors.length === 0) {
      warn(`target '${target}' has no occurrences; omitting it from the store`);
      omitted.push(target);
    } else {
      blocks.push({ word: target, vectors });
    }
  }
  if (blocks.length === 0) {
    throw new ExtractionError('no target occurred in the corpus');
  }

  const languageMean = Float32Array.from(meanAcc, (x) => x / totalSubTokens);
  writeStore(job.outDir, job.language, job.period, encoder.dim(), blocks, languageMean);
  return { occurrences, omitted, sentences: sentences.length, totalSubTokens };
}
