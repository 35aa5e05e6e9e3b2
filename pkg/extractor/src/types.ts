/** Shared types for the extraction pipeline. */

/** Sub-token index range of one whitespace word inside a sentence encoding. */
export interface WordSpan {
  word: string;
  /** first sub-token index (inclusive) */
  start: number;
  /** last sub-token index (exclusive) */
  end: number;
}

/** Token-level output of an encoder for one sentence (special tokens removed). */
export interface SentenceEncoding {
  wordSpans: WordSpan[];
  /** one hidden-state vector per sub-token, from the selected layer */
  vectors: Float32Array[];
}

/**
 * A contextual encoder. Implementations must be deterministic for fixed
 * weights and inputs, and must report the sub-token window they can encode.
 */
export interface Encoder {
  readonly id: string;
  /** maximum number of sub-tokens per encoded chunk */
  readonly window: number;
  /** hidden size; known once the model is loaded */
  dim(): number;
  /** Encode a batch of sentences; output order matches input order. */
  encodeBatch(sentences: string[]): Promise<SentenceEncoding[]>;
}

export type Pooling = 'first' | 'mean';

export interface ExtractionJob {
  corpusPath: string;
  targetsPath: string;
  model: string;
  layer: string;
  outDir: string;
  language: string;
  period: string;
  pooling: Pooling;
  batchSize: number;
}

export class ExtractionError extends Error {}
