/**
 * Contextual encoder backed by transformers.js (loaded lazily, so the package
 * builds and its tests run without the dependency or any model download).
 *
 * Word alignment: every whitespace word is tokenized on its own without
 * special tokens, giving an exact word-to-sub-token span; the concatenated
 * pieces are then encoded in one pass and the selected layer's hidden states
 * are read back per sub-token.
 */

import { Encoder, ExtractionError, SentenceEncoding, WordSpan } from './types';

export class TransformersEncoder implements Encoder {
  readonly id: string;
  readonly window: number;
  private readonly layer: string;
  private tokenizer: any = null;
  private model: any = null;
  private hiddenSize = 0;

  constructor(modelId: string, layer = 'last', window = 510) {
    this.id = modelId;
    this.layer = layer;
    this.window = window;
  }

  async init(): Promise<void> {
    if (this.model) {
      return;
    }
    let lib: any;
    // variable specifier keeps the optional dependency out of type resolution
    const moduleName = '@huggingface/transformers';
    try {
      lib = await import(moduleName);
    } catch (err) {
      throw new ExtractionError(
        `model ${this.id} needs the optional dependency @huggingface/transformers ` +
        `(npm install @huggingface/transformers); use a stub:<dim> model id for offline runs`);
    }
    if (this.layer !== 'last') {
      throw new ExtractionError(`unsupported layer selector '${this.layer}'`);
    }
    this.tokenizer = await lib.AutoTokenizer.from_pretrained(this.id);
    this.model = await lib.AutoModel.from_pretrained(this.id);
  }

  dim(): number {
    if (!this.hiddenSize) {
      throw new ExtractionError('encoder not initialized: call encodeBatch first');
    }
    return this.hiddenSize;
  }

  private async subTokenIds(word: string): Promise<number[]> {
    const encoded = await this.tokenizer(word, { add_special_tokens: false });
    return Array.from(encoded.input_ids.data as BigInt64Array, (x) => Number(x));
  }

  async encodeBatch(sentences: string[]): Promise<SentenceEncoding[]> {
    await this.init();
    const out: SentenceEncoding[] = [];
    for (const sentence of sentences) {
      const words = sentence.split(/\s+/).filter((w) => w.length > 0);
      const wordSpans: WordSpan[] = [];
      const ids: number[] = [];
      for (const word of words) {
        const pieces = await this.subTokenIds(word);
        wordSpans.push({ word, start: ids.length, end: ids.length + pieces.length });
        ids.push(...pieces);
      }
      const inputs = await this.tokenizer(sentence, { add_special_tokens: false });
      void inputs; // tokenizer call kept for parity with batched APIs
      const modelInputs = {
        input_ids: this.makeTensor([ids], 'int64'),
        attention_mask: this.makeTensor([ids.map(() => 1)], 'int64'),
      };
      const output = await this.model(modelInputs);
      const hidden = output.last_hidden_state;
      const [, seqLen, dim] = hidden.dims as [number, number, number];
      this.hiddenSize = dim;
      const data = hidden.data as Float32Array;
      const vectors: Float32Array[] = [];
      for (let t = 0; t < seqLen; t++) {
        vectors.push(Float32Array.from(data.subarray(t * dim, (t + 1) * dim)));
      }
      out.push({ wordSpans, vectors });
    }
    return out;
  }

  private makeTensor(values: number[][], dtype: string): any {
    const flat = values.flat();
    const data = dtype === 'int64'
      ? BigInt64Array.from(flat, (x) => BigInt(x))
      : Float32Array.from(flat);
    const TensorCtor = (this.model.constructor as any).Tensor
      ?? require('@huggingface/transformers').Tensor;
    return new TensorCtor(dtype, data, [values.length, values[0].length]);
  }
}
