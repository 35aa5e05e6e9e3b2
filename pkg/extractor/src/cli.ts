#!/usr/bin/env node
/**
 * Extraction CLI.
 *
 *   semshift-extract extract --corpus F --targets F --model ID --layer last \
 *       --out DIR [--language en] [--period t0] [--pooling first|mean] \
 *       [--window N] [--batch-size N]
 *
 * Model ids: `stub:<dim>[:<window>]` selects the deterministic offline
 * encoder; anything else is treated as a pretrained model id for
 * transformers.js. Output is a store directory (manifest.json + vectors.bin)
 * that the analysis package's `validate` command accepts unchanged.
 */

import { runExtraction } from './extract';
import { StubEncoder } from './stubEncoder';
import { TransformersEncoder } from './transformersEncoder';
import { Encoder, ExtractionError, ExtractionJob, Pooling } from './types';

interface Flags {
  [key: string]: string;
}

function parseFlags(argv: string[]): Flags {
  const flags: Flags = {};
  for (let i = 0; i < argv.length; i += 2) {
    const key = argv[i];
    if (!key.startsWith('--') || i + 1 >= argv.length) {
      throw new ExtractionError(`bad arguments near '${key}'`);
    }
    flags[key.slice(2)] = argv[i + 1];
  }
  return flags;
}

function buildEncoder(model: string, layer: string, window?: number): Encoder {
  const match = /^stub:(\d+)(?::(\d+))?$/.exec(model);
  if (match) {
    if (layer !== 'last') {
      throw new ExtractionError(`the stub encoder only has a 'last' layer`);
    }
    const dim = parseInt(match[1], 10);
    const w = window ?? (match[2] ? parseInt(match[2], 10) : 128);
    return new StubEncoder(dim, w);
  }
  return new TransformersEncoder(model, layer, window ?? 510);
}

export async function main(argv: string[]): Promise<number> {
  if (argv[0] !== 'extract') {
    console.error('usage: semshift-extract extract --corpus F --targets F '
      + '--model ID --layer last --out DIR');
    return 1;
  }
  let flags: Flags;
  try {
    flags = parseFlags(argv.slice(1));
  } catch (err) {
    console.error(`usage error: ${(err as Error).message}`);
    return 1;
  }
  for (const required of ['corpus', 'targets', 'model', 'out']) {
    if (!(required in flags)) {
      console.error(`usage error: --${required} is required`);
      return 1;
    }
  }
  const pooling = (flags['pooling'] ?? 'first') as Pooling;
  if (pooling !== 'first' && pooling !== 'mean') {
    console.error(`usage error: bad pooling '${pooling}'`);
    return 1;
  }
  const job: ExtractionJob = {
    corpusPath: flags['corpus'],
    targetsPath: flags['targets'],
    model: flags['model'],
    layer: flags['layer'] ?? 'last',
    outDir: flags['out'],
    language: flags['language'] ?? 'und',
    period: flags['period'] ?? 't0',
    pooling,
    batchSize: flags['batch-size'] ? parseInt(flags['batch-size'], 10) : 16,
  };
  try {
    const encoder = buildEncoder(job.model, job.layer,
                                 flags['window'] ? parseInt(flags['window'], 10) : undefined);
    const report = await runExtraction(job, encoder);
    const counts = [...report.occurrences.entries()]
      .map(([w, n]) => `${w}=${n}`).sort().join(' ');
    console.log(`wrote ${job.outDir}: ${report.sentences} sentences, `
      + `${report.totalSubTokens} sub-tokens, occurrences ${counts}`);
    return 0;
  } catch (err) {
    if (err instanceof ExtractionError) {
      console.error(`error: ${err.message}`);
      return 2;
    }
    throw err;
  }
}

if (require.main === module) {
  main(process.argv.slice(2)).then((code) => {
    process.exitCode = code;
  });
}
