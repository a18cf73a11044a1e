// Demo-mode side panel: precision@k per iteration against user-supplied
// ground truth. Display math only; the ranking itself always comes from
// the service.

import type { HistoryEntry } from "./api.js";

/**
 * Parse pasted ground truth. Accepts the qrels TSV shape
 * (query_id TAB video_id TAB 0/1) and bare video ids, one per line;
 * blank lines and # comments are skipped.
 */
export function parseRelevantSet(text: string): Set<string> {
  const relevant = new Set<string>();
  for (const raw of text.split(/\r?\n/)) {
    const line = raw.trim();
    if (!line || line.startsWith("#")) continue;
    const fields = line.split(/\t/);
    if (fields.length >= 3) {
      if (fields[2]?.trim() === "1") relevant.add(fields[1]!.trim());
    } else if (fields.length === 1 && fields[0]) {
      relevant.add(fields[0].trim());
    }
  }
  return relevant;
}

export function precisionAtK(ranking: string[], relevant: Set<string>, k: number): number {
  const depth = Math.min(k, ranking.length);
  if (depth === 0) return 0;
  let hits = 0;
  for (let i = 0; i < depth; i += 1) {
    if (relevant.has(ranking[i]!)) hits += 1;
  }
  return hits / k;
}

export interface PrecisionSeries {
  iteration: number;
  points: Array<{ k: number; precision: number }>;
}

export function precisionSeries(
  history: HistoryEntry[],
  relevant: Set<string>,
  maxK = 10,
): PrecisionSeries[] {
  return history.map((entry) => ({
    iteration: entry.iteration,
    points: Array.from({ length: maxK }, (_, i) => ({
      k: i + 1,
      precision: precisionAtK(entry.video_ids, relevant, i + 1),
    })),
  }));
}
