/** Wire types mirroring the palette service's JSON payloads. */

export interface JobRequestBody {
  concept: string;
  context?: string | null;
  style?: string;
  lighting?: string;
  audience?: string | null;
  image_count?: number;
  resolution?: number;
  tag?: string;
}

export type JobStateName = 'pending' | 'running' | 'done' | 'failed';

export interface JobStatus {
  job_id: string;
  state: JobStateName;
  stage: string;
  progress: number;
  entry_id: string | null;
  error: string | null;
}

export interface AccentEntry {
  color: string; // "#rrggbb", verbatim from the service
  proportion: number;
}

export interface Palette {
  primary: string;
  accents: AccentEntry[];
  group_rank: number;
  group_size: number;
  provenance: Record<string, unknown>;
}

export interface EntrySpec {
  concept: string;
  context: string | null;
  style: string;
  lighting: string;
  audience: string | null;
  image_count: number;
  resolution: number;
}

export interface GalleryEntry {
  entry_id: string;
  spec: EntrySpec;
  palettes: Palette[];
  tag: string;
  created_at: number;
  param_fingerprint: string;
  thumbnails: string[];
}

export interface SearchResponse {
  results: GalleryEntry[];
}
