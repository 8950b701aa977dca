/** Wire types mirroring the tagging service's JSON payloads. */

export interface Candidate {
  index: number;
  canonical: string;
  display: string;
}

export interface PendingItem {
  sentence_index: number;
  token_index: number;
  surface: string;
  /** Surfaces of the whole sentence; token_index points at the ambiguous one. */
  context: string[];
  candidates: Candidate[];
}

export interface CreateSessionResponse {
  session_id: string;
  pending_count: number;
}

export interface PendingResponse {
  items: PendingItem[];
  remaining: number;
}

export interface ChoiceResponse {
  remaining: number;
  duplicate: boolean;
}

export interface StatsReport {
  total_words: number;
  parse_histogram: Record<string, number>;
  parse_histogram_counts: Record<string, number>;
  method_counts: Record<string, number>;
  resolved_auto_fraction: number;
  resolved_user_fraction: number;
  resolved_by_multiword_fraction: number;
  resolved_by_constraint_fraction: number;
  accuracy_vs_gold: number | null;
  unknown_forms: Array<[string, number, number]>;
  root_frequencies: Record<string, number>;
}

export interface ResultResponse {
  tsv: string;
  stats: StatsReport;
}
