/** Payload types for the kbsearch HTTP JSON API. */

export type Language = 'zh' | 'en';
export type ImageKind = 'histopathology' | 'ihc';

export interface SearchHit {
  id: string;
  score: number;
  text: string;
  image_url: string;
  language: Language;
  image_kind: ImageKind;
}

export interface SearchResponse {
  model: string;
  threshold_used: number;
  hits: SearchHit[];
  annotation?: string;
}

export interface SearchRequest {
  query: string;
  model: string;
  top_k?: number;
  threshold?: number;
}

export interface ModelInfo {
  name: string;
  dim: number;
  modality: 'text' | 'image';
  pooling: 'mean' | 'flatten';
}

export interface CorpusStats {
  total: number;
  by_image_kind: Record<string, number>;
  by_language: Record<string, number>;
  by_disease: Record<string, number>;
}

export interface ClusterRecord {
  id: string;
  x: number;
  y: number;
  cluster: number;
  language: Language;
  image_kind: ImageKind;
}

export interface ItemRecord {
  id: string;
  text: string;
  image_path: string;
  language: Language;
  image_kind: ImageKind;
  disease_class: 'tumor' | 'other';
  source_book: string;
  page?: number;
  image_url: string;
}
