/** Responses recorded from a live service over an 8-item stub-embedded
 * deployment (model "stub-7", dim 8, cluster seed 42, k=2). */

import type { ClusterRecord, ItemRecord, ModelInfo, SearchResponse } from '../src/types.js';

export const SEARCH_FIVE_HITS: SearchResponse = {
  model: 'stub-7',
  threshold_used: -1.0,
  hits: [
    { id: 'P00000008', score: 0.5737893403108723, text: 'pathology case number 8',
      image_url: '/images/img/8.jpg', language: 'en', image_kind: 'histopathology' },
    { id: 'P00000003', score: 0.547022036897105, text: 'pathology case number 3',
      image_url: '/images/img/3.jpg', language: 'zh', image_kind: 'histopathology' },
    { id: 'P00000005', score: 0.352267238207863, text: 'pathology case number 5',
      image_url: '/images/img/5.jpg', language: 'en', image_kind: 'histopathology' },
    { id: 'P00000002', score: 0.15960059874294538, text: 'pathology case number 2',
      image_url: '/images/img/2.jpg', language: 'en', image_kind: 'ihc' },
    { id: 'P00000007', score: 0.14718813871913422, text: 'pathology case number 7',
      image_url: '/images/img/7.jpg', language: 'en', image_kind: 'histopathology' },
  ],
};

export const SEARCH_EMPTY: SearchResponse = {
  model: 'stub-7',
  threshold_used: 0.999,
  hits: [],
};

export const MODELS: ModelInfo[] = [
  { name: 'stub-7', dim: 8, modality: 'text', pooling: 'mean' },
];

export const CLUSTERS: ClusterRecord[] = [
  { id: 'P00000001', x: 1.9441151586835304, y: -0.14562211461052607,
    cluster: 0, language: 'en', image_kind: 'histopathology' },
  { id: 'P00000002', x: -0.08485466659607883, y: -1.236896920599896,
    cluster: 1, language: 'en', image_kind: 'ihc' },
  { id: 'P00000003', x: -0.15551395526915107, y: -0.5632030142889819,
    cluster: 1, language: 'zh', image_kind: 'histopathology' },
  { id: 'P00000004', x: -1.4240824608683944, y: 0.28648574334000004,
    cluster: 1, language: 'en', image_kind: 'histopathology' },
  { id: 'P00000005', x: -0.9112809129410885, y: -0.33178251379497764,
    cluster: 1, language: 'en', image_kind: 'histopathology' },
  { id: 'P00000006', x: 0.053354596260056945, y: 1.705900621571174,
    cluster: 1, language: 'zh', image_kind: 'histopathology' },
  { id: 'P00000007', x: 1.0343586383621723, y: 0.15781740821359633,
    cluster: 0, language: 'en', image_kind: 'histopathology' },
  { id: 'P00000008', x: -0.4560963976310468, y: 0.12730079016961146,
    cluster: 1, language: 'en', image_kind: 'histopathology' },
];

export const ITEM_P3: ItemRecord = {
  id: 'P00000003',
  text: 'pathology case number 3',
  image_path: 'img/3.jpg',
  language: 'zh',
  image_kind: 'histopathology',
  disease_class: 'other',
  source_book: 'demo',
  image_url: '/images/img/3.jpg',
};
