/** Browser entry point: wires DOM events to the API client, state
 * transitions, and the pure renderers. Kept free of logic worth unit
 * testing; everything interesting lives in state.ts / render.ts /
 * scatter.ts. */

import { ApiClient, ApiError } from './client.js';
import {
  beginSearch,
  clearError,
  commitError,
  commitResponse,
  initialState,
  selectModel,
  setModels,
  type UiSearchState,
} from './state.js';
import { renderModelSelector, renderSearchResults, renderThresholdLabel } from './render.js';
import { layoutScatter, recolor, renderScatterSvg, type ColorMode, type ScatterPoint } from './scatter.js';
import type { ClusterRecord } from './types.js';

const api = new ApiClient('');
let state: UiSearchState = initialState();
let clusterRecords: ClusterRecord[] = [];
let scatterPoints: ScatterPoint[] = [];
let colorMode: ColorMode = 'cluster';

const $ = (id: string) => document.getElementById(id)!;

function redraw(): void {
  $('model-slot').innerHTML = renderModelSelector(state.models, state.selectedModel);
  $('threshold-slot').innerHTML = renderThresholdLabel(state.threshold);
  $('results').innerHTML = renderSearchResults(state);
  const modelSelect = document.getElementById('model') as HTMLSelectElement | null;
  if (modelSelect) {
    modelSelect.addEventListener('change', () => {
      state = selectModel(state, modelSelect.value);
      if (state.query.trim()) void runSearch();
    });
  }
  (document.querySelector('#search-button') as HTMLButtonElement | null)?.toggleAttribute(
    'disabled',
    state.models.length === 0,
  );
}

async function runSearch(): Promise<void> {
  const model = state.selectedModel;
  if (!model || !state.query.trim()) return;
  const begun = beginSearch(state);
  state = begun.state;
  redraw();
  try {
    const response = await api.search({
      query: state.query,
      model,
      top_k: state.topK,
      threshold: state.threshold,
    });
    state = commitResponse(state, begun.token, response);
  } catch (err) {
    const message = err instanceof ApiError ? err.message : 'service unreachable';
    state = commitError(state, begun.token, message);
  }
  redraw();
}

async function loadClusters(): Promise<void> {
  if (!state.selectedModel) return;
  const k = Number((document.getElementById('cluster-k') as HTMLInputElement).value) || 10;
  try {
    clusterRecords = await api.getClusters(state.selectedModel, k);
    scatterPoints = layoutScatter(clusterRecords, 800, 500, colorMode);
    drawScatter();
  } catch (err) {
    $('cluster-view').innerHTML =
      `<div class="error-banner" role="alert">` +
      `${err instanceof ApiError ? err.message : 'service unreachable'}</div>`;
  }
}

function drawScatter(): void {
  $('cluster-view').innerHTML = renderScatterSvg(scatterPoints, 800, 500);
  $('cluster-view')
    .querySelectorAll('circle')
    .forEach((circle) => {
      circle.addEventListener('click', () => void showItem(circle.getAttribute('data-id')!));
    });
}

async function showItem(id: string): Promise<void> {
  try {
    const item = await api.getItem(id);
    $('item-panel').innerHTML =
      `<h3>${item.id}</h3><img src="${item.image_url}" alt="${item.id}">` +
      `<p>${item.text}</p><p>${item.language} / ${item.image_kind}</p>`;
  } catch {
    $('item-panel').textContent = `could not load ${id}`;
  }
}

function init(): void {
  const queryInput = $('query') as HTMLInputElement;
  const thresholdInput = $('threshold') as HTMLInputElement;

  queryInput.addEventListener('input', () => {
    state = { ...state, query: queryInput.value };
  });
  thresholdInput.addEventListener('input', () => {
    state = { ...state, threshold: Number(thresholdInput.value) };
    redraw();
  });
  $('search-button').addEventListener('click', () => void runSearch());
  $('results').addEventListener('click', (ev) => {
    if ((ev.target as HTMLElement).dataset['action'] === 'retry') {
      state = clearError(state);
      void runSearch();
    }
  });
  $('cluster-load').addEventListener('click', () => void loadClusters());
  ($('color-mode') as HTMLSelectElement).addEventListener('change', (ev) => {
    colorMode = (ev.target as HTMLSelectElement).value as ColorMode;
    scatterPoints = recolor(scatterPoints, clusterRecords, colorMode);
    drawScatter();
  });

  void api
    .getModels()
    .then((models) => {
      state = setModels(state, models);
      redraw();
    })
    .catch(() => {
      state = commitError(beginSearch(state).state, state.requestToken + 1, 'cannot load model list');
      redraw();
    });
  redraw();
}

document.addEventListener('DOMContentLoaded', init);
