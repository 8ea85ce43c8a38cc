/** Search screen state. Rendering is a pure function of this state, and
 * at most one search request is in flight: each request gets a token and
 * only the latest token may commit its response (stale replies are
 * dropped). */

import type { ModelInfo, SearchResponse } from './types.js';

export interface UiSearchState {
  query: string;
  models: ModelInfo[];
  selectedModel: string | null;
  threshold: number;
  topK: number;
  lastResponse: SearchResponse | null;
  loading: boolean;
  error: string | null;
  requestToken: number;
}

export function initialState(): UiSearchState {
  return {
    query: '',
    models: [],
    selectedModel: null,
    threshold: 0.5,
    topK: 5,
    lastResponse: null,
    loading: false,
    error: null,
    requestToken: 0,
  };
}

export function setModels(state: UiSearchState, models: ModelInfo[]): UiSearchState {
  const selected =
    state.selectedModel && models.some((m) => m.name === state.selectedModel)
      ? state.selectedModel
      : models.length > 0
        ? models[0]!.name
        : null;
  return { ...state, models, selectedModel: selected };
}

export function selectModel(state: UiSearchState, name: string): UiSearchState {
  if (!state.models.some((m) => m.name === name)) return state;
  return { ...state, selectedModel: name };
}

/** Start a search; returns the new state and the token the caller must
 * present when committing the response. */
export function beginSearch(state: UiSearchState): { state: UiSearchState; token: number } {
  const token = state.requestToken + 1;
  return { state: { ...state, loading: true, requestToken: token }, token };
}

export function commitResponse(
  state: UiSearchState,
  token: number,
  response: SearchResponse,
): UiSearchState {
  if (token !== state.requestToken) return state; // stale reply
  return { ...state, loading: false, error: null, lastResponse: response };
}

/** API failures keep the previous results visible behind the banner. */
export function commitError(
  state: UiSearchState,
  token: number,
  message: string,
): UiSearchState {
  if (token !== state.requestToken) return state;
  return { ...state, loading: false, error: message };
}

export function clearError(state: UiSearchState): UiSearchState {
  return { ...state, error: null };
}
