/** Pure HTML renderers: every view is a function of state plus the last
 * responses, so snapshots are stable and testable without a browser. */

import type { UiSearchState } from './state.js';
import type { ModelInfo, SearchHit } from './types.js';

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function hitCard(hit: SearchHit, rank: number): string {
  return [
    `<article class="hit-card" data-id="${escapeHtml(hit.id)}" data-rank="${rank}">`,
    `<img src="${escapeHtml(hit.image_url)}" alt="${escapeHtml(hit.id)}" loading="lazy">`,
    `<div class="hit-meta">`,
    `<span class="hit-id">${escapeHtml(hit.id)}</span>`,
    `<span class="hit-score">${hit.score.toFixed(3)}</span>`,
    `<span class="badge badge-language">${escapeHtml(hit.language)}</span>`,
    `<span class="badge badge-kind">${escapeHtml(hit.image_kind)}</span>`,
    `</div>`,
    `<p class="hit-text">${escapeHtml(hit.text)}</p>`,
    `</article>`,
  ].join('');
}

export function renderErrorBanner(message: string | null): string {
  if (!message) return '';
  return (
    `<div class="error-banner" role="alert">${escapeHtml(message)}` +
    `<button class="retry" data-action="retry">retry</button></div>`
  );
}

export function renderSearchResults(state: UiSearchState): string {
  const banner = renderErrorBanner(state.error);
  if (state.loading) {
    return banner + `<p class="loading">searching&hellip;</p>`;
  }
  const response = state.lastResponse;
  if (!response) {
    return banner + `<p class="idle">enter a query to search the knowledge base</p>`;
  }
  if (response.hits.length === 0) {
    return (
      banner +
      `<p class="empty-state">no results above threshold ` +
      `${response.threshold_used.toFixed(2)}</p>`
    );
  }
  const cards = response.hits.map((hit, i) => hitCard(hit, i + 1)).join('\n');
  const annotation = response.annotation
    ? `<aside class="annotation">${escapeHtml(response.annotation)}</aside>`
    : '';
  return banner + annotation + `<div class="results-gallery">\n${cards}\n</div>`;
}

export function renderModelSelector(
  models: ModelInfo[],
  selected: string | null,
): string {
  if (models.length === 0) {
    return (
      `<select id="model" disabled></select>` +
      `<span class="selector-note">no models configured; search disabled</span>`
    );
  }
  const options = models
    .map((m) => {
      const sel = m.name === selected ? ' selected' : '';
      return `<option value="${escapeHtml(m.name)}"${sel}>` +
        `${escapeHtml(m.name)} (${m.modality}, d=${m.dim})</option>`;
    })
    .join('');
  return `<select id="model">${options}</select>`;
}

export function renderThresholdLabel(threshold: number): string {
  return `<label for="threshold">threshold ` +
    `<output>${threshold.toFixed(2)}</output></label>`;
}
