import type { GalleryEntry, Palette } from './types';

/** Escape user-entered text for HTML. Hex codes pass through verbatim. */
export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;');
}

function pct(proportion: number): string {
  return `${(proportion * 100).toFixed(1)}%`;
}

function swatchRow(hex: string, label: string): string {
  return (
    `<li class="swatch">` +
    `<span class="chip" style="background:${hex}"></span>` +
    `<code class="hex">${hex}</code>` +
    `<span class="label">${escapeHtml(label)}</span>` +
    `<button class="copy" data-copy="${hex}">copy</button>` +
    `</li>`
  );
}

function paletteList(palette: Palette): string {
  const rows = [swatchRow(palette.primary, 'primary')];
  for (const accent of palette.accents) {
    rows.push(swatchRow(accent.color, `accent ${pct(accent.proportion)}`));
  }
  return `<ul class="swatches">${rows.join('')}</ul>`;
}

/**
 * Full palette view for one gallery entry: server-rendered glyph, swatch
 * list with copyable hex codes, and a provenance panel. Every hex code is
 * the service-provided string, unmodified.
 */
export function renderPaletteView(entry: GalleryEntry, glyphSvg: string): string {
  const spec = entry.spec;
  const title = spec.context
    ? `${escapeHtml(spec.concept)} (${escapeHtml(spec.context)})`
    : escapeHtml(spec.concept);
  const palettes = entry.palettes
    .map(
      (p, i) =>
        `<section class="palette" data-rank="${i}">` +
        `<h3>group ${p.group_rank} &middot; ${p.group_size} images</h3>` +
        paletteList(p) +
        `</section>`,
    )
    .join('');
  const thumbs = entry.thumbnails
    .map((t) => `<img class="thumb" src="${escapeHtml(t)}" alt="sample">`)
    .join('');
  return (
    `<article class="palette-view" data-entry="${escapeHtml(entry.entry_id)}">` +
    `<h2>${title}</h2>` +
    `<div class="glyph">${glyphSvg}</div>` +
    palettes +
    `<aside class="provenance">` +
    `<dl>` +
    `<dt>style</dt><dd>${escapeHtml(spec.style)}</dd>` +
    `<dt>lighting</dt><dd>${escapeHtml(spec.lighting)}</dd>` +
    `<dt>images</dt><dd>${spec.image_count} @ ${spec.resolution}px</dd>` +
    `<dt>params</dt><dd><code>${escapeHtml(entry.param_fingerprint)}</code></dd>` +
    `</dl>` +
    `<div class="thumbs">${thumbs}</div>` +
    `</aside>` +
    `</article>`
  );
}

/** Search result grid; cards appear in exactly the order the service returned. */
export function renderSearchGrid(results: GalleryEntry[]): string {
  const cards = results.map((entry, i) => {
    const top = entry.palettes[0];
    const chips = top
      ? [top.primary, ...top.accents.map((a) => a.color)]
          .map((hex) => `<span class="chip" style="background:${hex}"></span>`)
          .join('')
      : '';
    return (
      `<a class="card" data-entry="${escapeHtml(entry.entry_id)}" data-pos="${i}">` +
      `<span class="chips">${chips}</span>` +
      `<span class="concept">${escapeHtml(entry.spec.concept)}</span>` +
      (entry.tag ? `<span class="tag">${escapeHtml(entry.tag)}</span>` : '') +
      `</a>`
    );
  });
  return `<div class="search-grid">${cards.join('')}</div>`;
}

/** Side-by-side comparison of 2 to 4 entries. */
export function renderCompare(entries: GalleryEntry[]): string {
  if (entries.length < 2 || entries.length > 4) {
    throw new Error('compare takes 2 to 4 entries');
  }
  const columns = entries
    .map((entry) => {
      const top = entry.palettes[0];
      return (
        `<div class="compare-col" data-entry="${escapeHtml(entry.entry_id)}">` +
        `<h4>${escapeHtml(entry.spec.concept)}` +
        (entry.tag ? ` <span class="tag">${escapeHtml(entry.tag)}</span>` : '') +
        `</h4>` +
        (top ? paletteList(top) : '<p class="empty">no palettes</p>') +
        `</div>`
      );
    })
    .join('');
  return `<div class="compare">${columns}</div>`;
}
