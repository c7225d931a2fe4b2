// SVG renderers working directly from the API's raw numeric arrays.  No chart
// library: the shapes are simple enough that hand-built paths stay legible and
// keep the displayed geometry exactly what the server sent.

import type { CpCurve, PcaDoc } from './types.js';

const SVG_NS = 'http://www.w3.org/2000/svg';

export function svgEl<K extends keyof SVGElementTagNameMap>(
  tag: K,
  attrs: Record<string, string | number> = {},
): SVGElementTagNameMap[K] {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  return el;
}

function pathFrom(xs: number[], ys: number[]): string {
  const parts: string[] = [];
  for (let i = 0; i < xs.length; i++) {
    parts.push(`${i === 0 ? 'M' : 'L'}${xs[i].toFixed(2)},${ys[i].toFixed(2)}`);
  }
  return parts.join(' ');
}

/** Closed outline of the section, solid fill, aspect ratio preserved. */
export function airfoilOutline(loop: number[][], width = 360, height = 110): SVGSVGElement {
  const svg = svgEl('svg', { width, height, class: 'airfoil', viewBox: `0 0 ${width} ${height}` });
  const pad = 8;
  const scale = width - 2 * pad; // chord spans the drawing; y uses the same scale
  const cy = height / 2;
  const pts = loop.map(([x, y]) => `${(pad + x * scale).toFixed(2)},${(cy - y * scale).toFixed(2)}`);
  const poly = svgEl('polygon', { points: pts.join(' '), class: 'airfoil-outline' });
  svg.appendChild(poly);
  return svg;
}

/**
 * Candidate Cp over the benchmark, y axis inverted (suction up, the usual
 * aerodynamic convention): smaller Cp values land at smaller screen y.
 */
export function cpOverlay(cp: CpCurve, benchmark: CpCurve, width = 360, height = 220): SVGSVGElement {
  const svg = svgEl('svg', { width, height, class: 'cp-overlay', viewBox: `0 0 ${width} ${height}` });
  const pad = 10;
  const all = [...cp.cp_upper, ...cp.cp_lower, ...benchmark.cp_upper, ...benchmark.cp_lower];
  const cpMin = Math.min(...all);
  const cpMax = Math.max(...all);
  const range = cpMax - cpMin || 1;
  const sx = (x: number) => pad + x * (width - 2 * pad);
  const sy = (v: number) => pad + ((v - cpMin) / range) * (height - 2 * pad);

  const lines: [number[], string][] = [
    [benchmark.cp_upper, 'cp-benchmark-upper'],
    [benchmark.cp_lower, 'cp-benchmark-lower'],
    [cp.cp_upper, 'cp-candidate-upper'],
    [cp.cp_lower, 'cp-candidate-lower'],
  ];
  for (const [values, cls] of lines) {
    const xs = cls.startsWith('cp-benchmark') ? benchmark.x : cp.x;
    const path = svgEl('path', { d: pathFrom(xs.map(sx), values.map(sy)), class: cls, fill: 'none' });
    svg.appendChild(path);
  }
  return svg;
}

const STAGE_COLORS = ['#888', '#4c78a8', '#f58518', '#54a24b', '#b279a2', '#e45756', '#72b7b2', '#eeca3b'];

/** One dot per candidate, colored by stage, straight from the projection doc. */
export function pcaScatter(doc: PcaDoc, width = 320, height = 240): SVGSVGElement {
  const svg = svgEl('svg', { width, height, class: 'pca-scatter', viewBox: `0 0 ${width} ${height}` });
  const coords: [number, number][] = [];
  for (const stage of Object.values(doc.stages)) coords.push(...Object.values(stage));
  if (coords.length === 0) return svg;
  const xs = coords.map((c) => c[0]);
  const ys = coords.map((c) => c[1]);
  const xMin = Math.min(...xs);
  const xRange = Math.max(...xs) - xMin || 1;
  const yMin = Math.min(...ys);
  const yRange = Math.max(...ys) - yMin || 1;
  const pad = 12;

  const stages = Object.keys(doc.stages).sort((a, b) => Number(a) - Number(b));
  for (const stage of stages) {
    const color = STAGE_COLORS[Number(stage) % STAGE_COLORS.length];
    for (const [cid, [px, py]] of Object.entries(doc.stages[stage])) {
      const circle = svgEl('circle', {
        cx: pad + ((px - xMin) / xRange) * (width - 2 * pad),
        cy: height - pad - ((py - yMin) / yRange) * (height - 2 * pad),
        r: 3,
        fill: color,
        class: `pca-point pca-stage-${stage}`,
        'data-id': cid,
      });
      svg.appendChild(circle);
    }
  }
  return svg;
}
