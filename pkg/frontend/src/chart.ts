/** Class-distribution bar chart, rendered as an SVG string. */

import { Histogram } from "./api.js";

export interface ChartBar {
  label: string;
  count: number;
}

export function chartBars(histogram: Histogram): ChartBar[] {
  return histogram.bins.map((bin) => ({ label: bin.label, count: bin.count }));
}

export function renderChartSvg(histogram: Histogram, width = 420, height = 180): string {
  const bars = chartBars(histogram);
  if (bars.length === 0) {
    return `<svg width="${width}" height="${height}" role="img"><text x="12" y="24" class="empty">no labeled classes</text></svg>`;
  }
  const maxCount = Math.max(...bars.map((b) => b.count));
  const pad = 28;
  const barSpace = (width - pad) / bars.length;
  const barWidth = Math.max(6, barSpace * 0.7);
  const parts: string[] = [];
  bars.forEach((bar, i) => {
    const h = maxCount > 0 ? ((height - 2 * pad) * bar.count) / maxCount : 0;
    const x = pad + i * barSpace;
    const y = height - pad - h;
    parts.push(
      `<rect x="${x.toFixed(1)}" y="${y.toFixed(1)}" width="${barWidth.toFixed(1)}" height="${h.toFixed(1)}" data-count="${bar.count}"><title>${bar.label}: ${bar.count}</title></rect>`,
      `<text x="${(x + barWidth / 2).toFixed(1)}" y="${height - pad + 14}" text-anchor="middle" class="tick">${bar.label}</text>`,
      `<text x="${(x + barWidth / 2).toFixed(1)}" y="${(y - 4).toFixed(1)}" text-anchor="middle" class="count">${bar.count}</text>`,
    );
  });
  return `<svg width="${width}" height="${height}" role="img" aria-label="classes per sample-count bin">${parts.join("")}</svg>`;
}
