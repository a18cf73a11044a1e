// Hand-rolled SVG line chart for the precision@k panel. One polyline per
// iteration, Q0 darkest.

import type { PrecisionSeries } from "./metrics.js";

const WIDTH = 260;
const HEIGHT = 150;
const PAD = 28;
const COLORS = ["#1f4e79", "#2e8b57", "#c05621", "#7b1fa2", "#b91c1c", "#0e7490"];

const SVG_NS = "http://www.w3.org/2000/svg";

function svgEl<K extends string>(name: K): SVGElement {
  return document.createElementNS(SVG_NS, name) as SVGElement;
}

export function renderPrecisionChart(container: HTMLElement, series: PrecisionSeries[]): void {
  container.textContent = "";
  if (series.length === 0) return;
  const maxK = Math.max(...series.map((s) => s.points.length), 1);

  const svg = svgEl("svg");
  svg.setAttribute("viewBox", `0 0 ${WIDTH} ${HEIGHT}`);
  svg.setAttribute("class", "precision-chart");

  const x = (k: number) => PAD + ((k - 1) / Math.max(maxK - 1, 1)) * (WIDTH - PAD - 8);
  const y = (p: number) => HEIGHT - PAD - p * (HEIGHT - PAD - 8);

  for (const grid of [0, 0.5, 1]) {
    const line = svgEl("line");
    line.setAttribute("x1", String(PAD));
    line.setAttribute("x2", String(WIDTH - 8));
    line.setAttribute("y1", String(y(grid)));
    line.setAttribute("y2", String(y(grid)));
    line.setAttribute("class", "chart-grid");
    svg.appendChild(line);
    const label = svgEl("text");
    label.setAttribute("x", "2");
    label.setAttribute("y", String(y(grid) + 4));
    label.setAttribute("class", "chart-label");
    label.textContent = grid.toFixed(1);
    svg.appendChild(label);
  }
  const axis = svgEl("text");
  axis.setAttribute("x", String(WIDTH / 2));
  axis.setAttribute("y", String(HEIGHT - 6));
  axis.setAttribute("class", "chart-label");
  axis.textContent = "k";
  svg.appendChild(axis);

  series.forEach((entry, i) => {
    const polyline = svgEl("polyline");
    polyline.setAttribute(
      "points",
      entry.points.map((p) => `${x(p.k)},${y(p.precision)}`).join(" "),
    );
    polyline.setAttribute("fill", "none");
    polyline.setAttribute("stroke", COLORS[i % COLORS.length]!);
    polyline.setAttribute("stroke-width", "2");
    svg.appendChild(polyline);

    const tag = svgEl("text");
    tag.setAttribute("x", String(WIDTH - 26));
    tag.setAttribute("y", String(16 + i * 14));
    tag.setAttribute("fill", COLORS[i % COLORS.length]!);
    tag.setAttribute("class", "chart-legend");
    tag.textContent = `Q${entry.iteration}`;
    svg.appendChild(tag);
  });

  container.appendChild(svg);
}
