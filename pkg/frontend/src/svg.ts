// Figure -> standalone SVG document.  Output is deterministic for a
// given figure: no timestamps unless explicitly requested.

import { BarPair, Figure, SERIES_COLORS, formatTick, makeScale } from "./figure.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 170, top: 40, bottom: 55 };

function esc(text: string): string {
  return text.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

function round(v: number): string {
  return (Math.round(v * 100) / 100).toString();
}

export function renderSvg(figure: Figure, timestamp?: string): string {
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (u: number) => MARGIN.left + u * plotW;
  const py = (u: number) => MARGIN.top + (1 - u) * plotH;

  const parts: string[] = [];
  parts.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
    `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="sans-serif">`,
  );
  if (timestamp) parts.push(`<!-- generated ${esc(timestamp)} -->`);
  parts.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  parts.push(
    `<text x="${WIDTH / 2}" y="22" text-anchor="middle" font-size="16">` +
    `${esc(figure.title)}</text>`,
  );

  if (figure.bars !== null) {
    renderBars(parts, figure.bars, px, py, plotH);
  } else {
    renderSeries(parts, figure, px, py);
  }

  // axis labels
  parts.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
    `font-size="13">${esc(figure.xLabel)}</text>`,
  );
  parts.push(
    `<text x="18" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="13" ` +
    `transform="rotate(-90 18 ${MARGIN.top + plotH / 2})">${esc(figure.yLabel)}</text>`,
  );
  parts.push("</svg>");
  return parts.join("\n") + "\n";
}

function frame(parts: string[], px: (u: number) => number, py: (u: number) => number): void {
  parts.push(
    `<path d="M ${round(px(0))} ${round(py(1))} L ${round(px(0))} ${round(py(0))} ` +
    `L ${round(px(1))} ${round(py(0))}" fill="none" stroke="black"/>`,
  );
}

function renderSeries(
  parts: string[],
  figure: Figure,
  px: (u: number) => number,
  py: (u: number) => number,
): void {
  const xs = figure.series.flatMap((s) => s.points.map((p) => p.x));
  const ys = figure.series.flatMap((s) => s.points.map((p) => p.y));
  const xScale = makeScale(xs, figure.xLog);
  const yScale = makeScale(ys, figure.yLog);

  for (const tick of xScale.ticks) {
    const x = px(xScale.unit(tick));
    parts.push(
      `<line x1="${round(x)}" y1="${round(py(0))}" x2="${round(x)}" ` +
      `y2="${round(py(0) + 5)}" stroke="black"/>`,
    );
    parts.push(
      `<line x1="${round(x)}" y1="${round(py(0))}" x2="${round(x)}" ` +
      `y2="${round(py(1))}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${round(x)}" y="${round(py(0) + 18)}" text-anchor="middle" ` +
      `font-size="11">${formatTick(tick)}</text>`,
    );
  }
  for (const tick of yScale.ticks) {
    const y = py(yScale.unit(tick));
    parts.push(
      `<line x1="${round(px(0) - 5)}" y1="${round(y)}" x2="${round(px(0))}" ` +
      `y2="${round(y)}" stroke="black"/>`,
    );
    parts.push(
      `<line x1="${round(px(0))}" y1="${round(y)}" x2="${round(px(1))}" ` +
      `y2="${round(y)}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${round(px(0) - 8)}" y="${round(y + 4)}" text-anchor="end" ` +
      `font-size="11">${formatTick(tick)}</text>`,
    );
  }
  frame(parts, px, py);

  figure.series.forEach((series, idx) => {
    const color = SERIES_COLORS[idx % SERIES_COLORS.length];
    const coords = series.points.map(
      (p) => `${round(px(xScale.unit(p.x)))},${round(py(yScale.unit(p.y)))}`,
    );
    if (coords.length > 1) {
      parts.push(
        `<polyline points="${coords.join(" ")}" fill="none" stroke="${color}" ` +
        `stroke-width="1.5"/>`,
      );
    }
    for (const c of coords) {
      const [cx, cy] = c.split(",");
      parts.push(`<circle cx="${cx}" cy="${cy}" r="3.5" fill="${color}"/>`);
    }
    const ly = MARGIN.top + 14 + idx * 18;
    parts.push(
      `<rect x="${WIDTH - MARGIN.right + 12}" y="${ly - 8}" width="10" height="10" ` +
      `fill="${color}"/>`,
    );
    parts.push(
      `<text x="${WIDTH - MARGIN.right + 28}" y="${ly + 1}" font-size="11">` +
      `${esc(series.label)}</text>`,
    );
  });
}

function renderBars(
  parts: string[],
  bars: BarPair[],
  px: (u: number) => number,
  py: (u: number) => number,
  plotH: number,
): void {
  const values = bars.flatMap((b) => [b.empirical, b.bound]);
  const yScale = makeScale([0, ...values], false);
  for (const tick of yScale.ticks) {
    const y = py(yScale.unit(tick));
    parts.push(
      `<line x1="${round(px(0))}" y1="${round(y)}" x2="${round(px(1))}" ` +
      `y2="${round(y)}" stroke="#dddddd"/>`,
    );
    parts.push(
      `<text x="${round(px(0) - 8)}" y="${round(y + 4)}" text-anchor="end" ` +
      `font-size="11">${formatTick(tick)}</text>`,
    );
  }
  frame(parts, px, py);

  const groupWidth = 1 / bars.length;
  bars.forEach((bar, idx) => {
    const center = (idx + 0.5) * groupWidth;
    const barW = Math.min(0.35 * groupWidth, 0.08);
    const zero = py(yScale.unit(0));
    const pairs: Array<[number, string]> = [
      [bar.empirical, SERIES_COLORS[0]],
      [bar.bound, SERIES_COLORS[1]],
    ];
    pairs.forEach(([value, color], side) => {
      const u = center + (side === 0 ? -barW : 0.1 * barW);
      const top = py(yScale.unit(value));
      parts.push(
        `<rect x="${round(px(u))}" y="${round(Math.min(top, zero))}" ` +
        `width="${round(barW * (px(1) - px(0)))}" ` +
        `height="${round(Math.abs(zero - top))}" fill="${color}"/>`,
      );
    });
    parts.push(
      `<text x="${round(px(center))}" y="${round(py(0) + 18)}" text-anchor="middle" ` +
      `font-size="10">${esc(bar.label)}</text>`,
    );
  });

  // legend
  const lx = WIDTH - MARGIN.right + 12;
  [["empirical", SERIES_COLORS[0]], ["bound", SERIES_COLORS[1]]].forEach(
    ([label, color], idx) => {
      const ly = MARGIN.top + 14 + idx * 18;
      parts.push(`<rect x="${lx}" y="${ly - 8}" width="10" height="10" fill="${color}"/>`);
      parts.push(`<text x="${lx + 16}" y="${ly + 1}" font-size="11">${label}</text>`);
    },
  );
}
