// Raster backend: draws the figure into an RGBA buffer and encodes a
// PNG with node's zlib.  No native or DOM dependencies; output bytes are
// deterministic for a given figure.

import { deflateSync } from "node:zlib";

import { BarPair, Figure, SERIES_COLORS, formatTick, makeScale } from "./figure.js";
import { GLYPH_ADVANCE, GLYPH_HEIGHT, glyphStrokes } from "./font.js";

const WIDTH = 720;
const HEIGHT = 480;
const MARGIN = { left: 70, right: 170, top: 40, bottom: 55 };

type Color = [number, number, number];

function parseColor(hex: string): Color {
  return [
    parseInt(hex.slice(1, 3), 16),
    parseInt(hex.slice(3, 5), 16),
    parseInt(hex.slice(5, 7), 16),
  ];
}

const BLACK: Color = [0, 0, 0];
const GRID: Color = [221, 221, 221];

class Canvas {
  data: Uint8Array;

  constructor(public width: number, public height: number) {
    this.data = new Uint8Array(width * height * 4).fill(255);
  }

  set(x: number, y: number, color: Color): void {
    x = Math.round(x);
    y = Math.round(y);
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const offset = (y * this.width + x) * 4;
    this.data[offset] = color[0];
    this.data[offset + 1] = color[1];
    this.data[offset + 2] = color[2];
    this.data[offset + 3] = 255;
  }

  line(x0: number, y0: number, x1: number, y1: number, color: Color): void {
    const steps = Math.max(Math.abs(x1 - x0), Math.abs(y1 - y0), 1);
    for (let i = 0; i <= steps; i++) {
      const t = i / steps;
      this.set(x0 + (x1 - x0) * t, y0 + (y1 - y0) * t, color);
    }
  }

  disc(cx: number, cy: number, r: number, color: Color): void {
    for (let y = Math.floor(cy - r); y <= cy + r; y++) {
      for (let x = Math.floor(cx - r); x <= cx + r; x++) {
        if ((x - cx) ** 2 + (y - cy) ** 2 <= r * r) this.set(x, y, color);
      }
    }
  }

  rect(x: number, y: number, w: number, h: number, color: Color): void {
    for (let yy = Math.round(y); yy < y + h; yy++) {
      for (let xx = Math.round(x); xx < x + w; xx++) {
        this.set(xx, yy, color);
      }
    }
  }

  // anchor: -1 left, 0 center, 1 right edge at (x, y-baseline)
  text(str: string, x: number, y: number, size: number, color: Color, anchor = -1): void {
    const scale = size / GLYPH_HEIGHT;
    const total = str.length * GLYPH_ADVANCE * scale;
    let penX = anchor === 0 ? x - total / 2 : anchor === 1 ? x - total : x;
    for (const ch of str) {
      for (const stroke of glyphStrokes(ch)) {
        for (let i = 0; i + 1 < stroke.length; i++) {
          this.line(
            penX + stroke[i][0] * scale,
            y - size + stroke[i][1] * scale,
            penX + stroke[i + 1][0] * scale,
            y - size + stroke[i + 1][1] * scale,
            color,
          );
        }
      }
      penX += GLYPH_ADVANCE * scale;
    }
  }
}

// --- PNG encoding -----------------------------------------------------

const CRC_TABLE = (() => {
  const table = new Uint32Array(256);
  for (let n = 0; n < 256; n++) {
    let c = n;
    for (let k = 0; k < 8; k++) {
      c = c & 1 ? 0xedb88320 ^ (c >>> 1) : c >>> 1;
    }
    table[n] = c >>> 0;
  }
  return table;
})();

function crc32(bytes: Uint8Array): number {
  let c = 0xffffffff;
  for (const b of bytes) {
    c = CRC_TABLE[(c ^ b) & 0xff] ^ (c >>> 8);
  }
  return (c ^ 0xffffffff) >>> 0;
}

function chunk(type: string, payload: Uint8Array): Buffer {
  const head = Buffer.alloc(8);
  head.writeUInt32BE(payload.length, 0);
  head.write(type, 4, "ascii");
  const body = Buffer.concat([Buffer.from(type, "ascii"), Buffer.from(payload)]);
  const crc = Buffer.alloc(4);
  crc.writeUInt32BE(crc32(body), 0);
  return Buffer.concat([head, Buffer.from(payload.buffer ? payload : payload), crc]);
}

export function encodePng(canvas: Canvas): Buffer {
  const { width, height, data } = canvas;
  const ihdr = Buffer.alloc(13);
  ihdr.writeUInt32BE(width, 0);
  ihdr.writeUInt32BE(height, 4);
  ihdr[8] = 8; // bit depth
  ihdr[9] = 6; // RGBA
  const raw = Buffer.alloc(height * (1 + width * 4));
  for (let y = 0; y < height; y++) {
    raw[y * (1 + width * 4)] = 0; // filter: none
    data
      .subarray(y * width * 4, (y + 1) * width * 4)
      .forEach((v, i) => (raw[y * (1 + width * 4) + 1 + i] = v));
  }
  const idat = deflateSync(raw, { level: 9 });
  return Buffer.concat([
    Buffer.from([0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a]),
    chunk("IHDR", ihdr),
    chunk("IDAT", idat),
    chunk("IEND", new Uint8Array(0)),
  ]);
}

// --- figure drawing ---------------------------------------------------

export function renderPng(figure: Figure): Buffer {
  const canvas = new Canvas(WIDTH, HEIGHT);
  const plotW = WIDTH - MARGIN.left - MARGIN.right;
  const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;
  const px = (u: number) => MARGIN.left + u * plotW;
  const py = (u: number) => MARGIN.top + (1 - u) * plotH;

  canvas.text(figure.title, WIDTH / 2, 26, 12, BLACK, 0);

  if (figure.bars !== null) {
    drawBars(canvas, figure.bars, px, py);
  } else {
    drawSeries(canvas, figure, px, py);
  }

  canvas.text(figure.xLabel, MARGIN.left + plotW / 2, HEIGHT - 14, 10, BLACK, 0);
  canvas.text(figure.yLabel, 8, MARGIN.top - 14, 8, BLACK, -1);
  canvas.line(px(0), py(0), px(1), py(0), BLACK);
  canvas.line(px(0), py(0), px(0), py(1), BLACK);
  return encodePng(canvas);
}

function drawSeries(
  canvas: Canvas,
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
    canvas.line(x, py(0), x, py(1), GRID);
    canvas.line(x, py(0), x, py(0) + 4, BLACK);
    canvas.text(formatTick(tick), x, py(0) + 18, 8, BLACK, 0);
  }
  for (const tick of yScale.ticks) {
    const y = py(yScale.unit(tick));
    canvas.line(px(0), y, px(1), y, GRID);
    canvas.line(px(0) - 4, y, px(0), y, BLACK);
    canvas.text(formatTick(tick), px(0) - 8, y + 4, 8, BLACK, 1);
  }

  figure.series.forEach((series, idx) => {
    const color = parseColor(SERIES_COLORS[idx % SERIES_COLORS.length]);
    let prev: [number, number] | null = null;
    for (const point of series.points) {
      const x = px(xScale.unit(point.x));
      const y = py(yScale.unit(point.y));
      if (prev) canvas.line(prev[0], prev[1], x, y, color);
      canvas.disc(x, y, 3, color);
      prev = [x, y];
    }
    const ly = MARGIN.top + 12 + idx * 16;
    canvas.rect(WIDTH - MARGIN.right + 12, ly - 8, 10, 10, color);
    canvas.text(series.label, WIDTH - MARGIN.right + 28, ly + 2, 8, BLACK, -1);
  });
}

function drawBars(
  canvas: Canvas,
  bars: BarPair[],
  px: (u: number) => number,
  py: (u: number) => number,
): void {
  const values = bars.flatMap((b) => [b.empirical, b.bound]);
  const yScale = makeScale([0, ...values], false);
  for (const tick of yScale.ticks) {
    const y = py(yScale.unit(tick));
    canvas.line(px(0), y, px(1), y, GRID);
    canvas.text(formatTick(tick), px(0) - 8, y + 4, 8, BLACK, 1);
  }
  const groupWidth = 1 / bars.length;
  const empColor = parseColor(SERIES_COLORS[0]);
  const boundColor = parseColor(SERIES_COLORS[1]);
  bars.forEach((bar, idx) => {
    const center = (idx + 0.5) * groupWidth;
    const barW = Math.min(0.35 * groupWidth, 0.08) * (px(1) - px(0));
    const zero = py(yScale.unit(0));
    const drawBar = (value: number, color: Color, offset: number) => {
      const top = py(yScale.unit(value));
      canvas.rect(
        px(center) + offset,
        Math.min(top, zero),
        Math.max(1, barW),
        Math.max(1, Math.abs(zero - top)),
        color,
      );
    };
    drawBar(bar.empirical, empColor, -barW - 1);
    drawBar(bar.bound, boundColor, 1);
    canvas.text(bar.label, px(center), py(0) + 18, 7, BLACK, 0);
  });
  canvas.rect(WIDTH - MARGIN.right + 12, MARGIN.top + 4, 10, 10, empColor);
  canvas.text("empirical", WIDTH - MARGIN.right + 28, MARGIN.top + 14, 8, BLACK, -1);
  canvas.rect(WIDTH - MARGIN.right + 12, MARGIN.top + 20, 10, 10, boundColor);
  canvas.text("bound", WIDTH - MARGIN.right + 28, MARGIN.top + 30, 8, BLACK, -1);
}

export { Canvas };
