// Minimal stroke font for raster output: each glyph is a list of
// polylines on a 4-wide grid, y from 0 (top) to 6 (baseline); descenders
// reach 8.  Labels are lowercased before lookup.

export type Stroke = Array<[number, number]>;

export const GLYPH_WIDTH = 4;
export const GLYPH_HEIGHT = 6;
export const GLYPH_ADVANCE = 6;

const G: Record<string, Stroke[]> = {
  "0": [[[0, 0], [4, 0], [4, 6], [0, 6], [0, 0]]],
  "1": [[[1, 1], [2, 0], [2, 6]], [[1, 6], [3, 6]]],
  "2": [[[0, 0], [4, 0], [4, 3], [0, 3], [0, 6], [4, 6]]],
  "3": [[[0, 0], [4, 0], [4, 6], [0, 6]], [[1, 3], [4, 3]]],
  "4": [[[3, 6], [3, 0], [0, 3], [4, 3]]],
  "5": [[[4, 0], [0, 0], [0, 3], [4, 3], [4, 6], [0, 6]]],
  "6": [[[4, 0], [0, 0], [0, 6], [4, 6], [4, 3], [0, 3]]],
  "7": [[[0, 0], [4, 0], [1, 6]]],
  "8": [[[0, 0], [4, 0], [4, 6], [0, 6], [0, 0]], [[0, 3], [4, 3]]],
  "9": [[[0, 6], [4, 6], [4, 0], [0, 0], [0, 3], [4, 3]]],
  ".": [[[1, 5], [2, 5], [2, 6], [1, 6], [1, 5]]],
  ",": [[[2, 5], [2, 6], [1, 7]]],
  "-": [[[0, 3], [4, 3]]],
  "+": [[[0, 3], [4, 3]], [[2, 1], [2, 5]]],
  "=": [[[0, 2], [4, 2]], [[0, 4], [4, 4]]],
  "(": [[[3, 0], [1, 2], [1, 4], [3, 6]]],
  ")": [[[1, 0], [3, 2], [3, 4], [1, 6]]],
  "/": [[[0, 6], [4, 0]]],
  ":": [[[2, 2], [2, 3]], [[2, 5], [2, 6]]],
  "%": [[[0, 6], [4, 0]], [[0, 0], [1, 0], [1, 1], [0, 1], [0, 0]],
        [[3, 5], [4, 5], [4, 6], [3, 6], [3, 5]]],
  "_": [[[0, 6], [4, 6]]],
  " ": [],
  a: [[[4, 6], [4, 3], [3, 2], [1, 2], [0, 3], [1, 4], [4, 4]]],
  b: [[[0, 0], [0, 6], [3, 6], [4, 5], [4, 3], [3, 2], [0, 2]]],
  c: [[[4, 2], [1, 2], [0, 3], [0, 5], [1, 6], [4, 6]]],
  d: [[[4, 0], [4, 6], [1, 6], [0, 5], [0, 3], [1, 2], [4, 2]]],
  e: [[[0, 4], [4, 4], [4, 3], [3, 2], [1, 2], [0, 3], [0, 5], [1, 6], [4, 6]]],
  f: [[[3, 0], [2, 0], [1, 1], [1, 6]], [[0, 3], [3, 3]]],
  g: [[[4, 2], [1, 2], [0, 3], [0, 5], [1, 6], [4, 6], [4, 7], [3, 8], [1, 8]]],
  h: [[[0, 0], [0, 6]], [[0, 3], [2, 2], [3, 2], [4, 3], [4, 6]]],
  i: [[[2, 2], [2, 6]], [[2, 0], [2, 1]]],
  j: [[[3, 2], [3, 7], [2, 8], [1, 8]], [[3, 0], [3, 1]]],
  k: [[[0, 0], [0, 6]], [[4, 2], [0, 4], [4, 6]]],
  l: [[[2, 0], [2, 6]]],
  m: [[[0, 6], [0, 2], [1, 2], [2, 3], [2, 6]], [[2, 3], [3, 2], [4, 3], [4, 6]]],
  n: [[[0, 6], [0, 2], [3, 2], [4, 3], [4, 6]]],
  o: [[[1, 2], [3, 2], [4, 3], [4, 5], [3, 6], [1, 6], [0, 5], [0, 3], [1, 2]]],
  p: [[[0, 2], [0, 8]], [[0, 2], [3, 2], [4, 3], [4, 5], [3, 6], [0, 6]]],
  q: [[[4, 2], [4, 8]], [[4, 2], [1, 2], [0, 3], [0, 5], [1, 6], [4, 6]]],
  r: [[[0, 2], [0, 6]], [[0, 3], [2, 2], [4, 2]]],
  s: [[[4, 2], [1, 2], [0, 3], [4, 5], [3, 6], [0, 6]]],
  t: [[[2, 0], [2, 5], [3, 6]], [[0, 2], [4, 2]]],
  u: [[[0, 2], [0, 5], [1, 6], [4, 6], [4, 2]]],
  v: [[[0, 2], [2, 6], [4, 2]]],
  w: [[[0, 2], [1, 6], [2, 3], [3, 6], [4, 2]]],
  x: [[[0, 2], [4, 6]], [[4, 2], [0, 6]]],
  y: [[[0, 2], [2, 6]], [[4, 2], [1, 8], [0, 8]]],
  z: [[[0, 2], [4, 2], [0, 6], [4, 6]]],
};

export function glyphStrokes(ch: string): Stroke[] {
  const key = ch.toLowerCase();
  return G[key] ?? G["_"];
}
