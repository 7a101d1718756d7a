/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_point_free: (a: number, b: number) => void;
export const heatmap: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const point: (a: number, b: number, c: number, d: number) => [number, number, number];
export const point_concurrence: (a: number) => number;
export const point_eur_rhs: (a: number) => number;
export const point_gamma: (a: number) => number;
export const point_h_ab: (a: number) => number;
export const point_h_rb: (a: number) => number;
export const point_h_sb: (a: number) => number;
export const point_l_tra: (a: number) => number;
export const point_lhs: (a: number) => number;
export const point_u: (a: number) => [number, number];
export const point_u_eur: (a: number) => [number, number];
export const point_w: (a: number) => number;
export const temperature_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
