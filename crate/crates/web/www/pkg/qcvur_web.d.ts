/* tslint:disable */
/* eslint-disable */

/**
 * Every quantity at one `(D, J, T)` point.
 */
export class Point {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly concurrence: number;
    readonly eur_rhs: number;
    readonly gamma: number;
    readonly h_ab: number;
    readonly h_rb: number;
    readonly h_sb: number;
    readonly l_tra: number;
    readonly lhs: number;
    readonly u: number | undefined;
    readonly u_eur: number | undefined;
    readonly w: number;
}

export function heatmap(quantity: string, t: number, theta: number, resolution: number): Float64Array;

export function point(d: number, j: number, t: number, theta: number): Point;

export function temperature_curve(d: number, j: number, theta: number, t_min: number, t_max: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_point_free: (a: number, b: number) => void;
    readonly heatmap: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly point: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly point_concurrence: (a: number) => number;
    readonly point_eur_rhs: (a: number) => number;
    readonly point_gamma: (a: number) => number;
    readonly point_h_ab: (a: number) => number;
    readonly point_h_rb: (a: number) => number;
    readonly point_h_sb: (a: number) => number;
    readonly point_l_tra: (a: number) => number;
    readonly point_lhs: (a: number) => number;
    readonly point_u: (a: number) => [number, number];
    readonly point_u_eur: (a: number) => [number, number];
    readonly point_w: (a: number) => number;
    readonly temperature_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
