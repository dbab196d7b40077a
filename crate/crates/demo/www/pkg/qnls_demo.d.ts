/* tslint:disable */
/* eslint-disable */

/**
 * `[xi_0, |A_2(xi_0, t)|, xi_1, ...]` over the low output window of the F1 probe.
 */
export function a2_profile(n: number, t: number): Float64Array;

/**
 * `[fitted, predicted, log2 N_0, log2 norm_0, log2 N_1, ...]` for `N = 2^4 .. 2^max_exp`.
 */
export function growth_curve(family: string, s: number, a: number, eps0: number, max_exp: number): Float64Array;

/**
 * `points` samples of `[xi, m(xi)]` on `[-8, 8]` followed by `points` samples
 * of `[t, eta(t)]` on `[-3, 3]`.
 */
export function weight_curves(s: number, a: number, points: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly a2_profile: (a: number, b: number) => [number, number, number, number];
    readonly growth_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly weight_curves: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
