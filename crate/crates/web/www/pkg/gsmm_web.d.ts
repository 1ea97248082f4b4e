/* tslint:disable */
/* eslint-disable */

/**
 * `‖∇Φ‖` curves for NSGDA-M (batch 1), NSGDA and SGDA (batch `batch`), laid out as
 * `[points, record_every, nsgda-m..., nsgda..., sgda...]`. Aborted runs pad with NaN.
 */
export function convergence_curves(problem_name: string, iters: number, eta_x: number, eta_y: number, beta: number, batch: number, seed: number): Float64Array;

/**
 * Projection of `(a, b, c)` onto the 2-simplex: `[p0, p1, p2, active_count, shift]`.
 */
export function project_simplex3(a: number, b: number, c: number): Float64Array;

/**
 * `key=value` lines for schedule `theorem` in statement mode.
 */
export function schedule_calc(theorem: number, mu: number, b: number, lx0: number, lx1: number, ly0: number, ly1: number, sigma_x: number, sigma_y: number, epsilon: number, delta: number, delta_phi: number, delta_y0: number, m0_bias: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly convergence_curves: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly project_simplex3: (a: number, b: number, c: number) => [number, number, number, number];
    readonly schedule_calc: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number, j: number, k: number, l: number, m: number, n: number) => [number, number, number, number];
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
