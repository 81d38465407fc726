/* tslint:disable */
/* eslint-disable */

/**
 * ETDRK4 run on an `n × n` torus of side `16π`.
 */
export class Simulation {
    free(): void;
    [Symbol.dispose](): void;
    l2_drift(): number;
    l2_norm(): number;
    constructor(alpha: number, n: number, profile: string, amplitude: number, width: number, dt: number);
    size(): number;
    step(steps: number): void;
    time(): number;
    /**
     * Physical values, `x` outer, `y` inner.
     */
    values(): Float64Array;
}

/**
 * Selected exponents and condition slacks as a JSON string.
 */
export function exponents(alpha: number, s: number): string;

/**
 * Region index per pixel of the `(ξ1, ξ − ξ1) ∈ [−k, k]²` plane, rows from
 * top (`ξ − ξ1 = k`) to bottom, in the order of [`region_names`]; the extra
 * index `8` marks `ξ = 0`.
 */
export function region_map(alpha: number, n: number, k: number, eta: number, eta1: number, lambda: number, lambda1: number): Uint8Array;

export function region_names(): string[];

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_simulation_free: (a: number, b: number) => void;
    readonly exponents: (a: number, b: number) => [number, number, number, number];
    readonly region_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly region_names: () => [number, number];
    readonly simulation_l2_drift: (a: number) => number;
    readonly simulation_l2_norm: (a: number) => number;
    readonly simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly simulation_size: (a: number) => number;
    readonly simulation_step: (a: number, b: number) => void;
    readonly simulation_time: (a: number) => number;
    readonly simulation_values: (a: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
