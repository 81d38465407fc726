/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_simulation_free: (a: number, b: number) => void;
export const exponents: (a: number, b: number) => [number, number, number, number];
export const region_map: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
export const region_names: () => [number, number];
export const simulation_l2_drift: (a: number) => number;
export const simulation_l2_norm: (a: number) => number;
export const simulation_new: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const simulation_size: (a: number) => number;
export const simulation_step: (a: number, b: number) => void;
export const simulation_time: (a: number) => number;
export const simulation_values: (a: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
