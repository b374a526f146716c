/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_dynamicstrace_free: (a: number, b: number) => void;
export const dynamics_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const dynamicstrace_carriers: (a: number) => number;
export const dynamicstrace_converged: (a: number) => number;
export const dynamicstrace_powers: (a: number) => [number, number];
export const dynamicstrace_rounds: (a: number) => number;
export const dynamicstrace_users: (a: number) => number;
export const gamma_star: (a: number) => [number, number, number];
export const pmf_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const region_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const region_name: (a: number) => [number, number];
export const sample_gains: (a: number, b: number, c: number) => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
