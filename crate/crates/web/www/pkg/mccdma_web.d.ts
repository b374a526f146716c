/* tslint:disable */
/* eslint-disable */

/**
 * Power trajectory of best-response dynamics from all-zero powers.
 */
export class DynamicsTrace {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    carriers(): number;
    converged(): boolean;
    /**
     * `(rounds + 1) × users × carriers` powers in watts, row-major per
     * round.
     */
    powers(): Float64Array;
    /**
     * Rounds recorded, not counting the initial state.
     */
    rounds(): number;
    users(): number;
}

export function dynamics_trace(gains: Float64Array, users: number, carriers: number, processing_gain: number, max_rounds: number): DynamicsTrace;

export function gamma_star(exponent: number): number;

/**
 * Load distribution of carrier 1 against processing gain.
 *
 * For every entry of `processing_gains` the output holds `2(K + 2)`
 * numbers: the analytic `P(0..=K)` and no-equilibrium mass (NaN unless
 * `K = D = 2`), then the Monte-Carlo estimates of the same.
 */
export function pmf_curve(users: number, carriers: number, processing_gains: Uint32Array, trials: number, seed: number): Float64Array;

/**
 * Equilibrium region of the two-user game over a square grid of gain
 * ratios. Column `i` sweeps user 1's `h₁₁/h₁₂` and row `j` user 2's
 * `h₂₁/h₂₂`, both from `-span_db` to `+span_db`; row 0 is the top
 * (largest ratio). Codes index `Region::ALL`.
 */
export function region_map(processing_gain: number, exponent: number, resolution: number, span_db: number): Uint8Array;

/**
 * Human-readable label for a code returned by [`region_map`].
 */
export function region_name(code: number): string;

/**
 * Random Rayleigh power gains, `users × carriers`, row-major.
 */
export function sample_gains(users: number, carriers: number, seed: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_dynamicstrace_free: (a: number, b: number) => void;
    readonly dynamics_trace: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly dynamicstrace_carriers: (a: number) => number;
    readonly dynamicstrace_converged: (a: number) => number;
    readonly dynamicstrace_powers: (a: number) => [number, number];
    readonly dynamicstrace_rounds: (a: number) => number;
    readonly dynamicstrace_users: (a: number) => number;
    readonly gamma_star: (a: number) => [number, number, number];
    readonly pmf_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly region_map: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly region_name: (a: number) => [number, number];
    readonly sample_gains: (a: number, b: number, c: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
