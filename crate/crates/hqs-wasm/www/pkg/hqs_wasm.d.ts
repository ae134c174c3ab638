/* tslint:disable */
/* eslint-disable */

/**
 * Born-convergence histogram: outcome frequencies over `trials` fresh Haar
 * hidden states against the Born distribution of the given weights.
 */
export function born_histogram(psi_weights: string, trials: number, seed: number): string;

/**
 * Contextuality explorer: one qutrit psi and one hidden phi (outcome
 * weights, not amplitudes), selected in the S_z basis and in the rotated
 * basis {|+>, |->, |mz=+1>} that still contains mz=+1.
 */
export function contextual_pair(psi_weights: string, phi_weights: string): string;

/**
 * Sequential-measurement sweep: lag-1 correlations of repeated X (and Z)
 * outcomes as the hidden-state keep-probability kappa varies.
 */
export function sequential_sweep(kappas: string, trials: number, length: number, seed: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly born_histogram: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly contextual_pair: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly sequential_sweep: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
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
