/* tslint:disable */
/* eslint-disable */

/**
 * Extremal and exposed points of the setup's domain:
 * `{"extremal": Report, "exposed": Report}`.
 */
export function extremal_and_exposed(setup: string): string;

/**
 * Monte Carlo estimate plus the per-sample outcomes:
 * `{"report": Report, "samples": [SampleOutcome, ...]}`.
 */
export function genericity(setup: string, epsilon: number, samples: number, seed: number): string;

/**
 * Bauer witness of the setup's single field, then a perturbation of size
 * below `epsilon` with a unique maximizer: `{"bauer": Report, "perturb": Report}`.
 */
export function maximize(setup: string, epsilon: number): string;

/**
 * Runs a complete scenario document and returns its report.
 */
export function run_scenario(scenario: string): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly extremal_and_exposed: (a: number, b: number) => [number, number];
    readonly genericity: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly maximize: (a: number, b: number, c: number) => [number, number];
    readonly run_scenario: (a: number, b: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
