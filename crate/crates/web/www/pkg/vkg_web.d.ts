/* tslint:disable */
/* eslint-disable */

/**
 * Free Klein-Gordon evolution of a Gaussian `φ₀`.
 */
export class KgPulse {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Exact propagation by `dt`.
     */
    advance(dt: number): void;
    energy(): number;
    constructor(points: number, half_length: number, width: number, momentum: number);
    phi(): Float64Array;
    sup_norm(): number;
    time(): number;
    x(): Float64Array;
}

/**
 * The coupled 1-D system on a small lattice.
 */
export class PhaseSpace {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Steps forward, stopping at the pre-wrap horizon; returns the steps taken.
     */
    advance(steps: number): number;
    density(): Float64Array;
    electric(): Float64Array;
    /**
     * `f` on the lattice, row `iv`, column `ix`.
     */
    f(): Float64Array;
    half_length(): number;
    horizon(): number;
    constructor(epsilon0: number, phi0_scale: number, coupling: boolean);
    /**
     * `[‖ρ‖∞, ‖E‖∞, ‖E^osc₊‖∞, ‖E^r‖∞]`.
     */
    norms(): Float64Array;
    nv(): number;
    nx(): number;
    time(): number;
    v_max(): number;
}

/**
 * Least-squares log-log slope on `[t0, t1]`: `[exponent, rms residual]`.
 */
export function fit_power_law(times: Float64Array, values: Float64Array, t0: number, t1: number): Float64Array;

/**
 * Both sides of the integrated-oscillation identity for one mode:
 * `[lhs.re, lhs.im, rhs.re, rhs.im, residual]`.
 */
export function keyint(plus: boolean, k: number, v: number, x: number, t: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_kgpulse_free: (a: number, b: number) => void;
    readonly __wbg_phasespace_free: (a: number, b: number) => void;
    readonly fit_power_law: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly keyint: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly kgpulse_advance: (a: number, b: number) => void;
    readonly kgpulse_energy: (a: number) => number;
    readonly kgpulse_new: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly kgpulse_phi: (a: number) => [number, number, number, number];
    readonly kgpulse_sup_norm: (a: number) => number;
    readonly kgpulse_time: (a: number) => number;
    readonly kgpulse_x: (a: number) => [number, number];
    readonly phasespace_advance: (a: number, b: number) => [number, number, number];
    readonly phasespace_density: (a: number) => [number, number, number, number];
    readonly phasespace_electric: (a: number) => [number, number, number, number];
    readonly phasespace_f: (a: number) => [number, number];
    readonly phasespace_half_length: (a: number) => number;
    readonly phasespace_horizon: (a: number) => number;
    readonly phasespace_new: (a: number, b: number, c: number) => [number, number, number];
    readonly phasespace_norms: (a: number) => [number, number, number, number];
    readonly phasespace_nv: (a: number) => number;
    readonly phasespace_nx: (a: number) => number;
    readonly phasespace_time: (a: number) => number;
    readonly phasespace_v_max: (a: number) => number;
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
