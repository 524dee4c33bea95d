/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_kgpulse_free: (a: number, b: number) => void;
export const __wbg_phasespace_free: (a: number, b: number) => void;
export const fit_power_law: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const keyint: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const kgpulse_advance: (a: number, b: number) => void;
export const kgpulse_energy: (a: number) => number;
export const kgpulse_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const kgpulse_phi: (a: number) => [number, number, number, number];
export const kgpulse_sup_norm: (a: number) => number;
export const kgpulse_time: (a: number) => number;
export const kgpulse_x: (a: number) => [number, number];
export const phasespace_advance: (a: number, b: number) => [number, number, number];
export const phasespace_density: (a: number) => [number, number, number, number];
export const phasespace_electric: (a: number) => [number, number, number, number];
export const phasespace_f: (a: number) => [number, number];
export const phasespace_half_length: (a: number) => number;
export const phasespace_horizon: (a: number) => number;
export const phasespace_new: (a: number, b: number, c: number) => [number, number, number];
export const phasespace_norms: (a: number) => [number, number, number, number];
export const phasespace_nv: (a: number) => number;
export const phasespace_nx: (a: number) => number;
export const phasespace_time: (a: number) => number;
export const phasespace_v_max: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
