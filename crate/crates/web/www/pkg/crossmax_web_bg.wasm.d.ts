/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_reconstruction_free: (a: number, b: number) => void;
export const compressImage: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
export const maxvolTrace: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const pivotalPoints: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const reconstruction_pixels: (a: number) => [number, number];
export const reconstruction_psnr: (a: number) => number;
export const reconstruction_rank: (a: number) => number;
export const reconstruction_ratio: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
