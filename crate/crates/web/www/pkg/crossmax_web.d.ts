/* tslint:disable */
/* eslint-disable */

/**
 * Decoded image and its statistics.
 */
export class Reconstruction {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly pixels: Uint8Array;
    /**
     * `Infinity` for a lossless result.
     */
    readonly psnr: number;
    readonly rank: number;
    readonly ratio: number;
}

/**
 * Rank-`rank` cross reconstruction of a grayscale raster.
 */
export function compressImage(width: number, height: number, pixels: Uint8Array, rank: number, h: number): Reconstruction;

export function maxvolTrace(n: number, r: number, h: number, seed: bigint): Float64Array;

export function pivotalPoints(_function: string, degree: number, grid: number): Float64Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_reconstruction_free: (a: number, b: number) => void;
    readonly compressImage: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number];
    readonly maxvolTrace: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly pivotalPoints: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly reconstruction_pixels: (a: number) => [number, number];
    readonly reconstruction_psnr: (a: number) => number;
    readonly reconstruction_rank: (a: number) => number;
    readonly reconstruction_ratio: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
