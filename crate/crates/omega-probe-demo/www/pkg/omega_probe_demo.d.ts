/* tslint:disable */
/* eslint-disable */

/**
 * The ω-cloud as a closed polyline `[[x, y], ...]` plus the narrow count.
 */
export function cloud(polygon: string, omega: number): string;

/**
 * One probe along the line through `(ox, oy)` with direction `(dx, dy)`.
 */
export function probe(polygon: string, omega: number, ox: number, oy: number, dx: number, dy: number): string;

/**
 * A random polygon with `narrow` vertices of angle below ω.
 */
export function random_polygon(omega: number, n: number, narrow: number, seed: bigint): string;

/**
 * Full reconstruction with its transcript. `algorithm` is one of `auto`,
 * `input1`, `input2`, `general`, `greedy`; a non-positive `epsilon` means none.
 */
export function reconstruct(polygon: string, omega: number, algorithm: string, epsilon: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly cloud: (a: number, b: number, c: number) => [number, number, number, number];
    readonly probe: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number, number];
    readonly random_polygon: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
    readonly reconstruct: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
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
