/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    frameCount(): number;
    height(): number;
    /**
     * Builds the scene and renders the synthetic walk. `survivors` and `q`
     * set the filter's particle budget (`survivors * q^4`).
     */
    constructor(seed: number, survivors: number, q: number);
    nextFrame(): number;
    /**
     * Scores hand-set tracked-dof values against `frame`; returns
     * `[common, silhouette_only, model_only, weight]`.
     */
    probe(frame: number, values: Float64Array): Float64Array;
    /**
     * RGBA pixels of the last rendering: green where silhouette and model
     * agree, red for silhouette only, blue for model only.
     */
    rgba(): Uint8Array;
    /**
     * Tracks the next frame; returns `[frame, mae, weight, lost, measured]`,
     * or an empty array at the end of the sequence.
     */
    step(): Float64Array;
    /**
     * Tracked-dof values of the true pose at `frame`
     * (l_hip_z, r_hip_z, l_knee_z, r_knee_z).
     */
    truthValues(frame: number): Float64Array;
    width(): number;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_frameCount: (a: number) => number;
    readonly demo_height: (a: number) => number;
    readonly demo_new: (a: number, b: number, c: number) => [number, number, number];
    readonly demo_nextFrame: (a: number) => number;
    readonly demo_probe: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly demo_rgba: (a: number) => [number, number];
    readonly demo_step: (a: number) => [number, number, number, number];
    readonly demo_truthValues: (a: number, b: number) => [number, number];
    readonly demo_width: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
