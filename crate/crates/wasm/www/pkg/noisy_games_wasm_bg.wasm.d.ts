/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_game_free: (a: number, b: number) => void;
export const game_hint: (a: number) => [number, number, number, number];
export const game_new: (a: number, b: number, c: number, d: number) => [number, number, number];
export const game_play: (a: number, b: number) => [number, number, number, number];
export const game_state: (a: number) => [number, number];
export const solve: (a: number, b: number) => [number, number, number, number];
export const sweep: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
