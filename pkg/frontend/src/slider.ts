/** Trailing debounce used while the timeline slider is dragged. */

export const SCRUB_DEBOUNCE_MS = 150;

export function trailingDebounce<A extends unknown[]>(
  delayMs: number,
  fn: (...args: A) => void,
): (...args: A) => void {
  let handle: ReturnType<typeof setTimeout> | undefined;
  return (...args: A) => {
    if (handle !== undefined) {
      clearTimeout(handle);
    }
    handle = setTimeout(() => {
      handle = undefined;
      fn(...args);
    }, delayMs);
  };
}
