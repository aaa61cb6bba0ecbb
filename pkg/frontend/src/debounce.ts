/**
 * Trailing-edge debounce: rapid slider drags collapse to at most one call
 * per window, the last value always wins.
 */

export interface Debouncer<T> {
  (value: T): void;
  cancel(): void;
  flush(): void;
}

export function debounce<T>(waitMs: number, fn: (value: T) => void): Debouncer<T> {
  let timer: ReturnType<typeof setTimeout> | null = null;
  let pending: { value: T } | null = null;

  const call = ((value: T) => {
    pending = { value };
    if (timer !== null) clearTimeout(timer);
    timer = setTimeout(() => {
      timer = null;
      const p = pending;
      pending = null;
      if (p) fn(p.value);
    }, waitMs);
  }) as Debouncer<T>;

  call.cancel = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    pending = null;
  };
  call.flush = () => {
    if (timer !== null) clearTimeout(timer);
    timer = null;
    const p = pending;
    pending = null;
    if (p) fn(p.value);
  };
  return call;
}
