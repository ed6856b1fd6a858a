/** Local persistence of view + selection state over an injectable storage.
 *
 * Saved on every mutation and restored on load so a page refresh keeps the
 * analyst's selections, pairs, and view toggles.
 */

import { DEFAULT_VIEW } from "./types.js";
import type { SelectionState, ViewState } from "./types.js";
import { emptyState } from "./state.js";

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface PersistedDoc {
  state: SelectionState;
  view: ViewState;
  revision: number;
}

const KEY_PREFIX = "sonolens:";

export function storageKey(sessionId: string): string {
  return KEY_PREFIX + sessionId;
}

export function saveLocal(
  storage: StorageLike,
  sessionId: string,
  doc: PersistedDoc,
): void {
  storage.setItem(storageKey(sessionId), JSON.stringify(doc));
}

export function loadLocal(
  storage: StorageLike,
  sessionId: string,
): PersistedDoc | null {
  const raw = storage.getItem(storageKey(sessionId));
  if (raw === null) return null;
  try {
    const doc = JSON.parse(raw) as PersistedDoc;
    if (
      typeof doc !== "object" ||
      doc === null ||
      typeof doc.revision !== "number" ||
      typeof doc.state !== "object" ||
      typeof doc.view !== "object"
    ) {
      return null;
    }
    return doc;
  } catch {
    return null;
  }
}

export function clearLocal(storage: StorageLike, sessionId: string): void {
  storage.removeItem(storageKey(sessionId));
}

export function freshDoc(): PersistedDoc {
  return { state: emptyState(), view: { ...DEFAULT_VIEW }, revision: 0 };
}

/** In-memory StorageLike for tests and non-browser runs. */
export class MemoryStorage implements StorageLike {
  private map = new Map<string, string>();

  getItem(key: string): string | null {
    return this.map.has(key) ? (this.map.get(key) as string) : null;
  }

  setItem(key: string, value: string): void {
    this.map.set(key, value);
  }

  removeItem(key: string): void {
    this.map.delete(key);
  }
}
