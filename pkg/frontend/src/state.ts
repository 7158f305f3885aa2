/**
 * DOM-free application state.
 *
 * Holds the gallery page, the selected sample, the class histogram and
 * model suggestions; every mutation goes through the service and then
 * refetches, so the store never drifts from the backend. Rendering
 * layers subscribe to change events.
 */

import {
  ApiClient,
  GalleryFilters,
  Histogram,
  Prediction,
  SamplePage,
  SampleSummary,
  ServiceError,
} from "./api.js";
import { validateIndex } from "./validator.js";

export type Listener = () => void;

export interface AnnotationDraft {
  character: string;
  page: string;
  position: string;
  typefaceSample: string;
  handwrittenSerial: string;
}

export interface SubmitOutcome {
  status: "saved" | "invalid" | "conflict" | "error";
  message?: string;
}

export function draftToIndexString(draft: AnnotationDraft): string {
  return [draft.page, draft.position, draft.typefaceSample, draft.handwrittenSerial].join("_");
}

export class AppState {
  gallery: SamplePage | null = null;
  filters: GalleryFilters = { page: 1, pageSize: 24 };
  selected: SampleSummary | null = null;
  suggestions: Prediction[] = [];
  histogram: Histogram | null = null;
  modelIds: string[] = [];
  banner: string | null = null;
  conflictPrompt: boolean = false;

  private listeners: Listener[] = [];

  constructor(public api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  /** Re-run every subscribed renderer; also useful in tests. */
  notify(): void {
    for (const listener of this.listeners) listener();
  }

  async refreshGallery(filters?: GalleryFilters): Promise<void> {
    if (filters) this.filters = { ...this.filters, ...filters };
    try {
      this.gallery = await this.api.listSamples(this.filters);
      this.banner = null;
    } catch (err) {
      this.banner = err instanceof ServiceError ? err.message : String(err);
    }
    this.notify();
  }

  async refreshHistogram(): Promise<void> {
    try {
      this.histogram = await this.api.histogram();
    } catch (err) {
      this.banner = err instanceof ServiceError ? err.message : String(err);
    }
    this.notify();
  }

  async loadModels(): Promise<void> {
    try {
      this.modelIds = (await this.api.models()).models;
    } catch {
      this.modelIds = [];
    }
    this.notify();
  }

  async select(sampleId: string): Promise<void> {
    this.selected = await this.api.getSample(sampleId);
    this.conflictPrompt = false;
    this.suggestions = [];
    this.notify();
    if (this.modelIds.length > 0) {
      try {
        const res = await this.api.predict(sampleId, this.modelIds[0], 5);
        this.suggestions = res.predictions;
      } catch {
        this.suggestions = [];
      }
      this.notify();
    }
  }

  /** Validate locally, PUT with the freshest version token, refetch. */
  async submitAnnotation(draft: AnnotationDraft, editor = "annotation-ui"): Promise<SubmitOutcome> {
    if (this.selected === null) {
      return { status: "error", message: "no sample selected" };
    }
    const indexString = draftToIndexString(draft);
    const verdict = validateIndex(indexString);
    if (!verdict.ok) {
      return { status: "invalid", message: verdict.error };
    }
    try {
      const updated = await this.api.annotate(this.selected.id, {
        character: draft.character,
        index: indexString,
        editor,
        version: this.selected.version,
      });
      this.selected = updated;
      this.conflictPrompt = false;
      await this.refreshGallery();
      await this.refreshHistogram();
      return { status: "saved" };
    } catch (err) {
      if (err instanceof ServiceError && err.isConflict) {
        // someone else won: reload the sample, surface the newer state
        this.selected = await this.api.getSample(this.selected.id);
        this.conflictPrompt = true;
        this.notify();
        return { status: "conflict", message: err.message };
      }
      const message = err instanceof ServiceError ? err.message : String(err);
      this.banner = message;
      this.notify();
      return { status: "error", message };
    }
  }
}
