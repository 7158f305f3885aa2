/**
 * Annotation panel: character entry, the four index fields with inline
 * grammar validation, model suggestions, and conflict handling.
 */

import { AnnotationDraft, AppState, draftToIndexString } from "./state.js";
import { validateIndex, validateIndexField } from "./validator.js";

const FIELD_SPECS: Array<{ key: keyof AnnotationDraft; label: string; minimum: 0 | 1 }> = [
  { key: "page", label: "page", minimum: 1 },
  { key: "position", label: "position", minimum: 1 },
  { key: "typefaceSample", label: "typeface", minimum: 1 },
  { key: "handwrittenSerial", label: "serial", minimum: 0 },
];

export function draftFromIndexString(index: string): Partial<AnnotationDraft> {
  const fields = index.split("_");
  if (fields.length !== 4) return {};
  return {
    page: fields[0],
    position: fields[1],
    typefaceSample: fields[2],
    handwrittenSerial: fields[3],
  };
}

export function mountPanel(root: HTMLElement, state: AppState): void {
  root.innerHTML = `
    <h2>annotate</h2>
    <div id="panel-empty">select a sample from the gallery</div>
    <form id="panel-form" hidden>
      <img id="panel-image" alt="selected glyph">
      <label>character <input id="character" autocomplete="off"></label>
      <fieldset id="index-fields"><legend>index</legend></fieldset>
      <div id="index-error" class="field-error" hidden></div>
      <div id="suggestions"></div>
      <div id="conflict" class="conflict" hidden>
        another annotator changed this sample; the newer state was loaded. Review and submit again.
      </div>
      <button id="submit" type="submit">save</button>
      <span id="status"></span>
    </form>
  `;
  const form = root.querySelector<HTMLFormElement>("#panel-form")!;
  const fieldset = root.querySelector<HTMLFieldSetElement>("#index-fields")!;
  const inputs = new Map<string, HTMLInputElement>();
  for (const spec of FIELD_SPECS) {
    const label = document.createElement("label");
    label.textContent = spec.label + " ";
    const input = document.createElement("input");
    input.size = 6;
    input.dataset.key = spec.key;
    input.autocomplete = "off";
    label.appendChild(input);
    fieldset.appendChild(label);
    inputs.set(spec.key, input);
  }

  const currentDraft = (): AnnotationDraft => ({
    character: root.querySelector<HTMLInputElement>("#character")!.value,
    page: inputs.get("page")!.value,
    position: inputs.get("position")!.value,
    typefaceSample: inputs.get("typefaceSample")!.value,
    handwrittenSerial: inputs.get("handwrittenSerial")!.value,
  });

  const revalidate = (): boolean => {
    const errorBox = root.querySelector<HTMLDivElement>("#index-error")!;
    let firstProblem: string | null = null;
    for (const spec of FIELD_SPECS) {
      const input = inputs.get(spec.key)!;
      const problem = validateIndexField(input.value, spec.minimum);
      input.classList.toggle("invalid", problem !== null);
      if (problem !== null && firstProblem === null) {
        firstProblem = `${spec.label}: ${problem}`;
      }
    }
    const whole = validateIndex(draftToIndexString(currentDraft()));
    if (firstProblem === null && !whole.ok) firstProblem = whole.error ?? "invalid index";
    errorBox.textContent = firstProblem ?? "";
    errorBox.hidden = firstProblem === null;
    root.querySelector<HTMLButtonElement>("#submit")!.disabled = firstProblem !== null;
    return firstProblem === null;
  };
  for (const input of inputs.values()) input.addEventListener("input", revalidate);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    if (!revalidate()) return; // never hits the network with a bad index
    const status = root.querySelector<HTMLSpanElement>("#status")!;
    void state.submitAnnotation(currentDraft()).then((outcome) => {
      status.textContent = outcome.status === "saved" ? "saved" : outcome.message ?? outcome.status;
    });
  });

  state.subscribe(() => {
    const sample = state.selected;
    root.querySelector<HTMLDivElement>("#panel-empty")!.hidden = sample !== null;
    form.hidden = sample === null;
    if (!sample) return;
    root.querySelector<HTMLImageElement>("#panel-image")!.src = sample.image_url;
    root.querySelector<HTMLInputElement>("#character")!.value = sample.character;
    const parts = draftFromIndexString(sample.index);
    for (const spec of FIELD_SPECS) {
      inputs.get(spec.key)!.value = (parts[spec.key] as string | undefined) ?? "";
    }
    root.querySelector<HTMLDivElement>("#conflict")!.hidden = !state.conflictPrompt;
    const suggestions = root.querySelector<HTMLDivElement>("#suggestions")!;
    suggestions.innerHTML = "";
    for (const s of state.suggestions) {
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip";
      chip.textContent = `${s.character} ${(s.probability * 100).toFixed(1)}%`;
      chip.addEventListener("click", () => {
        root.querySelector<HTMLInputElement>("#character")!.value = s.character;
      });
      suggestions.appendChild(chip);
    }
    revalidate();
  });
}
