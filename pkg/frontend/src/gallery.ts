/** Paged thumbnail grid with label badges and keyboard navigation. */

import { AppState } from "./state.js";

export function syncUrl(state: AppState): void {
  const params = new URLSearchParams();
  if (state.filters.unlabeled) params.set("unlabeled", "1");
  if (state.filters.character) params.set("character", state.filters.character);
  params.set("page", String(state.filters.page ?? 1));
  history.replaceState(null, "", `?${params}`);
}

export function filtersFromUrl(query: string): { unlabeled?: boolean; character?: string; page: number } {
  const params = new URLSearchParams(query);
  return {
    unlabeled: params.get("unlabeled") === "1" ? true : undefined,
    character: params.get("character") ?? undefined,
    page: Number(params.get("page") ?? "1") || 1,
  };
}

export function mountGallery(root: HTMLElement, state: AppState): void {
  root.innerHTML = `
    <div class="gallery-bar">
      <label><input type="checkbox" id="unlabeled-toggle"> unlabeled only</label>
      <input id="class-filter" placeholder="filter by character" size="10">
      <button id="prev-page">&#8592;</button>
      <span id="page-label"></span>
      <button id="next-page">&#8594;</button>
      <span id="total-label"></span>
    </div>
    <div id="banner" class="banner" hidden></div>
    <div id="grid" class="grid" tabindex="0"></div>
    <div id="empty" class="empty-state" hidden>no samples match the current filter</div>
  `;
  const toggle = root.querySelector<HTMLInputElement>("#unlabeled-toggle")!;
  const classFilter = root.querySelector<HTMLInputElement>("#class-filter")!;
  const grid = root.querySelector<HTMLDivElement>("#grid")!;

  toggle.addEventListener("change", () => {
    void state.refreshGallery({ unlabeled: toggle.checked ? true : undefined, page: 1 });
  });
  classFilter.addEventListener("change", () => {
    void state.refreshGallery({ character: classFilter.value || undefined, page: 1 });
  });
  root.querySelector("#prev-page")!.addEventListener("click", () => {
    const page = Math.max(1, (state.filters.page ?? 1) - 1);
    void state.refreshGallery({ page });
  });
  root.querySelector("#next-page")!.addEventListener("click", () => {
    void state.refreshGallery({ page: (state.filters.page ?? 1) + 1 });
  });
  grid.addEventListener("keydown", (event) => {
    if (event.key === "ArrowRight" || event.key === "ArrowLeft") {
      const cells = Array.from(grid.querySelectorAll<HTMLElement>(".cell"));
      const focused = cells.findIndex((c) => c === document.activeElement);
      const next = event.key === "ArrowRight" ? focused + 1 : focused - 1;
      cells[Math.min(cells.length - 1, Math.max(0, next))]?.focus();
      event.preventDefault();
    }
  });

  state.subscribe(() => {
    const page = state.gallery;
    const banner = root.querySelector<HTMLDivElement>("#banner")!;
    if (state.banner) {
      banner.textContent = `${state.banner} (dismiss)`;
      banner.hidden = false;
      banner.onclick = () => {
        banner.hidden = true;
      };
    } else {
      banner.hidden = true;
    }
    if (!page) return;
    root.querySelector("#page-label")!.textContent = `page ${page.page}`;
    root.querySelector("#total-label")!.textContent = `${page.total} samples`;
    root.querySelector<HTMLDivElement>("#empty")!.hidden = page.items.length > 0;
    grid.innerHTML = "";
    for (const sample of page.items) {
      const cell = document.createElement("button");
      cell.className = "cell";
      cell.dataset.id = sample.id;
      cell.innerHTML = `
        <img src="${sample.image_url}" alt="${sample.id}" loading="lazy">
        <span class="badge ${sample.labeled ? "labeled" : "unlabeled"}">${sample.labeled ? sample.character : "?"}</span>
      `;
      cell.addEventListener("click", () => void state.select(sample.id));
      grid.appendChild(cell);
    }
    syncUrl(state);
  });
}
