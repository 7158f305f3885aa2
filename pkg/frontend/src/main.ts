import { ApiClient } from "./api.js";
import { renderChartSvg } from "./chart.js";
import { filtersFromUrl, mountGallery } from "./gallery.js";
import { mountPanel } from "./panel.js";
import { AppState } from "./state.js";

function mountChart(root: HTMLElement, state: AppState): void {
  state.subscribe(() => {
    if (state.histogram) {
      root.innerHTML = `<h2>class distribution</h2>${renderChartSvg(state.histogram)}`;
    }
  });
}

export async function boot(): Promise<AppState> {
  const state = new AppState(new ApiClient(""));
  mountGallery(document.getElementById("gallery")!, state);
  mountPanel(document.getElementById("panel")!, state);
  mountChart(document.getElementById("chart")!, state);
  await state.loadModels();
  const initial = filtersFromUrl(location.search);
  await state.refreshGallery(initial);
  await state.refreshHistogram();
  return state;
}

if (typeof document !== "undefined" && document.getElementById("gallery")) {
  void boot();
}
