/**
 * DOM wiring for the explorer page.
 *
 * Loads a bundle JSON (auto-fetches ./data/bundle.json when present, or via
 * the file picker), builds one slider per atom frame, and repaints the
 * canvas after every interaction. No server, no network beyond the optional
 * same-directory fetch.
 */

import { BundleFormatError } from "./bundle.js";
import { fuseGlobal, maxAbsDiff } from "./fusion.js";
import { ExplorerState } from "./state.js";

let state: ExplorerState | null = null;

const $ = (id: string) => document.getElementById(id) as HTMLElement;

function showError(message: string): void {
  const banner = $("error-banner");
  banner.textContent = message;
  banner.style.display = "block";
}

function clearError(): void {
  $("error-banner").style.display = "none";
}

function loadDocument(doc: unknown): void {
  try {
    state = ExplorerState.load(doc);
  } catch (err) {
    // keep whatever was loaded before; just surface the problem
    const reason = err instanceof BundleFormatError ? err.message : String(err);
    showError(`could not load bundle: ${reason}`);
    return;
  }
  clearError();
  buildControls();
  paint();
  reportGoldenParity();
}

function buildControls(): void {
  if (!state) return;
  const { m, k, width, height, fusionMode } = state.bundle;
  $("bundle-info").textContent =
    `${width}×${height}, ${m} atom frames, ${k} viewer column${k === 1 ? "" : "s"}, ${fusionMode} fusion`;

  for (const [containerId, handler] of [
    ["sliders", (j: number, v: number) => state!.setWeight(j, v)],
    ["inner-sliders", (j: number, v: number) => state!.setInnerWeight(j, v)],
    ["outer-sliders", (j: number, v: number) => state!.setOuterWeight(j, v)],
  ] as const) {
    const container = $(containerId);
    container.innerHTML = "";
    for (let j = 0; j < m; j++) {
      const label = document.createElement("label");
      label.textContent = `frame ${j + 1}`;
      const slider = document.createElement("input");
      slider.type = "range";
      slider.min = "0";
      slider.max = "1";
      slider.step = "0.01";
      slider.value = "1";
      slider.addEventListener("input", () => {
        handler(j, Number(slider.value));
        paint();
      });
      label.appendChild(slider);
      container.appendChild(label);
    }
  }

  const viewerSelect = $("viewer-select") as HTMLSelectElement;
  viewerSelect.innerHTML = "";
  for (let col = 0; col < k; col++) {
    const option = document.createElement("option");
    option.value = String(col);
    option.textContent = `viewer ${col + 1}`;
    viewerSelect.appendChild(option);
  }
}

function paint(): void {
  if (!state) return;
  const { width, height } = state.bundle;
  const canvas = $("view") as HTMLCanvasElement;
  canvas.width = width;
  canvas.height = height;
  const ctx = canvas.getContext("2d")!;
  const pixels = new Uint8ClampedArray(width * height * 4);
  const fused = state.rendered;
  for (let p = 0; p < fused.length; p++) {
    const byte = Math.round(fused[p] * 255);
    pixels[4 * p] = byte;
    pixels[4 * p + 1] = byte;
    pixels[4 * p + 2] = byte;
    pixels[4 * p + 3] = 255;
  }
  ctx.putImageData(new ImageData(pixels, width, height), 0, 0);
  syncSliders();
}

function syncSliders(): void {
  if (!state) return;
  const sliders = $("sliders").querySelectorAll("input");
  sliders.forEach((slider, j) => {
    (slider as HTMLInputElement).value = String(state!.weights[j]);
  });
}

function reportGoldenParity(): void {
  if (!state) return;
  const { frames, fusionMode, golden } = state.bundle;
  let worst = 0;
  for (const entry of golden) {
    const fused = fuseGlobal(frames, entry.weights, fusionMode);
    worst = Math.max(worst, maxAbsDiff(fused, entry.fusedImage));
  }
  $("golden-report").textContent = golden.length
    ? `golden parity: ${golden.length} vectors, worst |diff| ${worst.toExponential(2)} ${worst <= 1e-6 ? "(ok)" : "(FAIL)"}`
    : "bundle carries no golden vectors";
}

function wireStaticControls(): void {
  ($("file-input") as HTMLInputElement).addEventListener("change", async (ev) => {
    const file = (ev.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      loadDocument(JSON.parse(await file.text()));
    } catch (err) {
      showError(`could not parse JSON: ${String(err)}`);
    }
  });

  $("normal-view-toggle").addEventListener("click", () => {
    if (!state) return;
    state.toggleNormalView();
    $("normal-view-toggle").classList.toggle("active", state.isNormalView);
    paint();
  });

  ($("region-toggle") as HTMLInputElement).addEventListener("change", (ev) => {
    if (!state) return;
    const on = (ev.target as HTMLInputElement).checked;
    state.setRegionMode(on);
    $("region-controls").style.display = on ? "block" : "none";
    paint();
  });

  ($("viewer-select") as HTMLSelectElement).addEventListener("change", (ev) => {
    if (!state) return;
    const col = Number((ev.target as HTMLSelectElement).value);
    state.setWeights(state.bundle.weights.map((row) => row[col]));
    paint();
  });

  for (const id of ["region-cx", "region-cy", "region-radius"]) {
    $(id).addEventListener("input", () => {
      if (!state) return;
      state.setRegion({
        cx: Number(($("region-cx") as HTMLInputElement).value),
        cy: Number(($("region-cy") as HTMLInputElement).value),
        radius: Number(($("region-radius") as HTMLInputElement).value),
      });
      paint();
    });
  }
}

async function boot(): Promise<void> {
  wireStaticControls();
  try {
    const response = await fetch("./data/bundle.json");
    if (response.ok) {
      loadDocument(await response.json());
      return;
    }
  } catch {
    // no bundled data directory; wait for the file picker
  }
  $("bundle-info").textContent = "load an exported bundle.json to begin";
}

boot();
