/** Browser entry point: wires the service client, the one-time layout
 * and the debounced slider together.  Everything interesting happens in
 * the imported modules; this file only touches the DOM. */

import { ApiClient } from "./api.js";
import type { GraphDocument } from "./api.js";
import { computeLayout } from "./layout.js";
import type { Point } from "./layout.js";
import { buildModel, toSvg } from "./render.js";
import { SCRUB_DEBOUNCE_MS, trailingDebounce } from "./slider.js";
import { ScrubCoordinator, sliderStops } from "./state.js";
import type { InstantChoice } from "./state.js";

interface Elements {
  canvas: HTMLElement;
  slider: HTMLInputElement;
  caption: HTMLElement;
  status: HTMLElement;
}

function elements(doc: Document): Elements {
  const pick = <T extends HTMLElement>(id: string): T => {
    const el = doc.getElementById(id);
    if (el === null) {
      throw new Error(`missing #${id}`);
    }
    return el as T;
  };
  return {
    canvas: pick("canvas"),
    slider: pick<HTMLInputElement>("slider"),
    caption: pick("caption"),
    status: pick("status"),
  };
}

export async function start(doc: Document, client: ApiClient): Promise<void> {
  const ui = elements(doc);
  ui.status.textContent = "loading";
  const graphs = await client.listGraphs();
  const first = graphs[0];
  if (first === undefined) {
    ui.status.textContent = "the service has no graphs loaded";
    return;
  }
  const full: GraphDocument = await client.graph(first.id);
  const span = await client.range(first.id);
  const positions: Map<number, Point> = computeLayout(full);
  ui.canvas.innerHTML = toSvg(buildModel(full, positions));
  ui.status.textContent = `${first.name}: ${full.nodes.length} nodes, ${full.edges.length} edges`;
  if (span === null) {
    ui.caption.textContent = "no instants";
    return;
  }

  const stops = sliderStops(span.min_instant, span.max_instant, span.has_now);
  ui.slider.min = "0";
  ui.slider.max = String(stops.length - 1);
  ui.slider.value = String(stops.length - 1);
  const coordinator = new ScrubCoordinator();

  const show = async (choice: InstantChoice): Promise<void> => {
    const ticket = coordinator.begin();
    let slice: GraphDocument;
    try {
      slice = await client.snapshot(first.id, choice);
    } catch (error) {
      ui.status.textContent = String(error);
      return;
    }
    if (!coordinator.accept(ticket)) {
      return;
    }
    ui.canvas.innerHTML = toSvg(buildModel(slice, positions));
    ui.status.textContent = `${slice.nodes.length} nodes at ${choice}`;
  };

  const scrub = trailingDebounce(SCRUB_DEBOUNCE_MS, (choice: InstantChoice) => {
    void show(choice);
  });

  ui.slider.addEventListener("input", () => {
    const choice = stops[Number(ui.slider.value)];
    if (choice === undefined) {
      return;
    }
    ui.caption.textContent = String(choice);
    scrub(choice);
  });

  const last = stops[stops.length - 1];
  if (last !== undefined) {
    ui.caption.textContent = String(last);
    await show(last);
  }
}

if (typeof document !== "undefined" && typeof window !== "undefined") {
  const base = new URLSearchParams(window.location.search).get("api") ?? "http://127.0.0.1:8000";
  void start(document, new ApiClient(base));
}
