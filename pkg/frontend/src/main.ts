import { fetchLabels, fetchVis } from "./api.js";
import { saveLabels } from "./controller.js";
import { rankTerms } from "./relevance.js";
import { frameNames, frameProfile, layoutTermBars, layoutTopicMap } from "./render.js";
import {
  applySavedLabels,
  createState,
  labelFor,
  loadVis,
  selectTopic,
  setDraftLabel,
  setLambda,
} from "./state.js";
import type { ExplorerState } from "./state.js";

const SVG_NS = "http://www.w3.org/2000/svg";
const MAP_WIDTH = 480;
const MAP_HEIGHT = 400;
const BAR_WIDTH = 320;

const state: ExplorerState = createState();

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing #${id} in the page shell`);
  return node as T;
}

function topicTitle(topic: number): string {
  const label = state.savedLabels.get(topic);
  return label ? `Topic #${topic} (${label})` : `Topic #${topic}`;
}

function renderMap(): void {
  const vis = state.vis;
  if (vis === null) return;
  const svg = el<HTMLElement>("topic-map") as unknown as SVGSVGElement;
  while (svg.firstChild !== null) svg.removeChild(svg.firstChild);

  const frame = (el<HTMLSelectElement>("frame-select")).value;
  const profile = frame ? frameProfile(vis, frame) : null;
  for (const spec of layoutTopicMap(vis, MAP_WIDTH, MAP_HEIGHT, state.selectedTopic)) {
    const g = document.createElementNS(SVG_NS, "g");
    g.setAttribute("class", spec.selected ? "topic selected" : "topic");
    g.addEventListener("click", () => {
      selectTopic(state, spec.id);
      renderAll();
    });

    if (profile !== null) {
      const share = profile[spec.id] ?? 0;
      const halo = document.createElementNS(SVG_NS, "circle");
      halo.setAttribute("cx", String(spec.cx));
      halo.setAttribute("cy", String(spec.cy));
      halo.setAttribute("r", String(spec.r + 4 + share * 24));
      halo.setAttribute("class", "frame-halo");
      g.appendChild(halo);
    }

    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(spec.cx));
    circle.setAttribute("cy", String(spec.cy));
    circle.setAttribute("r", String(spec.r));
    g.appendChild(circle);

    const text = document.createElementNS(SVG_NS, "text");
    text.setAttribute("x", String(spec.cx));
    text.setAttribute("y", String(spec.cy));
    text.textContent = String(spec.id);
    g.appendChild(text);

    svg.appendChild(g);
  }
}

function renderFramePanel(): void {
  const vis = state.vis;
  if (vis === null) return;
  const panel = el<HTMLDivElement>("frame-profile");
  panel.textContent = "";
  const frame = (el<HTMLSelectElement>("frame-select")).value;
  if (!frame) return;
  const profile = frameProfile(vis, frame);
  if (profile === null) {
    panel.textContent = `${frame}: no matched documents in this corpus`;
    return;
  }
  profile.forEach((share, topic) => {
    const row = document.createElement("div");
    row.className = "profile-row";
    const name = document.createElement("span");
    name.textContent = topicTitle(topic);
    const bar = document.createElement("div");
    bar.className = "profile-bar";
    bar.style.width = `${Math.round(share * 200)}px`;
    const value = document.createElement("span");
    value.textContent = `${(share * 100).toFixed(1)}%`;
    row.append(name, bar, value);
    panel.appendChild(row);
  });
}

function renderBars(): void {
  const vis = state.vis;
  if (vis === null) return;
  el<HTMLHeadingElement>("terms-title").textContent = `Top terms, ${topicTitle(state.selectedTopic)}`;
  el<HTMLSpanElement>("lambda-value").textContent = state.lambda.toFixed(2);
  const ranked = rankTerms(vis, state.selectedTopic, state.lambda);
  const host = el<HTMLDivElement>("term-bars");
  host.textContent = "";
  for (const bar of layoutTermBars(ranked, BAR_WIDTH)) {
    const row = document.createElement("div");
    row.className = "term-row";
    const name = document.createElement("span");
    name.className = "term-name";
    name.textContent = bar.term;
    const fill = document.createElement("div");
    fill.className = "term-bar";
    fill.style.width = `${Math.max(1, Math.round(bar.width))}px`;
    fill.title = `phi = ${bar.phi.toPrecision(3)}`;
    row.append(name, fill);
    host.appendChild(row);
  }
}

function renderEditor(): void {
  el<HTMLInputElement>("label-input").value = labelFor(state, state.selectedTopic);
  el<HTMLLabelElement>("label-topic").textContent = `Label for topic #${state.selectedTopic}`;
  const status = el<HTMLSpanElement>("save-status");
  if (state.dirty) {
    status.textContent = "unsaved changes";
    status.className = "dirty";
  } else if (status.className === "dirty") {
    status.textContent = "";
    status.className = "";
  }
}

function renderAll(): void {
  renderMap();
  renderFramePanel();
  renderBars();
  renderEditor();
}

async function onSave(): Promise<void> {
  const status = el<HTMLSpanElement>("save-status");
  const outcome = await saveLabels(state);
  if (outcome.ok) {
    status.textContent = `saved ${outcome.saved} label(s)`;
    status.className = "saved";
    renderAll();
    return;
  }
  if (outcome.reason === "empty-label") {
    status.textContent = `label for topic #${outcome.topics.join(", #")} is empty; not saved`;
  } else {
    status.textContent = `save failed (${outcome.message}); changes kept, press Save to retry`;
  }
  status.className = "error";
}

function wireControls(): void {
  const slider = el<HTMLInputElement>("lambda");
  slider.addEventListener("input", () => {
    setLambda(state, slider.valueAsNumber);
    slider.value = String(state.lambda);
    renderBars();
  });

  const input = el<HTMLInputElement>("label-input");
  input.addEventListener("input", () => {
    setDraftLabel(state, state.selectedTopic, input.value);
    renderEditor();
  });

  el<HTMLButtonElement>("save-labels").addEventListener("click", () => {
    void onSave();
  });

  window.addEventListener("beforeunload", (event) => {
    if (state.dirty) {
      event.preventDefault();
      event.returnValue = "";
    }
  });
}

function fillFrameSelect(): void {
  const vis = state.vis;
  if (vis === null) return;
  const select = el<HTMLSelectElement>("frame-select");
  for (const name of frameNames(vis)) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    select.appendChild(option);
  }
  select.addEventListener("change", () => {
    renderMap();
    renderFramePanel();
  });
}

async function init(): Promise<void> {
  const status = el<HTMLParagraphElement>("status");
  try {
    loadVis(state, await fetchVis());
  } catch (err) {
    status.textContent = `failed to load vis data: ${err instanceof Error ? err.message : err}`;
    status.className = "error";
    return;
  }
  try {
    applySavedLabels(state, await fetchLabels());
  } catch {
    status.textContent = "labels unavailable; editing starts from an empty set";
  }
  fillFrameSelect();
  wireControls();
  renderAll();
}

void init();
