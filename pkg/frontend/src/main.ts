import { ApiClient } from "./api";
import { SpheresApp, AppState } from "./app";
import { filterByTitle } from "./panel";
import type { ContextItem, RoSummary } from "./types";

const SVG_NS = "http://www.w3.org/2000/svg";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text) node.textContent = text;
  return node;
}

function renderSpheres(svg: SVGSVGElement, state: AppState): void {
  svg.innerHTML = "";
  const layout = state.layout;
  const center = layout?.center ?? { x: 300, y: 300 };
  const rings = layout?.rings ?? { context: 70, inner: 150, outer: 240 };
  for (const [radius, cls] of [
    [rings.outer, "ring outer"],
    [rings.inner, "ring inner"],
    [rings.context, "ring context"],
  ] as const) {
    const circle = document.createElementNS(SVG_NS, "circle");
    circle.setAttribute("cx", String(center.x));
    circle.setAttribute("cy", String(center.y));
    circle.setAttribute("r", String(radius));
    circle.setAttribute("class", cls);
    svg.appendChild(circle);
  }
  for (const placed of layout?.placed ?? []) {
    const dot = document.createElementNS(SVG_NS, "circle");
    dot.setAttribute("cx", String(placed.x));
    dot.setAttribute("cy", String(placed.y));
    dot.setAttribute("r", "9");
    dot.setAttribute("class", `result ${placed.band}`);
    const title = document.createElementNS(SVG_NS, "title");
    title.textContent = `${placed.id} (${placed.score.toFixed(3)})`;
    dot.appendChild(title);
    svg.appendChild(dot);
  }
}

function draggable(node: HTMLElement, item: ContextItem): void {
  node.draggable = true;
  node.addEventListener("dragstart", (event) => {
    event.dataTransfer?.setData("application/json", JSON.stringify(item));
  });
}

function renderGroups(
  container: HTMLElement,
  state: AppState,
  query: string
): void {
  container.innerHTML = "";
  if (!state.groups) {
    container.appendChild(el("p", "hint", "Sign in to load your collection."));
    return;
  }
  const groups = filterByTitle(state.groups, query);
  const sections: [string, RoSummary[]][] = [
    ["My research objects", groups.own],
    ["Collaborators", groups.collaborators],
    ["Everything else", groups.rest],
  ];
  for (const [label, ros] of sections) {
    container.appendChild(el("h3", undefined, `${label} (${ros.length})`));
    const list = el("ul");
    for (const ro of ros) {
      const item = el("li", "ro-item", ro.title);
      draggable(item, { kind: "ro", id: ro.id });
      list.appendChild(item);
    }
    container.appendChild(list);
  }
}

function renderInfo(container: HTMLElement, state: AppState): void {
  container.innerHTML = "";
  if (state.hint) {
    container.appendChild(el("p", "hint", state.hint));
  }
  if (!state.info) return;
  container.appendChild(el("h3", undefined, state.info.title));
  container.appendChild(el("p", undefined, `status: ${state.info.status}`));
  container.appendChild(
    el("p", undefined, `creators: ${state.info.creators.join(", ")}`)
  );
  if (state.info.doi) {
    container.appendChild(el("p", undefined, `doi: ${state.info.doi}`));
  }
}

function renderContext(
  container: HTMLElement,
  state: AppState,
  app: SpheresApp
): void {
  container.innerHTML = "";
  for (const item of state.context) {
    const chip = el("span", "chip", `${item.kind}: ${item.id}`);
    const remove = el("button", "remove", "x");
    remove.addEventListener("click", () => void app.removeFromContext(item));
    chip.appendChild(remove);
    container.appendChild(chip);
  }
}

export function boot(root: HTMLElement): SpheresApp {
  const panel = el("aside", "panel");
  const search = el("input") as HTMLInputElement;
  search.placeholder = "filter by title";
  const groupsBox = el("div", "groups");
  const infoBox = el("div", "info");
  panel.append(search, groupsBox, infoBox);

  const stage = el("main", "stage");
  const contextBox = el("div", "context");
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", "0 0 600 600");
  stage.append(contextBox, svg);

  const login = el("form", "login");
  const tokenInput = el("input") as HTMLInputElement;
  tokenInput.placeholder = "bearer token";
  const userInput = el("input") as HTMLInputElement;
  userInput.placeholder = "user id";
  const submit = el("button", undefined, "sign in");
  login.append(tokenInput, userInput, submit);

  root.append(login, panel, stage);

  const api = new ApiClient("");
  let lastState: AppState | null = null;
  const app = new SpheresApp({
    api,
    onRender: (state) => {
      lastState = state;
      renderSpheres(svg, state);
      renderGroups(groupsBox, state, search.value);
      renderInfo(infoBox, state);
      renderContext(contextBox, state, app);
    },
  });

  search.addEventListener("input", () => {
    if (lastState) renderGroups(groupsBox, lastState, search.value);
  });
  login.addEventListener("submit", (event) => {
    event.preventDefault();
    void app.signIn(tokenInput.value, userInput.value);
  });
  svg.addEventListener("dragover", (event) => event.preventDefault());
  svg.addEventListener("drop", (event) => {
    event.preventDefault();
    const raw = event.dataTransfer?.getData("application/json");
    if (raw) {
      void app.drop(JSON.parse(raw) as ContextItem);
    }
  });

  return app;
}

if (typeof document !== "undefined" && document.getElementById("spheres-root")) {
  boot(document.getElementById("spheres-root") as HTMLElement);
}
