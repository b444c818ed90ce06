// Real-DOM implementation of the panel port.

import type { PanelPort } from "./panel.js";
import { playTurnAudio } from "./audio.js";
import type { RenderedTurn } from "./state.js";
import type { TwinBoard } from "./twin.js";
import type { StepDict } from "./types.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export class DomPort implements PanelPort {
  private history = document.getElementById("history") as HTMLElement;
  private input = document.getElementById("prompt") as HTMLInputElement;
  private send = document.getElementById("send") as HTMLButtonElement;
  private mic = document.getElementById("mic") as HTMLButtonElement;
  private rail = document.getElementById("rail") as HTMLElement;
  private notices = document.getElementById("notices") as HTMLElement;
  private twinRoot = document.getElementById("twin") as HTMLElement;

  constructor(
    private steps: StepDict[],
    private onTwinAction: (action: string, params?: Record<string, string>) => void,
  ) {}

  renderTurn(turn: RenderedTurn): void {
    const row = el("div", `turn ${turn.role} ${turn.kind ?? ""}`);
    row.appendChild(el("div", "text", turn.text));
    if (turn.role === "assistant" && turn.audioRef) {
      const replay = el("button", "replay", "replay audio");
      const ref = turn.audioRef;
      replay.onclick = () => playTurnAudio(`/media/${ref}`);
      row.appendChild(replay);
    }
    this.history.appendChild(row);
    this.history.scrollTop = this.history.scrollHeight;
  }

  setInputText(text: string): void {
    this.input.value = text;
  }

  setPending(pending: boolean): void {
    this.input.disabled = pending;
    this.send.disabled = pending;
    this.mic.disabled = pending;
  }

  notice(message: string): void {
    const toast = el("div", "notice", message);
    this.notices.appendChild(toast);
    setTimeout(() => toast.remove(), 6000);
  }

  renderRail(done: boolean[], currentStep: number, stage: string): void {
    this.rail.replaceChildren();
    done.forEach((isDone, i) => {
      const classes = ["step"];
      if (isDone) classes.push("done");
      if (i === currentStep && stage !== "completed") classes.push("current");
      const label = this.steps[i]?.title ?? `Step ${i + 1}`;
      this.rail.appendChild(
        el("div", classes.join(" "), `${isDone ? "✓" : "•"} ${label}`),
      );
    });
    const doneCount = done.filter(Boolean).length;
    this.rail.appendChild(
      el("div", "progress", `${doneCount}/${done.length} steps done`),
    );
  }

  renderTwin(board: TwinBoard): void {
    this.twinRoot.replaceChildren();
    this.twinRoot.appendChild(el("div", "phase banner", `Phase: ${board.phase}`));

    const fill = el("div", "fill-bar");
    const inner = el("div", "fill");
    inner.style.width = `${Math.round(board.fillLevel * 100)}%`;
    fill.appendChild(inner);
    this.twinRoot.appendChild(
      el("div", "fill-label", `Fill ${(board.fillLevel * 100).toFixed(0)}%` +
        (board.juiceKind ? ` (${board.juiceKind})` : "")),
    );
    this.twinRoot.appendChild(fill);

    const badges = el("div", "badges");
    const badge = (name: string, on: boolean) =>
      badges.appendChild(el("span", `badge ${on ? "on" : "off"}`, name));
    badge("spout", board.underSpout);
    badge("lid", board.lidAttached);
    badge("temperature", board.sensors.includes("temperature"));
    badge("ph", board.sensors.includes("ph"));
    badge("tube", board.tubeConnected);
    badge(board.pumpRunning ? "pump ON" : "pump off", board.pumpRunning);
    this.twinRoot.appendChild(badges);

    this.twinRoot.appendChild(
      el(
        "div",
        "mix",
        `Mix: ${board.mixStatus} ${(board.mixProgress * 100).toFixed(0)}% | ` +
          `pump ${board.pumpStrength}/${board.pumpMode}`,
      ),
    );

    const buttons = el("div", "twin-actions");
    const add = (
      label: string,
      action: string,
      params?: Record<string, string>,
    ) => {
      const button = el("button", "twin-btn", label);
      const key = params ? `${action}:${Object.values(params)[0]}` : action;
      button.disabled = !board.legal.has(key);
      button.onclick = () => this.onTwinAction(action, params);
      buttons.appendChild(button);
    };
    add("pick container", "pick_container");
    for (const kind of board.juiceKinds) {
      add(`place under ${kind} spout`, "place_under_spout", { juice_kind: kind });
    }
    add("remove from spout", "remove_from_spout");
    add("attach lid", "attach_lid");
    add("attach temperature sensor", "attach_sensor", { kind: "temperature" });
    add("attach pH sensor", "attach_sensor", { kind: "ph" });
    add("connect tube", "connect_tube");
    for (const level of ["low", "medium", "high"]) {
      add(`strength ${level}`, "set_pump_strength", { level });
    }
    for (const mode of ["continuous", "pulsed"]) {
      add(`mode ${mode}`, "set_pump_mode", { mode });
    }
    add("start pump", "start_pump");
    add("stop pump", "stop_pump");
    add("inspect mixture", "inspect_mixture");
    this.twinRoot.appendChild(buttons);
  }

  playAudio(url: string): void {
    playTurnAudio(url);
  }
}
