/**
 * Canvas renderer for sighted co-testers and debugging.  Renders whatever
 * the latest geometry snapshot says: touch regions with labels in
 * navigation mode, the raw points in direct-touch mode.  Interaction
 * semantics never live here.
 */

import { Snapshot } from "./protocol.js";

export const SERIES_COLORS = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                              "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"];

export function renderSnapshot(canvas: HTMLCanvasElement,
                               snapshot: Snapshot): void {
  const [w, h] = snapshot.screen;
  canvas.width = w;
  canvas.height = h;
  const ctx = canvas.getContext("2d");
  if (!ctx) return;

  ctx.fillStyle = "#fcfcfc";
  ctx.fillRect(0, 0, w, h);

  for (const p of snapshot.points) {
    if (!p.visible) continue;
    if (p.x < -10 || p.x > w + 10 || p.y < -10 || p.y > h + 10) continue;
    ctx.fillStyle = SERIES_COLORS[p.series % SERIES_COLORS.length];
    ctx.globalAlpha = 0.8;
    ctx.beginPath();
    ctx.arc(p.x, p.y, 4, 0, Math.PI * 2);
    ctx.fill();
  }
  ctx.globalAlpha = 1;

  for (const region of snapshot.regions) {
    const [x0, y0, x1, y1] = region.rect;
    ctx.strokeStyle = region.focused ? "#d62728" : "#99a";
    ctx.lineWidth = region.focused ? 3 : 1;
    ctx.strokeRect(x0 + 1, y0 + 1, x1 - x0 - 2, y1 - y0 - 2);
    ctx.fillStyle = "#334";
    ctx.font = "11px sans-serif";
    const label = region.label.length > 28
      ? region.label.slice(0, 27) + "…" : region.label;
    ctx.save();
    ctx.beginPath();
    ctx.rect(x0, y0, x1 - x0, y1 - y0);
    ctx.clip();
    if (x1 - x0 < 70 && y1 - y0 > x1 - x0) {
      ctx.translate(x0 + 14, y0 + 6);
      ctx.rotate(Math.PI / 2);
      ctx.fillText(label, 0, 0);
    } else {
      ctx.fillText(label, x0 + 4, y0 + 14);
    }
    ctx.restore();
  }

  ctx.fillStyle = "#223";
  ctx.font = "bold 13px sans-serif";
  const mode = snapshot.mode === "SNF" ? "Navigation mode"
    : "Direct touch mode";
  const page = snapshot.page.count > 1
    ? `  ·  page ${snapshot.page.index + 1}/${snapshot.page.count}` : "";
  ctx.fillText(`${snapshot.title}  ·  ${mode}${page}`, 8, h - 8);
}
